// Copyright 2026 The nonortho Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "nonortho/errors.hpp"
#include "nonortho/measures.hpp"
#include "nonortho/qstate.hpp"

namespace nonortho {

/// The unique p for which the diagonal state is a 50/50 mixture of two
/// maximally nonorthogonal states: (1 + sqrt(2)/2) / 2.
inline constexpr double kIdealP = 0.5 * (1.0 + std::numbers::sqrt2 / 2.0);

/// Slack allowed on range checks before values are clamped into range.
inline constexpr double kRangeSlack = 1e-12;

namespace detail {

inline double checked_p(double p) {
    if (!(p >= 0.5 - kRangeSlack && p <= 1.0 + kRangeSlack)) {
        throw DomainError("require 1/2 <= p <= 1: " + describe("p", p));
    }
    return std::clamp(p, 0.5, 1.0);
}

inline double checked_z(double p, double z) {
    if (!(z >= 0.5 - kRangeSlack && z <= p + kRangeSlack)) {
        throw DomainError("require 1/2 <= z <= p: " + describe("z", z) + ", " + describe("p", p));
    }
    return std::clamp(z, 0.5, p);
}

/// p(1-p) / (z(1-z)), i.e. one minus the squared overlap of the preparation
/// states. The only zero denominator is z = p = 1, where the states are the
/// orthogonal eigenbasis and the ratio is taken as 1.
inline double mixing_ratio(double p, double z) {
    double denom = z * (1.0 - z);
    return denom > 0.0 ? p * (1.0 - p) / denom : 1.0;
}

}  // namespace detail

/// Amplitudes (alpha, beta) selecting one two-state preparation.
class DecompositionParams {
  public:
    DecompositionParams(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta), alpha_sq_(std::norm(alpha)) {
        double norm2 = std::norm(alpha) + std::norm(beta);
        if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kNormTolerance) {
            throw ValidationError("require |alpha|^2 + |beta|^2 = 1: " + detail::describe("sum", norm2));
        }
        if (std::norm(alpha) < 0.5 - kRangeSlack) {
            throw DomainError("require |alpha|^2 >= 1/2 (swap alpha and beta to canonicalize): " +
                              detail::describe("|alpha|^2", std::norm(alpha)));
        }
    }

    /// alpha = sqrt(a) e^{i alpha_phase}, beta = sqrt(1 - a) e^{i beta_phase}.
    static DecompositionParams from_polar(double alpha_sq, double alpha_phase = 0.0, double beta_phase = 0.0) {
        if (!(alpha_sq >= 0.0 && alpha_sq <= 1.0)) {
            throw DomainError("require 0 <= |alpha|^2 <= 1: " + detail::describe("|alpha|^2", alpha_sq));
        }
        DecompositionParams params(std::polar(std::sqrt(alpha_sq), alpha_phase),
                                   std::polar(std::sqrt(1.0 - alpha_sq), beta_phase));
        params.alpha_sq_ = alpha_sq;
        return params;
    }

    Complex alpha() const { return alpha_; }
    Complex beta() const { return beta_; }
    double alpha_sq() const { return alpha_sq_; }

  private:
    Complex alpha_;
    Complex beta_;
    double alpha_sq_;
};

/// rho = z|phi1><phi1| + (1 - z)|phi2><phi2|.
struct Decomposition {
    double z;
    PureState2 phi1;
    PureState2 phi2;
    double source_p;

    Density2 reconstruct() const { return Density2::mixture(z, phi1, phi2); }
};

/// Weight of the first preparation state: 2p|alpha|^2 + 1 - p - |alpha|^2.
inline double z_of_alpha(double p, double alpha_sq) {
    p = detail::checked_p(p);
    if (!(alpha_sq >= 0.5 - kRangeSlack && alpha_sq <= 1.0 + kRangeSlack)) {
        throw DomainError("require 1/2 <= |alpha|^2 <= 1: " + detail::describe("|alpha|^2", alpha_sq));
    }
    alpha_sq = std::clamp(alpha_sq, 0.5, 1.0);
    // Grouped so that z is monotone in |alpha|^2 under rounding.
    return (1.0 - p) + (2.0 * p - 1.0) * alpha_sq;
}

/// The two-state preparation of diag(p, 1 - p) selected by params.
inline Decomposition decompose(double p, const DecompositionParams &params) {
    p = detail::checked_p(p);
    const Complex alpha = params.alpha();
    const Complex beta = params.beta();
    const double z = z_of_alpha(p, params.alpha_sq());
    if (p == 1.0) {
        // A pure state only decomposes trivially.
        if (std::abs(params.alpha_sq() - 1.0) > kRangeSlack) {
            throw DegenerateDecompositionError("p = 1 admits only |alpha|^2 = 1: " +
                                               detail::describe("|alpha|^2", params.alpha_sq()));
        }
        return {1.0, PureState2::normalized(alpha, 0.0), PureState2::normalized(0.0, -std::conj(alpha)), p};
    }
    const double sp = std::sqrt(p);
    const double sq = std::sqrt(1.0 - p);
    const double w1 = 1.0 / std::sqrt(z);
    const double w2 = 1.0 / std::sqrt(1.0 - z);
    PureState2 phi1(w1 * sp * alpha, w1 * sq * std::conj(beta));
    PureState2 phi2(w2 * sp * beta, -w2 * sq * std::conj(alpha));
    return {z, phi1, phi2, p};
}

/// |<phi2|phi1>|^2 = 1 - p(1-p) / (z(1-z)).
inline double hidden_overlap(double p, double z) {
    p = detail::checked_p(p);
    z = detail::checked_z(p, z);
    return std::clamp(1.0 - detail::mixing_ratio(p, z), 0.0, 1.0);
}

/// Linear nonorthogonality of the two preparation states.
inline double pair_nonortho(double p, double z) {
    p = detail::checked_p(p);
    z = detail::checked_z(p, z);
    return 1.0 - 2.0 * std::abs(0.5 - detail::mixing_ratio(p, z));
}

enum class OverlapBranch {
    Low,   ///< squared overlap < 1/2
    High,  ///< squared overlap >= 1/2
};

inline const char *to_string(OverlapBranch b) { return b == OverlapBranch::Low ? "low_overlap" : "high_overlap"; }

inline OverlapBranch overlap_branch(double p, double z) {
    return hidden_overlap(p, z) < 0.5 ? OverlapBranch::Low : OverlapBranch::High;
}

/// Ensemble nonorthogonality 2 min(z, 1 - z) N_pair, per pair of systems.
///
/// Evaluated both directly and through the closed forms of the two overlap
/// branches; the routes must agree to 1e-12.
inline double ensemble_nonortho(double p, double z) {
    p = detail::checked_p(p);
    z = detail::checked_z(p, z);
    const double direct = 2.0 * std::min(z, 1.0 - z) * pair_nonortho(p, z);
    const double q = p * (1.0 - p);
    const double branch = overlap_branch(p, z) == OverlapBranch::Low ? 4.0 * (1.0 - z) - 4.0 * q / z : 4.0 * q / z;
    if (std::abs(direct - branch) > 1e-12) {
        throw InvariantViolation("ensemble nonorthogonality routes disagree at " + detail::describe("p", p) + ", " +
                                 detail::describe("z", z));
    }
    return direct;
}

/// Weight z >= 1/2 at which the preparation states are maximally
/// nonorthogonal, i.e. z(1 - z) = 2p(1 - p). Empty when no such z exists
/// (p below kIdealP) and for the pure state p = 1.
inline std::optional<double> max_pair_z(double p) {
    p = detail::checked_p(p);
    if (p == 1.0) {
        return std::nullopt;
    }
    double disc = 1.0 - 8.0 * p * (1.0 - p);
    if (disc < -kRangeSlack) {
        return std::nullopt;
    }
    return 0.5 * (1.0 + std::sqrt(std::max(disc, 0.0)));
}

/// Branch that governs the ensemble maximum, attained at z = 1/2.
inline OverlapBranch max_ensemble_branch(double p) {
    p = detail::checked_p(p);
    return p * (1.0 - p) > 0.125 ? OverlapBranch::Low : OverlapBranch::High;
}

/// Maximum of ensemble_nonortho(p, .) over z in [1/2, p].
inline double max_ensemble(double p) {
    p = detail::checked_p(p);
    const double q = p * (1.0 - p);
    return max_ensemble_branch(p) == OverlapBranch::Low ? 2.0 - 8.0 * q : 8.0 * q;
}

/// diag(kIdealP, 1 - kIdealP).
inline DiagonalDensity ideal_rho() { return DiagonalDensity(kIdealP); }

}  // namespace nonortho
