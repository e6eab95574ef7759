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
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nonortho/errors.hpp"
#include "nonortho/qstate.hpp"

namespace nonortho {

/// H(x) = -x log2 x - (1 - x) log2 (1 - x) in bits, with 0 log 0 = 0.
inline double binary_entropy(double x) {
    if (!(x >= -kNormTolerance && x <= 1.0 + kNormTolerance)) {
        throw DomainError("binary entropy requires 0 <= x <= 1: " + detail::describe("x", x));
    }
    x = std::clamp(x, 0.0, 1.0);
    auto term = [](double q) { return q > 0.0 ? -q * std::log2(q) : 0.0; };
    return term(x) + term(1.0 - x);
}

/// Shannon entropy in bits of a probability vector. Entries below zero by
/// rounding are treated as zero.
inline double shannon_entropy(std::span<const double> probabilities) {
    double h = 0.0;
    for (double q : probabilities) {
        if (q < -kNormTolerance) {
            throw DomainError("negative probability: " + detail::describe("q", q));
        }
        if (q > 0.0) {
            h -= q * std::log2(q);
        }
    }
    return h;
}

/// Linear nonorthogonality 1 - 2 | |<psi2|psi1>|^2 - 1/2 |, in nbits.
inline double n0(const PureState2 &psi1, const PureState2 &psi2) {
    return 1.0 - 2.0 * std::abs(overlap2(psi1, psi2) - 0.5);
}

/// Entropic nonorthogonality: the binary entropy of the squared overlap.
inline double n1(const PureState2 &psi1, const PureState2 &psi2) { return binary_entropy(overlap2(psi1, psi2)); }

/// Bits of genuinely new data produced by measuring x in basis b.
inline double selective_info(const PureState2 &x, const Basis2 &b) {
    return binary_entropy(std::clamp(measure_in_basis(x, b).p0, 0.0, 1.0));
}

/// Search controls for n2.
struct N2SearchConfig {
    int theta_steps = 256;
    int phi_steps = 256;
    int refinement_iterations = 40;
    double tolerance = 1e-10;

    void validate() const {
        if (theta_steps < 64 || phi_steps < 64) {
            throw DomainError("n2 grid resolution must be at least 64 per angle");
        }
        if (refinement_iterations < 0) {
            throw DomainError("n2 refinement iterations must be non-negative");
        }
        if (!(tolerance > 0.0)) {
            throw DomainError("n2 tolerance must be positive");
        }
    }
};

struct N2Result {
    /// Minimum over bases of the summed selective information, in bits.
    double value;
    /// Bloch angles of the first element of the minimizing basis.
    double theta;
    double phi;
    /// False when the final refinement level still improved by more than the tolerance.
    bool converged;

    double average() const { return value / 2.0; }
};

/// Summed selective information of psi1 and psi2 in the basis whose first
/// element sits at Bloch angles (theta, phi).
inline double n2_objective(const PureState2 &psi1, const PureState2 &psi2, double theta, double phi) {
    auto b = Basis2::containing(from_bloch(theta, phi));
    return selective_info(psi1, b) + selective_info(psi2, b);
}

/// Bloch angles (theta, phi) of a state, up to global phase.
inline std::pair<double, double> bloch_angles(const PureState2 &x) {
    double theta = 2.0 * std::atan2(std::abs(x[1]), std::abs(x[0]));
    double phi = std::abs(x[1]) > 0.0 && std::abs(x[0]) > 0.0 ? std::arg(x[1]) - std::arg(x[0]) : 0.0;
    return {theta, phi};
}

namespace detail {

struct BasisPoint {
    double theta;
    double phi;
    double value;

    bool operator<(const BasisPoint &o) const {
        return std::tie(value, theta, phi) < std::tie(o.value, o.theta, o.phi);
    }
};

/// Coordinate pattern search with step halving. Returns the final point and
/// the objective improvement achieved on the last level.
template <typename Objective>
std::pair<BasisPoint, double> pattern_search(Objective &&f, BasisPoint start, double step_theta, double step_phi,
                                             int levels) {
    constexpr int kMaxMovesPerLevel = 100000;
    BasisPoint cur = start;
    double last_gain = 0.0;
    for (int level = 0; level < levels; ++level) {
        double level_start = cur.value;
        for (int move = 0; move < kMaxMovesPerLevel; ++move) {
            BasisPoint best = cur;
            const std::array<std::pair<double, double>, 4> offsets{
                {{step_theta, 0.0}, {-step_theta, 0.0}, {0.0, step_phi}, {0.0, -step_phi}}};
            for (auto [dt, dp] : offsets) {
                BasisPoint trial{cur.theta + dt, cur.phi + dp, 0.0};
                trial.value = f(trial.theta, trial.phi);
                if (trial.value < best.value) {
                    best = trial;
                }
            }
            if (!(best.value < cur.value)) {
                break;
            }
            cur = best;
        }
        last_gain = level_start - cur.value;
        step_theta /= 2.0;
        step_phi /= 2.0;
    }
    return {cur, last_gain};
}

}  // namespace detail

/// Minimum, over projective qubit bases, of the total selective information
/// generated by measuring psi1 and psi2 in that single basis.
///
/// A (theta, phi) grid over the Bloch sphere locates the basins; every grid
/// local minimum (up to a small cap) plus the two bases aligned with the
/// inputs are then refined by pattern search. Ties resolve to the smallest
/// (theta, phi).
inline N2Result n2(const PureState2 &psi1, const PureState2 &psi2, const N2SearchConfig &cfg = {}) {
    cfg.validate();
    constexpr std::size_t kMaxSeeds = 8;
    const int nt = cfg.theta_steps;
    const int np = cfg.phi_steps;
    const double dtheta = std::numbers::pi / (nt - 1);
    const double dphi = 2.0 * std::numbers::pi / np;
    auto f = [&](double t, double p) { return n2_objective(psi1, psi2, t, p); };

    std::vector<double> grid(static_cast<std::size_t>(nt) * np);
    auto at = [&](int i, int j) -> double & { return grid[static_cast<std::size_t>(i) * np + j]; };
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < np; ++j) {
            at(i, j) = f(i * dtheta, j * dphi);
        }
    }

    std::vector<detail::BasisPoint> seeds;
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < np; ++j) {
            double v = at(i, j);
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                int ii = i + di;
                if (ii < 0 || ii >= nt) {
                    continue;
                }
                for (int dj = -1; dj <= 1; ++dj) {
                    if ((di != 0 || dj != 0) && at(ii, (j + dj + np) % np) < v) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (is_min) {
                seeds.push_back({i * dtheta, j * dphi, v});
            }
        }
    }
    std::sort(seeds.begin(), seeds.end());
    if (seeds.size() > kMaxSeeds) {
        seeds.resize(kMaxSeeds);
    }
    for (const auto &psi : {psi1, psi2}) {
        auto [t, p] = bloch_angles(psi);
        seeds.push_back({t, p, f(t, p)});
    }

    detail::BasisPoint best{0.0, 0.0, std::numeric_limits<double>::infinity()};
    bool converged = true;
    for (const auto &seed : seeds) {
        auto [point, gain] = detail::pattern_search(f, seed, dtheta, dphi, cfg.refinement_iterations);
        if (point < best) {
            best = point;
            converged = gain <= cfg.tolerance;
        }
    }
    return {std::max(best.value, 0.0), best.theta, best.phi, converged};
}

/// Bipartite pure state given by its amplitude matrix A (rows: subsystem 1).
class BipartiteState {
  public:
    explicit BipartiteState(Eigen::MatrixXcd amplitudes) : a_(std::move(amplitudes)) {
        if (a_.size() == 0) {
            throw ValidationError("bipartite amplitude matrix is empty");
        }
        if (!a_.allFinite()) {
            throw ValidationError("bipartite amplitudes must be finite");
        }
        double norm2 = a_.squaredNorm();
        double deviation = std::abs(norm2 - 1.0);
        if (deviation > kRenormalizeLimit) {
            throw ValidationError("bipartite state is not normalized: " + detail::describe("sum |A_ij|^2", norm2));
        }
        if (deviation > kNormTolerance) {
            a_ /= std::sqrt(norm2);
        }
    }

    const Eigen::MatrixXcd &amplitudes() const { return a_; }
    Eigen::Index dim1() const { return a_.rows(); }
    Eigen::Index dim2() const { return a_.cols(); }

    /// Reduced density matrix of subsystem 1, A A^dagger.
    Eigen::MatrixXcd reduced1() const { return a_ * a_.adjoint(); }

  private:
    Eigen::MatrixXcd a_;
};

/// Squared Schmidt coefficients, descending.
inline std::vector<double> schmidt_weights(const BipartiteState &s) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s.amplitudes());
    const auto &sv = svd.singularValues();
    std::vector<double> w(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        w[static_cast<std::size_t>(i)] = sv[i] * sv[i];
    }
    return w;
}

/// Entanglement entropy xi = -sum |alpha_i|^2 log2 |alpha_i|^2, in ebits.
inline double schmidt_xi(const BipartiteState &s) {
    auto w = schmidt_weights(s);
    return shannon_entropy(w);
}

/// Schmidt basis of subsystem 1 (requires d1 = 2).
inline Basis2 schmidt_basis(const BipartiteState &s) {
    if (s.dim1() != 2) {
        throw DomainError("schmidt_basis requires a qubit first subsystem");
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s.amplitudes(), Eigen::ComputeFullU);
    const auto &u = svd.matrixU();
    auto b0 = PureState2::normalized(u(0, 0), u(1, 0));
    return Basis2::containing(b0);
}

/// Shannon entropy of the outcomes of measuring subsystem 1 in basis b.
inline double local_measurement_entropy(const BipartiteState &s, const Basis2 &b) {
    if (s.dim1() != 2) {
        throw DomainError("local_measurement_entropy requires a qubit first subsystem");
    }
    Eigen::MatrixXcd rho = s.reduced1();
    std::array<double, 2> probs{};
    for (std::size_t k = 0; k < 2; ++k) {
        Eigen::Vector2cd v(b[k][0], b[k][1]);
        probs[k] = std::max((v.adjoint() * rho * v)(0, 0).real(), 0.0);
    }
    return shannon_entropy(probs);
}

}  // namespace nonortho
