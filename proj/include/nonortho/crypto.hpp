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
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "nonortho/errors.hpp"
#include "nonortho/measures.hpp"
#include "nonortho/qstate.hpp"

namespace nonortho {

/// Two orthonormal bases {alpha_up, alpha_down} and {beta_up, beta_down}
/// with |<alpha_up|beta_up>|^2 = s. Amplitudes are real.
class BB84Spec {
  public:
    explicit BB84Spec(double s) : s_(s) {
        if (!(s > 0.0 && s < 1.0)) {
            throw DomainError("BB84 inter-basis overlap requires 0 < s < 1: " + detail::describe("s", s));
        }
    }

    double s() const { return s_; }

    Basis2 alpha_basis() const { return Basis2::computational(); }
    Basis2 beta_basis() const {
        return {PureState2(std::sqrt(s_), std::sqrt(1.0 - s_)), PureState2(std::sqrt(1.0 - s_), -std::sqrt(s_))};
    }
    Basis2 basis(int which) const { return which == 0 ? alpha_basis() : beta_basis(); }

    /// |<basis(a)[i] | basis(b)[j]>|^2 in closed form.
    double transition(int a, int i, int b, int j) const {
        if (a == b) {
            return i == j ? 1.0 : 0.0;
        }
        return i == j ? s_ : 1.0 - s_;
    }

  private:
    double s_;
};

/// Signal states u0 = |up>, u1 = sqrt(t)|up> + sqrt(1-t)|down> with
/// |<u1|u0>|^2 = t, and Bob's projectors P_c = 1 - |u_{1-c}><u_{1-c}|.
class B92Spec {
  public:
    explicit B92Spec(double t) : t_(t) {
        if (!(t > 0.0 && t < 1.0)) {
            throw DomainError("B92 signal overlap requires 0 < t < 1: " + detail::describe("t", t));
        }
    }

    double t() const { return t_; }

    PureState2 signal(int bit) const {
        return bit == 0 ? PureState2::up() : PureState2(std::sqrt(t_), std::sqrt(1.0 - t_));
    }

    /// Measurement {P_c, 1 - P_c} written as a basis: element 0 spans P_c
    /// (the conclusive outcome, which rules out u_{1-c} and so signals bit c),
    /// element 1 is u_{1-c} (inconclusive).
    Basis2 projector_measurement(int c) const {
        auto excluded = signal(1 - c);
        return {orthogonal_complement(excluded), excluded};
    }

  private:
    double t_;
};

enum class EveStrategy {
    None,
    BasisIntercept,
    ProjectorIntercept,
};

inline const char *to_string(EveStrategy e) {
    switch (e) {
    case EveStrategy::None:
        return "none";
    case EveStrategy::BasisIntercept:
        return "basis";
    case EveStrategy::ProjectorIntercept:
        return "projector";
    }
    return "?";
}

inline EveStrategy parse_eve(std::string_view name) {
    if (name == "none") {
        return EveStrategy::None;
    }
    if (name == "basis") {
        return EveStrategy::BasisIntercept;
    }
    if (name == "projector") {
        return EveStrategy::ProjectorIntercept;
    }
    throw ValidationError("unknown eve strategy '" + std::string(name) + "'");
}

struct DetectionStats {
    std::uint64_t trials;
    std::uint64_t detections;
    double estimate;
    double std_error;
    double analytic;
    /// (estimate - analytic) / std_error; infinite when the estimate is
    /// degenerate and differs from a degenerate analytic value.
    double zscore;
};

/// n0 of the four cross-basis pairs (alpha_up, beta_up), (alpha_up, beta_down),
/// (alpha_down, beta_up), (alpha_down, beta_down).
inline std::array<double, 4> bb84_cross_nonortho(const BB84Spec &spec) {
    auto a = spec.alpha_basis();
    auto b = spec.beta_basis();
    return {n0(a[0], b[0]), n0(a[0], b[1]), n0(a[1], b[0]), n0(a[1], b[1])};
}

/// (N/2)(1 - N/2) with N the inter-basis nonorthogonality.
inline double bb84_detection_analytic(const BB84Spec &spec) {
    double n = n0(spec.alpha_basis()[0], spec.beta_basis()[0]);
    return n / 2.0 * (1.0 - n / 2.0);
}

inline double bb84_detection_analytic(const BB84Spec &spec, EveStrategy eve) {
    switch (eve) {
    case EveStrategy::None:
        return 0.0;
    case EveStrategy::BasisIntercept:
        return bb84_detection_analytic(spec);
    case EveStrategy::ProjectorIntercept:
        break;
    }
    throw DomainError("projector intercept is defined for B92 only");
}

/// (N/2)(1 - N/2) for basis intercept, (N/4)(1 - N/2) for projector intercept,
/// with N = n0(u0, u1).
inline double b92_detection_analytic(const B92Spec &spec, EveStrategy eve) {
    double n = n0(spec.signal(0), spec.signal(1));
    switch (eve) {
    case EveStrategy::None:
        return 0.0;
    case EveStrategy::BasisIntercept:
        return n / 2.0 * (1.0 - n / 2.0);
    case EveStrategy::ProjectorIntercept:
        return n / 4.0 * (1.0 - n / 2.0);
    }
    return 0.0;
}

/// Exact probability that Bob's outcome differs from Alice's state, given
/// that they used the same basis. Sums every branch: Alice's basis and bit,
/// Eve's basis and outcome, Bob's outcome.
inline double exact_enumeration(const BB84Spec &spec, EveStrategy eve) {
    if (eve == EveStrategy::ProjectorIntercept) {
        throw DomainError("projector intercept is defined for B92 only");
    }
    double total = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int k = 0; k < 2; ++k) {
            const double w = 0.25;
            if (eve == EveStrategy::None) {
                total += w * spec.transition(a, k, a, 1 - k);
                continue;
            }
            for (int e = 0; e < 2; ++e) {
                for (int j = 0; j < 2; ++j) {
                    total += w * 0.5 * spec.transition(a, k, e, j) * spec.transition(e, j, a, 1 - k);
                }
            }
        }
    }
    return total;
}

/// Exact probability that Bob's conclusive outcome contradicts Alice's bit.
/// For each sent bit b Bob applies the projector whose conclusive outcome
/// signals 1 - b. Projector-intercept Eve resends the identified signal on a
/// conclusive result and the collapsed state otherwise.
inline double exact_enumeration(const B92Spec &spec, EveStrategy eve) {
    double total = 0.0;
    for (int b = 0; b < 2; ++b) {
        const auto sent = spec.signal(b);
        const auto bob = spec.projector_measurement(1 - b);
        double contradict = 0.0;
        switch (eve) {
        case EveStrategy::None:
            contradict = overlap2(sent, bob[0]);
            break;
        case EveStrategy::BasisIntercept:
            for (int c = 0; c < 2; ++c) {
                const auto eve_basis = Basis2::containing(spec.signal(c));
                for (int j = 0; j < 2; ++j) {
                    contradict += 0.5 * overlap2(sent, eve_basis[j]) * overlap2(eve_basis[j], bob[0]);
                }
            }
            break;
        case EveStrategy::ProjectorIntercept:
            for (int c = 0; c < 2; ++c) {
                const auto m = spec.projector_measurement(c);
                contradict += 0.5 * overlap2(sent, m[0]) * overlap2(spec.signal(c), bob[0]);
                contradict += 0.5 * overlap2(sent, m[1]) * overlap2(m[1], bob[0]);
            }
            break;
        }
        total += 0.5 * contradict;
    }
    return total;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: trial i of seed s always sees the same numbers.
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial)
        : state_(splitmix64(seed + 0x9E3779B97F4A7C15ULL) ^ splitmix64(trial ^ 0xD1B54A32D192ED03ULL)) {}

    double uniform() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
    }

    int bit() { return uniform() < 0.5 ? 0 : 1; }

    /// Index of the measured outcome for a state with P(outcome 0) = p0.
    int outcome(double p0) { return uniform() < p0 ? 0 : 1; }

  private:
    std::uint64_t state_;
};

inline bool bb84_trial(const BB84Spec &spec, EveStrategy eve, TrialRng &rng) {
    const auto alice = spec.basis(rng.bit());
    const int k = rng.bit();
    PureState2 in_flight = alice[k];
    if (eve == EveStrategy::BasisIntercept) {
        const auto eve_basis = spec.basis(rng.bit());
        in_flight = eve_basis[rng.outcome(overlap2(in_flight, eve_basis[0]))];
    }
    return rng.outcome(overlap2(in_flight, alice[0])) != k;
}

inline bool b92_trial(const B92Spec &spec, EveStrategy eve, TrialRng &rng) {
    const int b = rng.bit();
    PureState2 in_flight = spec.signal(b);
    if (eve == EveStrategy::BasisIntercept) {
        const auto eve_basis = Basis2::containing(spec.signal(rng.bit()));
        in_flight = eve_basis[rng.outcome(overlap2(in_flight, eve_basis[0]))];
    } else if (eve == EveStrategy::ProjectorIntercept) {
        const int c = rng.bit();
        const auto m = spec.projector_measurement(c);
        in_flight = rng.outcome(overlap2(in_flight, m[0])) == 0 ? spec.signal(c) : m[1];
    }
    const auto bob = spec.projector_measurement(1 - b);
    return rng.outcome(overlap2(in_flight, bob[0])) == 0;
}

template <typename Trial>
std::uint64_t count_detections(Trial &&trial, std::uint64_t trials, std::uint64_t seed, unsigned jobs) {
    auto run = [&](std::uint64_t begin, std::uint64_t end) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            TrialRng rng(seed, i);
            hits += trial(rng) ? 1 : 0;
        }
        return hits;
    };
    jobs = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(jobs, trials)));
    if (jobs == 1) {
        return run(0, trials);
    }
    std::vector<std::uint64_t> partial(jobs, 0);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
        std::uint64_t begin = trials * w / jobs;
        std::uint64_t end = trials * (w + 1) / jobs;
        workers.emplace_back([&, w, begin, end] { partial[w] = run(begin, end); });
    }
    for (auto &t : workers) {
        t.join();
    }
    std::uint64_t total = 0;
    for (auto h : partial) {
        total += h;
    }
    return total;
}

inline DetectionStats make_stats(std::uint64_t trials, std::uint64_t detections, double analytic) {
    const double n = static_cast<double>(trials);
    const double est = static_cast<double>(detections) / n;
    const double se = std::sqrt(est * (1.0 - est) / n);
    double z = 0.0;
    if (se > 0.0) {
        z = (est - analytic) / se;
    } else if (est != analytic) {
        double sigma = std::sqrt(analytic * (1.0 - analytic) / n);
        z = sigma > 0.0 ? (est - analytic) / sigma : std::copysign(std::numeric_limits<double>::infinity(), est - analytic);
    }
    return {trials, detections, est, se, analytic, z};
}

inline void check_trials(std::uint64_t trials) {
    if (trials == 0) {
        throw DomainError("simulation requires at least one trial");
    }
}

}  // namespace detail

/// Monte Carlo estimate of the BB84 detection probability. Bit-identical for
/// a fixed (seed, trials) whatever the number of jobs.
inline DetectionStats simulate(const BB84Spec &spec, EveStrategy eve, std::uint64_t trials, std::uint64_t seed,
                               unsigned jobs = 1) {
    detail::check_trials(trials);
    const double analytic = bb84_detection_analytic(spec, eve);
    auto hits = detail::count_detections([&](detail::TrialRng &rng) { return detail::bb84_trial(spec, eve, rng); },
                                         trials, seed, jobs);
    return detail::make_stats(trials, hits, analytic);
}

/// Monte Carlo estimate of the B92 detection probability.
inline DetectionStats simulate(const B92Spec &spec, EveStrategy eve, std::uint64_t trials, std::uint64_t seed,
                               unsigned jobs = 1) {
    detail::check_trials(trials);
    const double analytic = b92_detection_analytic(spec, eve);
    auto hits = detail::count_detections([&](detail::TrialRng &rng) { return detail::b92_trial(spec, eve, rng); },
                                         trials, seed, jobs);
    return detail::make_stats(trials, hits, analytic);
}

}  // namespace nonortho
