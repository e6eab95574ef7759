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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Thresholds are fixed here and never tuned at run time.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nonortho/cli.hpp"
#include "nonortho/nonortho.hpp"

#include "n2_oracle.hpp"
#include "test_util.hpp"

using namespace nonortho;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

unsigned worker_count() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

std::string fmt(double x) { return format_number(x, 8); }

/// s or t values strictly inside (0, 1).
double interior_grid(int k) { return (k + 0.5) / 100.0; }

Verdict standard_bb84() {
    auto t0 = Clock::now();
    double v = exact_enumeration(BB84Spec(0.5), EveStrategy::BasisIntercept);
    double ms = seconds_since(t0) * 1e3;
    return {v == 0.25 && ms < 1.0, "exact = " + fmt(v) + ", " + fmt(ms) + " ms"};
}

Verdict generalized_bb84() {
    auto t0 = Clock::now();
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        BB84Spec spec(interior_grid(k));
        double n = n0(spec.alpha_basis()[0], spec.beta_basis()[0]);
        double formula = n / 2.0 * (1.0 - n / 2.0);
        worst = std::max(worst, std::abs(exact_enumeration(spec, EveStrategy::BasisIntercept) - formula));
    }
    double s = seconds_since(t0);
    return {worst <= 1e-12 && s < 1.0, "max |exact - formula| = " + fmt(worst) + ", " + fmt(s) + " s"};
}

Verdict b92_formulas() {
    double worst = 0.0;
    double worst_ratio = 0.0;
    for (int k = 0; k < 100; ++k) {
        B92Spec spec(interior_grid(k));
        double n = n0(spec.signal(0), spec.signal(1));
        double basis = exact_enumeration(spec, EveStrategy::BasisIntercept);
        double projector = exact_enumeration(spec, EveStrategy::ProjectorIntercept);
        worst = std::max(worst, std::abs(basis - n / 2.0 * (1.0 - n / 2.0)));
        worst = std::max(worst, std::abs(projector - n / 4.0 * (1.0 - n / 2.0)));
        worst_ratio = std::max(worst_ratio, std::abs(projector - basis / 2.0));
    }
    return {worst <= 1e-12 && worst_ratio <= 1e-12,
            "max |exact - formula| = " + fmt(worst) + ", max |projector - basis/2| = " + fmt(worst_ratio)};
}

Verdict monte_carlo() {
    constexpr std::uint64_t kTrials = 1000000;
    constexpr std::uint64_t kSeed = 2026;
    auto t0 = Clock::now();
    const unsigned jobs = worker_count();
    auto a = simulate(BB84Spec(0.5), EveStrategy::BasisIntercept, kTrials, kSeed, jobs);
    auto b = simulate(B92Spec(0.1), EveStrategy::BasisIntercept, kTrials, kSeed, jobs);
    auto c = simulate(B92Spec(0.1), EveStrategy::ProjectorIntercept, kTrials, kSeed, jobs);
    double s = seconds_since(t0);
    double worst = std::max({std::abs(a.zscore), std::abs(b.zscore), std::abs(c.zscore)});
    return {worst <= 4.0 && s < 30.0, "z = " + fmt(a.zscore) + ", " + fmt(b.zscore) + ", " + fmt(c.zscore) + "; " +
                                          fmt(s) + " s"};
}

Verdict reconstruction() {
    std::mt19937_64 rng(5005);
    std::uniform_real_distribution<double> half_to_one(0.5, 1.0);
    double worst_rho = 0.0;
    double worst_n = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double p = std::min(half_to_one(rng), 1.0 - 1e-9);
        auto params = DecompositionParams::from_polar(half_to_one(rng), test_support::random_phase(rng),
                                                      test_support::random_phase(rng));
        auto d = decompose(p, params);
        worst_rho = std::max(worst_rho, d.reconstruct().max_abs_difference(density_from_p(p).matrix()));
        double q = p * (1.0 - p) / (d.z * (1.0 - d.z));
        worst_n = std::max(worst_n, std::abs(n0(d.phi1, d.phi2) - (1.0 - 2.0 * std::abs(0.5 - q))));
    }
    return {worst_rho <= 1e-10 && worst_n <= 1e-10,
            "max entry error = " + fmt(worst_rho) + ", max |n0 - N_pair| = " + fmt(worst_n)};
}

Verdict ideal_density() {
    const double p = 0.5 * (1.0 + std::sqrt(2.0) / 2.0);
    auto d = decompose(p, DecompositionParams::from_polar(0.5));
    double ov = overlap2(d.phi1, d.phi2);
    double np = pair_nonortho(p, d.z);
    double ne = ensemble_nonortho(p, d.z);
    bool ok = std::abs(d.z - 0.5) <= 1e-12 && std::abs(ov - 0.5) <= 1e-12 && std::abs(np - 1.0) <= 1e-12 &&
              std::abs(ne - 1.0) <= 1e-12 && std::abs(n0(d.phi1, d.phi2) - 1.0) <= 1e-12;
    return {ok, "z = " + fmt(d.z) + ", overlap2 = " + fmt(ov) + ", N_pair = " + fmt(np) + ", N_ens = " + fmt(ne)};
}

Verdict feasibility() {
    auto z80 = max_pair_z(0.80);
    auto z86 = max_pair_z(0.86);
    auto z90 = max_pair_z(0.9);
    bool ok = !z80 && z86 && z90 && std::abs(pair_nonortho(0.86, *z86) - 1.0) <= 1e-10 &&
              std::abs(pair_nonortho(0.9, *z90) - 1.0) <= 1e-10 && std::abs(*z90 - 0.764575) <= 1e-6;
    std::string detail = std::string("p=0.80 ") + (z80 ? "feasible" : "infeasible");
    if (z86 && z90) {
        detail += ", z*(0.86) = " + fmt(*z86) + ", z*(0.9) = " + fmt(*z90);
    }
    return {ok, detail};
}

Verdict extrema() {
    constexpr int kGrid = 10001;
    double worst_value = 0.0;
    double worst_arg = 0.0;
    bool arg_ok = true;
    for (int i = 0; i < 100; ++i) {
        double p = 0.5 + 0.5 * i / 99.0;
        double step = (p - 0.5) / (kGrid - 1);
        double best = -1.0;
        double arg = 0.5;
        for (int k = 0; k < kGrid; ++k) {
            double z = 0.5 + step * k;
            double v = ensemble_nonortho(p, z);
            if (v > best) {
                best = v;
                arg = z;
            }
        }
        double q = p * (1.0 - p);
        double closed = q > 0.125 ? 2.0 - 8.0 * q : 8.0 * q;
        worst_value = std::max(worst_value, std::abs(best - closed));
        worst_arg = std::max(worst_arg, arg - 0.5);
        arg_ok = arg_ok && arg - 0.5 <= step + 1e-15;
    }
    return {worst_value <= 1e-6 && arg_ok,
            "max |grid max - closed form| = " + fmt(worst_value) + ", max argmax offset = " + fmt(worst_arg)};
}

struct SweepOutcome {
    SweepResult result;
    double seconds;
};

Verdict conjecture(const SweepOutcome &s) {
    const SweepGrid g;
    const auto &r = s.result;
    bool near_ideal = std::abs(r.argmin_p - kIdealP) <= g.p_step && std::abs(r.argmin_z - 0.5) <= g.z_step;
    auto ideal = unlock_report(kIdealP, 0.5);
    auto high = unlock_report(0.99, 0.5);
    bool witnesses = ideal.ratio_e && std::abs(*ideal.ratio_e - 0.399) <= 1e-3 && high.ratio_e &&
                     std::abs(*high.ratio_e - 11.6) <= 0.01;
    bool ok = r.min_ratio_u >= 1.0 - 1e-6 && near_ideal && r.e_below_one >= 1 && r.e_at_or_above_one >= 1 &&
              r.witness_e_below && r.witness_e_at_or_above && witnesses && s.seconds < 120.0;
    std::ostringstream d;
    d << "grid " << g.p_count() << " p-values, " << r.rows.size() << " points; min ratio_U = "
      << format_number(r.min_ratio_u, 10) << " at (" << fmt(r.argmin_p) << ", " << fmt(r.argmin_z) << "); ratio_E<1: "
      << r.e_below_one << ", >=1: " << r.e_at_or_above_one << "; witnesses " << fmt(ideal.ratio_e.value_or(NAN))
      << ", " << fmt(high.ratio_e.value_or(NAN)) << "; " << fmt(s.seconds) << " s";
    return {ok, d.str()};
}

Verdict unlock_algebra(const SweepOutcome &s) {
    double worst_ui = 0.0;
    double worst_e = 0.0;
    for (const auto &row : s.result.rows) {
        worst_ui = std::max(worst_ui, row.i - row.u);
        worst_e = std::max(worst_e, -row.e);
    }
    return {worst_ui <= 1e-12 && worst_e <= 1e-12,
            "max (I - U) = " + fmt(worst_ui) + ", max (-E) = " + fmt(worst_e) + " over " +
                std::to_string(s.result.rows.size()) + " points"};
}

Verdict entanglement_analogy() {
    std::mt19937_64 rng(1111);
    std::normal_distribution<double> g;
    double worst_gap = std::numeric_limits<double>::infinity();
    double worst_eq = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Eigen::MatrixXcd m(2, 2);
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                m(a, b) = Complex(g(rng), g(rng));
            }
        }
        m /= m.norm();
        BipartiteState s(m);
        double xi = schmidt_xi(s);
        auto basis = Basis2::containing(test_support::random_state(rng));
        worst_gap = std::min(worst_gap, local_measurement_entropy(s, basis) - xi);
        worst_eq = std::max(worst_eq, std::abs(local_measurement_entropy(s, schmidt_basis(s)) - xi));
    }
    return {worst_gap >= -1e-9 && worst_eq <= 1e-9,
            "min (entropy - xi) = " + fmt(worst_gap) + ", max |entropy at Schmidt basis - xi| = " + fmt(worst_eq)};
}

Verdict n2_sanity() {
    constexpr int kPairs = 200;
    std::mt19937_64 rng(2222);
    std::vector<std::pair<PureState2, PureState2>> pairs;
    for (int i = 0; i < kPairs; ++i) {
        auto x = test_support::random_state(rng);
        pairs.emplace_back(x, test_support::random_state(rng));
    }
    std::vector<double> excess(kPairs), disagreement(kPairs);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < kPairs; i = next++) {
            const auto &[x, y] = pairs[i];
            double refined = n2(x, y).value;
            excess[i] = refined - n1(x, y);
            disagreement[i] = std::abs(refined - test_support::n2_grid_oracle(x, y, 1024));
        }
    };
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < worker_count(); ++w) {
        workers.emplace_back(work);
    }
    for (auto &t : workers) {
        t.join();
    }
    double worst_excess = *std::max_element(excess.begin(), excess.end());
    double worst_dis = *std::max_element(disagreement.begin(), disagreement.end());
    double worst_trivial = 0.0;
    for (int i = 0; i < 10; ++i) {
        const auto &x = pairs[i].first;
        worst_trivial = std::max(worst_trivial, n2(x, x.with_phase(0.3 * i)).value);
        worst_trivial = std::max(worst_trivial, n2(x, orthogonal_complement(x)).value);
    }
    int equal_to_n1 = 0;
    for (double e : excess) {
        equal_to_n1 += std::abs(e) <= 1e-9 ? 1 : 0;
    }
    return {worst_excess <= 1e-6 && worst_trivial <= 1e-6 && worst_dis <= 1e-6,
            "max (n2 - n1) = " + fmt(worst_excess) + ", trivial pairs max n2 = " + fmt(worst_trivial) +
                ", max |refined - oracle| = " + fmt(worst_dis) + ", pairs with n2 = n1: " +
                std::to_string(equal_to_n1) + "/" + std::to_string(kPairs)};
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict determinism() {
    namespace fs = std::filesystem;
    fs::path dir = fs::path(NONORTHO_SCRATCH_DIR) / "acceptance_scratch";
    fs::create_directories(dir);
    auto run = [](std::vector<std::string> args, std::string &out) {
        std::ostringstream o, e;
        int code = cli::run(std::move(args), o, e);
        out = o.str();
        return code;
    };
    std::string s1, s2, c1, c2, c3, c4;
    int codes = 0;
    codes |= run({"sweep", "--out", (dir / "a.csv").string(), "--jobs", "1"}, s1);
    codes |= run({"sweep", "--out", (dir / "b.csv").string(), "--jobs", "4"}, s2);
    codes |= run({"crypto", "--protocol", "bb84", "--overlap", "0.5", "--eve", "basis", "--trials", "1000000", "--seed",
                  "7", "--jobs", "1"},
                 c1);
    codes |= run({"crypto", "--protocol", "bb84", "--overlap", "0.5", "--eve", "basis", "--trials", "1000000", "--seed",
                  "7", "--jobs", "6"},
                 c2);
    codes |= run({"crypto", "--protocol", "b92", "--overlap", "0.1", "--eve", "projector", "--trials", "1000000",
                  "--seed", "7"},
                 c3);
    codes |= run({"crypto", "--protocol", "b92", "--overlap", "0.1", "--eve", "projector", "--trials", "1000000",
                  "--seed", "7", "--jobs", "3"},
                 c4);
    std::string csv_a = slurp(dir / "a.csv");
    bool same_csv = !csv_a.empty() && csv_a == slurp(dir / "b.csv");
    fs::remove_all(dir);
    bool ok = codes == 0 && s1 == s2 && same_csv && c1 == c2 && c3 == c4 && !c1.empty();
    return {ok, std::string("sweep stdout ") + (s1 == s2 ? "identical" : "DIFFERS") + ", CSV " +
                    (same_csv ? "identical" : "DIFFERS") + " (" + std::to_string(csv_a.size()) + " bytes), crypto " +
                    (c1 == c2 && c3 == c4 ? "identical" : "DIFFERS")};
}

}  // namespace

int main() {
    auto t0 = Clock::now();
    SweepOutcome sweep{conjecture_sweep(SweepGrid{}, worker_count()), 0.0};
    sweep.seconds = seconds_since(t0);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"AC01 standard BB84 detection is 1/4", standard_bb84},
        {"AC02 generalized BB84 formula", generalized_bb84},
        {"AC03 B92 formulas and projector factor 1/2", b92_formulas},
        {"AC04 Monte Carlo consistency", monte_carlo},
        {"AC05 decomposition reconstruction", reconstruction},
        {"AC06 ideal density matrix", ideal_density},
        {"AC07 maximal-pair feasibility threshold", feasibility},
        {"AC08 ensemble extrema at z = 1/2", extrema},
        {"AC09 conjecture sweep", [&] { return conjecture(sweep); }},
        {"AC10 unlock algebra U >= I, E >= 0", [&] { return unlock_algebra(sweep); }},
        {"AC11 entanglement analogy", entanglement_analogy},
        {"AC12 N2 sanity", n2_sanity},
        {"AC13 determinism", determinism},
    };

    int failures = 0;
    for (const auto &[name, check] : criteria) {
        Verdict v{false, ""};
        try {
            v = check();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += v.pass ? 0 : 1;
        std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << name << ": " << v.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
