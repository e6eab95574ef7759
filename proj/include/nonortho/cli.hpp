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

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nonortho/crypto.hpp"
#include "nonortho/errors.hpp"
#include "nonortho/format.hpp"
#include "nonortho/hidden.hpp"
#include "nonortho/measures.hpp"
#include "nonortho/qstate.hpp"
#include "nonortho/unlock.hpp"

namespace nonortho::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kDomain = 3,
    kInternal = 4,
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

namespace detail {

/// Real rounded to the printed precision; non-finite values become null.
inline Json num(double x) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return round_significant(x);
}

inline Json num(const std::optional<double> &x) { return x ? num(*x) : Json(nullptr); }

struct MeasureArgs {
    std::string psi1;
    std::string psi2;
    std::string which = "all";
    int n2_grid = 256;
};

struct DecomposeArgs {
    double p = 0.0;
    double alpha_sq = 0.0;
    double alpha_phase = 0.0;
    double beta_phase = 0.0;
    bool canonicalize = false;
};

struct MaximaArgs {
    double p = 0.0;
    bool canonicalize = false;
};

struct SweepArgs {
    double p_step = 5e-4;
    double z_step = 5e-4;
    double eps = kDefaultRatioEps;
    std::string out;
    unsigned jobs = 1;
};

struct CryptoArgs {
    std::string protocol;
    double overlap = 0.0;
    std::string eve;
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 0;
    bool exact = false;
    unsigned jobs = 1;
};

inline Json run_measure(const MeasureArgs &a) {
    const auto psi1 = parse_state(a.psi1);
    const auto psi2 = parse_state(a.psi2);
    Json j;
    j["psi1"] = format_state(psi1);
    j["psi2"] = format_state(psi2);
    j["overlap2"] = num(overlap2(psi1, psi2));
    const bool all = a.which == "all";
    if (all || a.which == "n0") {
        j["n0"] = num(n0(psi1, psi2));
    }
    if (all || a.which == "n1") {
        j["n1"] = num(n1(psi1, psi2));
    }
    if (all || a.which == "n2") {
        N2SearchConfig cfg;
        cfg.theta_steps = a.n2_grid;
        cfg.phi_steps = a.n2_grid;
        auto r = n2(psi1, psi2, cfg);
        j["n2"] = num(r.value);
        j["n2_average"] = num(r.average());
        j["n2_converged"] = r.converged;
        j["n2_minus_n1"] = num(r.value - n1(psi1, psi2));
    }
    return j;
}

/// Relabels eigenvectors (p -> 1 - p) and preparation states
/// (|alpha|^2 -> 1 - |alpha|^2, phases swapped) into the canonical range.
inline bool canonicalize(double &p, double *alpha_sq, double *alpha_phase, double *beta_phase) {
    bool changed = false;
    if (p < 0.5) {
        p = 1.0 - p;
        changed = true;
    }
    if (alpha_sq != nullptr && *alpha_sq < 0.5) {
        *alpha_sq = 1.0 - *alpha_sq;
        std::swap(*alpha_phase, *beta_phase);
        changed = true;
    }
    return changed;
}

inline Json run_decompose(DecomposeArgs a) {
    bool changed = a.canonicalize && canonicalize(a.p, &a.alpha_sq, &a.alpha_phase, &a.beta_phase);
    auto params = DecompositionParams::from_polar(a.alpha_sq, a.alpha_phase, a.beta_phase);
    auto d = decompose(a.p, params);
    const double n_pair = pair_nonortho(d.source_p, d.z);
    if (std::abs(n0(d.phi1, d.phi2) - n_pair) > 1e-10 ||
        d.reconstruct().max_abs_difference(density_from_p(d.source_p).matrix()) > 1e-10) {
        throw InvariantViolation("decomposition does not reproduce the density matrix");
    }
    auto r = unlock_report(d.source_p, d.z);
    Json j;
    j["p"] = num(d.source_p);
    j["alpha_sq"] = num(params.alpha_sq());
    j["canonicalized"] = changed;
    j["z"] = num(d.z);
    j["phi1"] = format_state(d.phi1);
    j["phi2"] = format_state(d.phi2);
    j["overlap2"] = num(overlap2(d.phi1, d.phi2));
    j["n_pair"] = num(n_pair);
    j["n_ens"] = num(r.n_ens);
    j["U"] = num(r.u);
    j["I"] = num(r.i);
    j["E"] = num(r.e);
    return j;
}

inline Json run_maxima(MaximaArgs a) {
    bool changed = a.canonicalize && canonicalize(a.p, nullptr, nullptr, nullptr);
    auto z = max_pair_z(a.p);
    Json j;
    j["p"] = num(a.p);
    j["canonicalized"] = changed;
    j["max_pair_z"] = num(z);
    j["max_pair_feasible"] = z.has_value();
    j["max_ensemble"] = num(max_ensemble(a.p));
    j["argmax_ensemble_z"] = num(0.5);
    j["branch"] = to_string(max_ensemble_branch(a.p));
    return j;
}

inline Json witness(const std::optional<UnlockReport> &r) {
    if (!r) {
        return nullptr;
    }
    Json j;
    j["p"] = num(r->p);
    j["z"] = num(r->z);
    j["ratio_E"] = num(r->ratio_e);
    return j;
}

inline Json run_sweep(const SweepArgs &a) {
    SweepGrid g;
    g.p_step = a.p_step;
    g.z_step = a.z_step;
    g.eps = a.eps;
    auto result = conjecture_sweep(g, a.jobs);
    std::ofstream file(a.out, std::ios::binary);
    if (!file) {
        throw UsageError("cannot open output file '" + a.out + "'");
    }
    write_sweep_csv(file, result);
    file.close();
    if (!file) {
        throw UsageError("failed writing output file '" + a.out + "'");
    }
    Json j;
    j["p_step"] = num(g.p_step);
    j["z_step"] = num(g.z_step);
    j["eps"] = num(g.eps);
    j["rows"] = result.rows.size();
    j["excluded"] = result.excluded;
    j["min_ratio_U"] = num(result.min_ratio_u);
    j["argmin"] = {{"p", num(result.argmin_p)}, {"z", num(result.argmin_z)}};
    j["ratio_E_below_1"] = result.e_below_one;
    j["ratio_E_at_or_above_1"] = result.e_at_or_above_one;
    j["witness_E_below_1"] = witness(result.witness_e_below);
    j["witness_E_at_or_above_1"] = witness(result.witness_e_at_or_above);
    return j;
}

inline Json run_crypto(const CryptoArgs &a) {
    const auto eve = parse_eve(a.eve);
    const bool bb84 = a.protocol == "bb84";
    if (bb84 && eve == EveStrategy::ProjectorIntercept) {
        throw UsageError("--eve projector applies to --protocol b92 only");
    }
    Json j;
    j["protocol"] = a.protocol;
    j["s_or_t"] = num(a.overlap);
    j["eve"] = to_string(eve);
    if (a.exact) {
        double analytic = 0.0;
        double exact = 0.0;
        if (bb84) {
            BB84Spec spec(a.overlap);
            analytic = bb84_detection_analytic(spec, eve);
            exact = exact_enumeration(spec, eve);
        } else {
            B92Spec spec(a.overlap);
            analytic = b92_detection_analytic(spec, eve);
            exact = exact_enumeration(spec, eve);
        }
        j["trials"] = nullptr;
        j["seed"] = nullptr;
        j["detections"] = nullptr;
        j["estimate"] = num(exact);
        j["stderr"] = num(0.0);
        j["analytic"] = num(analytic);
        j["zscore"] = nullptr;
        return j;
    }
    DetectionStats s = bb84 ? simulate(BB84Spec(a.overlap), eve, a.trials, a.seed, a.jobs)
                            : simulate(B92Spec(a.overlap), eve, a.trials, a.seed, a.jobs);
    j["trials"] = s.trials;
    j["seed"] = a.seed;
    j["detections"] = s.detections;
    j["estimate"] = num(s.estimate);
    j["stderr"] = num(s.std_error);
    j["analytic"] = num(s.analytic);
    j["zscore"] = num(s.zscore);
    return j;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. Writes JSON to `out`
/// and one-line diagnostics to `err`.
inline int run(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Nonorthogonality measures, hidden decompositions, unlocking costs and QKD detection"};
    app.name("nonortho");
    app.require_subcommand(1);

    detail::MeasureArgs measure;
    auto *m = app.add_subcommand("measure", "Nonorthogonality of a pair of pure states");
    m->add_option("--psi1", measure.psi1, "First state, 're,im;re,im'")->required();
    m->add_option("--psi2", measure.psi2, "Second state, 're,im;re,im'")->required();
    m->add_option("--which", measure.which, "n0, n1, n2 or all")
        ->check(CLI::IsMember({"n0", "n1", "n2", "all"}))
        ->capture_default_str();
    m->add_option("--n2-grid", measure.n2_grid, "Grid points per Bloch angle for n2")->capture_default_str();

    detail::DecomposeArgs dec;
    auto *d = app.add_subcommand("decompose", "Two-state preparation of diag(p, 1-p)");
    d->add_option("--p", dec.p, "Eigenvalue on |up>")->required();
    d->add_option("--alpha-sq", dec.alpha_sq, "|alpha|^2")->required();
    d->add_option("--alpha-phase", dec.alpha_phase, "arg(alpha) in radians")->capture_default_str();
    d->add_option("--beta-phase", dec.beta_phase, "arg(beta) in radians")->capture_default_str();
    d->add_flag("--canonicalize", dec.canonicalize, "Relabel p < 1/2 and |alpha|^2 < 1/2 into range");

    detail::MaximaArgs max;
    auto *x = app.add_subcommand("maxima", "Maximal pair and ensemble nonorthogonality for a given p");
    x->add_option("--p", max.p, "Eigenvalue on |up>")->required();
    x->add_flag("--canonicalize", max.canonicalize, "Relabel p < 1/2 into range");

    detail::SweepArgs sweep;
    auto *s = app.add_subcommand("sweep", "Unlocking-cost sweep over (p, z); writes CSV");
    s->add_option("--p-step", sweep.p_step, "Grid step in p")->capture_default_str();
    s->add_option("--z-step", sweep.z_step, "Grid step in z")->capture_default_str();
    s->add_option("--eps", sweep.eps, "N_ens exclusion threshold for ratios")->capture_default_str();
    s->add_option("--out", sweep.out, "CSV output path")->required();
    s->add_option("--jobs", sweep.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    detail::CryptoArgs crypto;
    auto *c = app.add_subcommand("crypto", "Intercept-resend detection probability");
    c->add_option("--protocol", crypto.protocol, "bb84 or b92")->required()->check(CLI::IsMember({"bb84", "b92"}));
    c->add_option("--overlap", crypto.overlap, "s for bb84, t for b92")->required();
    c->add_option("--eve", crypto.eve, "none, basis or projector")
        ->required()
        ->check(CLI::IsMember({"none", "basis", "projector"}));
    auto *exact = c->add_flag("--exact", crypto.exact, "Exact branch enumeration instead of Monte Carlo");
    auto *trials = c->add_option("--trials", crypto.trials, "Monte Carlo trials")->capture_default_str();
    auto *seed = c->add_option("--seed", crypto.seed, "Monte Carlo seed")->capture_default_str();
    auto *jobs = c->add_option("--jobs", crypto.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    exact->excludes(trials)->excludes(seed)->excludes(jobs);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        Json result;
        if (*m) {
            result = detail::run_measure(measure);
        } else if (*d) {
            result = detail::run_decompose(dec);
        } else if (*x) {
            result = detail::run_maxima(max);
        } else if (*s) {
            result = detail::run_sweep(sweep);
        } else {
            result = detail::run_crypto(crypto);
        }
        out << result.dump(2) << '\n';
        return kOk;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvariantViolation &e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    } catch (const DomainError &e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const ValidationError &e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(std::move(args), out, err);
}

}  // namespace nonortho::cli
