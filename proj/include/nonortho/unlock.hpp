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
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "nonortho/errors.hpp"
#include "nonortho/format.hpp"
#include "nonortho/hidden.hpp"
#include "nonortho/measures.hpp"

namespace nonortho {

/// N_ens at or below this value leaves the bits-per-nbit ratios undefined.
inline constexpr double kDefaultRatioEps = 1e-9;

/// Bits per system needed to label each system's preparation state: H(z).
inline double unlock_info(double z) {
    if (!(z >= 0.0 && z <= 1.0)) {
        throw DomainError("unlock information requires 0 <= z <= 1: " + detail::describe("z", z));
    }
    return binary_entropy(z);
}

/// Bits per system to label an orthogonal preparation of the same state: H(p).
inline double orthogonal_info(double p) { return binary_entropy(detail::checked_p(p)); }

/// E = U - I, the extra labeling cost of a nonorthogonal preparation.
inline double excess_info(double p, double z) {
    p = detail::checked_p(p);
    z = detail::checked_z(p, z);
    return unlock_info(z) - orthogonal_info(p);
}

struct UnlockReport {
    double p;
    double z;
    double u;
    double i;
    double e;
    double n_ens;
    std::optional<double> ratio_u;
    std::optional<double> ratio_e;
    std::optional<double> bits_per_nbit;
};

inline UnlockReport unlock_report(double p, double z, double eps = kDefaultRatioEps) {
    p = detail::checked_p(p);
    z = detail::checked_z(p, z);
    UnlockReport r{p, z, unlock_info(z), orthogonal_info(p), 0.0, ensemble_nonortho(p, z), {}, {}, {}};
    r.e = r.u - r.i;
    if (r.n_ens > eps) {
        r.ratio_u = r.u / r.n_ens;
        r.ratio_e = r.e / r.n_ens;
        r.bits_per_nbit = 2.0 * *r.ratio_u;
    }
    return r;
}

/// Uniform (p, z) lattice over the feasible triangle 1/2 <= z <= p.
struct SweepGrid {
    double p_min = 0.5;
    double p_max = 1.0;
    double p_step = 5e-4;
    double z_step = 5e-4;
    double eps = kDefaultRatioEps;

    void validate() const {
        if (!(p_step > 0.0) || !(z_step > 0.0)) {
            throw DomainError("sweep steps must be positive");
        }
        if (!(eps > 0.0)) {
            throw DomainError("sweep exclusion threshold must be positive");
        }
        if (!(p_min >= 0.5 && p_max <= 1.0 && p_min <= p_max)) {
            throw DomainError("sweep requires 1/2 <= p_min <= p_max <= 1");
        }
    }

    std::size_t p_count() const { return static_cast<std::size_t>(std::floor((p_max - p_min) / p_step + 1e-9)) + 1; }

    double p_at(std::size_t i) const { return std::min(p_min + static_cast<double>(i) * p_step, p_max); }

    std::size_t z_count(double p) const { return static_cast<std::size_t>(std::floor((p - 0.5) / z_step + 1e-9)) + 1; }

    double z_at(double p, std::size_t j) const { return std::min(0.5 + static_cast<double>(j) * z_step, p); }
};

struct SweepResult {
    /// Ordered by p, then z.
    std::vector<UnlockReport> rows;
    double min_ratio_u = 0.0;
    double argmin_p = 0.0;
    double argmin_z = 0.0;
    std::size_t e_below_one = 0;
    std::size_t e_at_or_above_one = 0;
    /// Points whose ratios are undefined because N_ens <= eps.
    std::size_t excluded = 0;
    /// First grid point (in row order) of each excess-information regime.
    std::optional<UnlockReport> witness_e_below;
    std::optional<UnlockReport> witness_e_at_or_above;
};

/// Evaluates unlock_report over the grid and summarizes the bits-per-nbit
/// behaviour. Rows are computed on `jobs` threads; the result does not
/// depend on the thread count.
inline SweepResult conjecture_sweep(const SweepGrid &g, unsigned jobs = 1) {
    g.validate();
    const std::size_t np = g.p_count();
    std::vector<std::size_t> offset(np + 1, 0);
    for (std::size_t i = 0; i < np; ++i) {
        offset[i + 1] = offset[i] + g.z_count(g.p_at(i));
    }
    if (offset[np] == 0) {
        throw DomainError("sweep grid is empty");
    }

    SweepResult out;
    out.rows.resize(offset[np]);
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double p = g.p_at(i);
            for (std::size_t j = 0; j < offset[i + 1] - offset[i]; ++j) {
                out.rows[offset[i] + j] = unlock_report(p, g.z_at(p, j), g.eps);
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(np)));
    if (jobs == 1) {
        fill(0, np);
    } else {
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back(fill, np * w / jobs, np * (w + 1) / jobs);
        }
        for (auto &t : workers) {
            t.join();
        }
    }

    bool have_min = false;
    for (const auto &r : out.rows) {
        if (!r.ratio_u) {
            ++out.excluded;
            continue;
        }
        if (!have_min || *r.ratio_u < out.min_ratio_u) {
            have_min = true;
            out.min_ratio_u = *r.ratio_u;
            out.argmin_p = r.p;
            out.argmin_z = r.z;
        }
        if (*r.ratio_e < 1.0) {
            ++out.e_below_one;
            if (!out.witness_e_below) {
                out.witness_e_below = r;
            }
        } else {
            ++out.e_at_or_above_one;
            if (!out.witness_e_at_or_above) {
                out.witness_e_at_or_above = r;
            }
        }
    }
    if (!have_min) {
        throw DomainError("sweep grid has no point with N_ens above the exclusion threshold");
    }
    return out;
}

inline constexpr const char *kSweepCsvHeader = "p,z,U,I,E,N_ens,ratio_U,ratio_E,bits_per_nbit";

/// CSV export; undefined ratios are written as empty fields.
inline void write_sweep_csv(std::ostream &os, const SweepResult &result) {
    auto opt = [](const std::optional<double> &v) { return v ? format_number(*v) : std::string(); };
    os << kSweepCsvHeader << '\n';
    std::string line;
    for (const auto &r : result.rows) {
        line.clear();
        line += format_number(r.p);
        line += ',';
        line += format_number(r.z);
        line += ',';
        line += format_number(r.u);
        line += ',';
        line += format_number(r.i);
        line += ',';
        line += format_number(r.e);
        line += ',';
        line += format_number(r.n_ens);
        line += ',';
        line += opt(r.ratio_u);
        line += ',';
        line += opt(r.ratio_e);
        line += ',';
        line += opt(r.bits_per_nbit);
        line += '\n';
        os << line;
    }
}

}  // namespace nonortho
