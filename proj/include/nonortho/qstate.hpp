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
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>

#include "nonortho/errors.hpp"
#include "nonortho/format.hpp"

namespace nonortho {

using Complex = std::complex<double>;

/// Accepted deviation of a squared norm from 1 without any correction.
inline constexpr double kNormTolerance = 1e-12;
/// Beyond this deviation a state is rejected instead of renormalized.
inline constexpr double kRenormalizeLimit = 1e-9;

/// Normalized qubit ket. Index 0 is |up>, index 1 is |down>.
///
/// Global phase is kept as given; two states are "equal" when overlap2 is 1.
class PureState2 {
  public:
    PureState2(Complex up, Complex down) : amp_{up, down} {
        if (!is_finite(up) || !is_finite(down)) {
            throw ValidationError("state amplitudes must be finite");
        }
        double norm2 = std::norm(up) + std::norm(down);
        double deviation = std::abs(norm2 - 1.0);
        if (deviation > kRenormalizeLimit) {
            throw ValidationError("state is not normalized: " + detail::describe("|a_up|^2 + |a_down|^2", norm2));
        }
        if (deviation > kNormTolerance) {
            double scale = 1.0 / std::sqrt(norm2);
            amp_[0] *= scale;
            amp_[1] *= scale;
        }
    }

    static PureState2 up() { return {1.0, 0.0}; }
    static PureState2 down() { return {0.0, 1.0}; }

    /// Builds a state from unnormalized amplitudes, rejecting only the zero vector.
    static PureState2 normalized(Complex up, Complex down) {
        double n = std::sqrt(std::norm(up) + std::norm(down));
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw ValidationError("cannot normalize a zero or non-finite vector");
        }
        return {up / n, down / n};
    }

    Complex up_amplitude() const { return amp_[0]; }
    Complex down_amplitude() const { return amp_[1]; }
    Complex operator[](std::size_t i) const { return amp_[i]; }

    /// Same ray, multiplied by e^{i*radians}.
    PureState2 with_phase(double radians) const {
        Complex phase = std::polar(1.0, radians);
        return {amp_[0] * phase, amp_[1] * phase};
    }

  private:
    static bool is_finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

    std::array<Complex, 2> amp_;
};

/// <bra|ket>
inline Complex inner(const PureState2 &bra, const PureState2 &ket) {
    return std::conj(bra[0]) * ket[0] + std::conj(bra[1]) * ket[1];
}

/// Squared overlap |<y|x>|^2, clamped to [0, 1].
inline double overlap2(const PureState2 &x, const PureState2 &y) {
    return std::clamp(std::norm(inner(y, x)), 0.0, 1.0);
}

/// cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>.
inline PureState2 from_bloch(double theta, double phi) {
    return {Complex(std::cos(theta / 2.0), 0.0), std::polar(std::sin(theta / 2.0), phi)};
}

/// The state orthogonal to x, (-conj(b), conj(a)) for x = (a, b).
inline PureState2 orthogonal_complement(const PureState2 &x) {
    return {-std::conj(x[1]), std::conj(x[0])};
}

/// Orthonormal qubit basis {b0, b1}.
class Basis2 {
  public:
    Basis2(PureState2 b0, PureState2 b1) : b_{b0, b1} {
        if (std::abs(inner(b0, b1)) > kNormTolerance) {
            throw ValidationError("basis vectors are not orthogonal: " +
                                  detail::describe("|<b0|b1>|", std::abs(inner(b0, b1))));
        }
    }

    /// The basis containing x as its first element.
    static Basis2 containing(const PureState2 &x) { return {x, orthogonal_complement(x)}; }
    static Basis2 computational() { return {PureState2::up(), PureState2::down()}; }

    const PureState2 &operator[](std::size_t i) const { return b_[i]; }

  private:
    std::array<PureState2, 2> b_;
};

struct OutcomeProbabilities {
    double p0;
    double p1;
};

/// Born-rule outcome distribution for a projective measurement of x in b.
inline OutcomeProbabilities measure_in_basis(const PureState2 &x, const Basis2 &b) {
    return {overlap2(x, b[0]), overlap2(x, b[1])};
}

/// General 2x2 density matrix, row-major.
class Density2 {
  public:
    explicit Density2(std::array<Complex, 4> entries) : m_(entries) {
        for (const auto &c : m_) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw ValidationError("density matrix entries must be finite");
            }
        }
        if (std::abs(m_[0].imag()) > kNormTolerance || std::abs(m_[3].imag()) > kNormTolerance ||
            std::abs(m_[1] - std::conj(m_[2])) > kNormTolerance) {
            throw ValidationError("density matrix is not Hermitian");
        }
        if (std::abs(trace() - 1.0) > kNormTolerance) {
            throw ValidationError("density matrix trace differs from 1: " + detail::describe("trace", trace()));
        }
        auto ev = eigenvalues();
        if (ev[0] < -kNormTolerance || ev[1] > 1.0 + kNormTolerance) {
            throw ValidationError("density matrix eigenvalues outside [0, 1]");
        }
    }

    /// z|a><a| + (1 - z)|b><b|
    static Density2 mixture(double z, const PureState2 &a, const PureState2 &b) {
        std::array<Complex, 4> m{};
        for (std::size_t r = 0; r < 2; ++r) {
            for (std::size_t c = 0; c < 2; ++c) {
                m[2 * r + c] = z * a[r] * std::conj(a[c]) + (1.0 - z) * b[r] * std::conj(b[c]);
            }
        }
        return Density2(m);
    }

    Complex operator()(std::size_t row, std::size_t col) const { return m_[2 * row + col]; }
    double trace() const { return m_[0].real() + m_[3].real(); }

    /// Ascending eigenvalues.
    std::array<double, 2> eigenvalues() const {
        double half_trace = 0.5 * trace();
        double half_gap = 0.5 * (m_[0].real() - m_[3].real());
        double radius = std::sqrt(half_gap * half_gap + std::norm(m_[1]));
        return {half_trace - radius, half_trace + radius};
    }

    /// Largest entrywise deviation from `other`.
    double max_abs_difference(const Density2 &other) const {
        double d = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            d = std::max(d, std::abs(m_[i] - other.m_[i]));
        }
        return d;
    }

  private:
    std::array<Complex, 4> m_;
};

/// p|up><up| + (1 - p)|down><down| with the convention p >= 1/2.
class DiagonalDensity {
  public:
    explicit DiagonalDensity(double p) : p_(p) {
        if (!(p >= 0.5 && p <= 1.0)) {
            throw DomainError("diagonal density requires 1/2 <= p <= 1 (relabel eigenvectors first): " +
                              detail::describe("p", p));
        }
    }

    double p() const { return p_; }
    std::array<double, 2> eigenvalues() const { return {1.0 - p_, p_}; }
    Density2 matrix() const { return Density2({Complex(p_), Complex(0.0), Complex(0.0), Complex(1.0 - p_)}); }

  private:
    double p_;
};

inline DiagonalDensity density_from_p(double p) { return DiagonalDensity(p); }

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

inline double parse_real(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double value = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
        throw ValidationError("malformed real number '" + std::string(s) + "'");
    }
    return value;
}

inline Complex parse_complex(std::string_view s) {
    auto comma = s.find(',');
    if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos) {
        throw ValidationError("amplitude must be written 're,im': '" + std::string(s) + "'");
    }
    return {parse_real(s.substr(0, comma)), parse_real(s.substr(comma + 1))};
}

}  // namespace detail

/// Parses the state literal "re,im;re,im" (amplitude on |up> then |down>).
inline PureState2 parse_state(std::string_view text) {
    auto semi = text.find(';');
    if (semi == std::string_view::npos || text.find(';', semi + 1) != std::string_view::npos) {
        throw ValidationError("state literal must be 're,im;re,im': '" + std::string(text) + "'");
    }
    return {detail::parse_complex(text.substr(0, semi)), detail::parse_complex(text.substr(semi + 1))};
}

inline std::string format_state(const PureState2 &x, int digits = kPrintDigits) {
    return format_number(x[0].real(), digits) + "," + format_number(x[0].imag(), digits) + ";" +
           format_number(x[1].real(), digits) + "," + format_number(x[1].imag(), digits);
}

}  // namespace nonortho
