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

#include <array>
#include <charconv>
#include <string>
#include <system_error>

namespace nonortho {

/// Number of significant digits used for every printed real.
inline constexpr int kPrintDigits = 12;

/// Locale-independent shortest "%.Ng"-style rendering.
inline std::string format_number(double x, int digits = kPrintDigits) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, digits);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf.data(), end);
}

/// Rounds to `digits` significant digits so that shortest round-trip printing
/// (as done by JSON serializers) reproduces format_number exactly.
inline double round_significant(double x, int digits = kPrintDigits) {
    auto text = format_number(x, digits);
    double out = x;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

}  // namespace nonortho
