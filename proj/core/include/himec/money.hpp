// Copyright 2026 the himec-sim authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HIMEC_MONEY_HPP
#define HIMEC_MONEY_HPP

#include <cstdint>
#include <string>

namespace himec {

/// Monetary amounts are held in integer micro-units of the scenario currency
/// (1 currency unit == 1'000'000 micros). All revenue/cost bookkeeping happens
/// on this grid so solver-vs-oracle comparisons are exact integer equality.
using Money = std::int64_t;

inline constexpr Money kMoneyScale = 1'000'000;

/// Round num/den to the nearest integer, ties to even. den must be > 0.
std::int64_t round_half_even(__int128 num, __int128 den);

/// Nearest grid point to a real amount (ties to even via the FPU default mode).
Money money_from_double(double amount);

/// Exact conversion of a decimal literal such as "1.1083" or "-0.25".
/// Digits beyond the sixth decimal place are rounded half-to-even.
/// Throws std::invalid_argument on malformed input.
Money money_from_string(const std::string& text);

inline double money_to_double(Money m) { return static_cast<double>(m) / kMoneyScale; }

/// Fixed six-decimal rendering, locale independent ("1.500000", "-0.000900").
std::string money_to_string(Money m);

}  // namespace himec

#endif  // HIMEC_MONEY_HPP
