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

#include "himec/money.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace himec {

std::int64_t round_half_even(__int128 num, __int128 den) {
  if (den <= 0) throw std::invalid_argument("round_half_even: denominator must be positive");
  bool negative = num < 0;
  __int128 n = negative ? -num : num;
  __int128 q = n / den;
  __int128 r = n % den;
  __int128 twice = 2 * r;
  if (twice > den || (twice == den && (q & 1) != 0)) ++q;
  return static_cast<std::int64_t>(negative ? -q : q);
}

Money money_from_double(double amount) {
  return static_cast<Money>(std::llrint(amount * static_cast<double>(kMoneyScale)));
}

Money money_from_string(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  __int128 units = 0;
  std::size_t digits = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    units = units * 10 + (text[pos] - '0');
    ++digits;
    ++pos;
  }
  __int128 frac = 0;
  __int128 frac_den = 1;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (frac_den < static_cast<__int128>(1) << 100) {
        frac = frac * 10 + (text[pos] - '0');
        frac_den *= 10;
      }
      ++digits;
      ++pos;
    }
  }
  if (digits == 0 || pos != text.size())
    throw std::invalid_argument("money_from_string: malformed decimal '" + text + "'");
  __int128 micros = round_half_even(units * kMoneyScale * frac_den + frac * kMoneyScale, frac_den);
  return static_cast<Money>(negative ? -micros : micros);
}

std::string money_to_string(Money m) {
  const bool negative = m < 0;
  const std::uint64_t abs = negative ? static_cast<std::uint64_t>(-(m + 1)) + 1
                                     : static_cast<std::uint64_t>(m);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%llu.%06llu", negative ? "-" : "",
                static_cast<unsigned long long>(abs / kMoneyScale),
                static_cast<unsigned long long>(abs % kMoneyScale));
  return buf;
}

}  // namespace himec
