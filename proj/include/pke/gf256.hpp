// Copyright 2026 The PKE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

namespace pke::coding {

using Symbol = std::uint8_t;

// GF(2^8) with primitive polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11d) and
// generator alpha = 0x02. exp is doubled so that exp[log a + log b] needs no
// reduction.
struct GfTables {
  std::array<Symbol, 512> exp{};
  std::array<int, 256> log{};
};

inline constexpr unsigned kPrimitivePolynomial = 0x11d;

constexpr GfTables make_gf_tables() {
  GfTables t;
  unsigned x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[static_cast<std::size_t>(i)] = static_cast<Symbol>(x);
    t.log[x] = i;
    x <<= 1;
    if (x & 0x100) x ^= kPrimitivePolynomial;
  }
  for (int i = 255; i < 512; ++i)
    t.exp[static_cast<std::size_t>(i)] = t.exp[static_cast<std::size_t>(i - 255)];
  t.log[0] = -1;
  return t;
}

inline constexpr GfTables kGf = make_gf_tables();

namespace gf {

constexpr Symbol add(Symbol a, Symbol b) { return a ^ b; }

constexpr Symbol mul(Symbol a, Symbol b) {
  if (a == 0 || b == 0) return 0;
  return kGf.exp[static_cast<std::size_t>(kGf.log[a] + kGf.log[b])];
}

// alpha^e for any integer e (negative exponents allowed).
constexpr Symbol alpha_pow(int e) {
  e %= 255;
  if (e < 0) e += 255;
  return kGf.exp[static_cast<std::size_t>(e)];
}

// Throws pke::Error on b == 0.
Symbol div(Symbol a, Symbol b);
Symbol inv(Symbol a);

// a^e with e >= 0; 0^0 = 1.
constexpr Symbol pow(Symbol a, unsigned e) {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return alpha_pow(static_cast<int>((static_cast<unsigned long>(kGf.log[a]) * e) % 255));
}

}  // namespace gf

enum class GfOp { kAdd, kMul, kDiv, kPow };

// Dispatches to the field operation; for kPow, b is the integer exponent.
Symbol gf_ops(Symbol a, Symbol b, GfOp op);

}  // namespace pke::coding
