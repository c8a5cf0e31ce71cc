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

#include "pke/reed_solomon.hpp"

#include <algorithm>
#include <string>

#include "pke/error.hpp"

namespace pke::coding {

Symbol gf::div(Symbol a, Symbol b) {
  if (b == 0) throw Error("GF(256) division by zero");
  if (a == 0) return 0;
  return kGf.exp[static_cast<std::size_t>(kGf.log[a] - kGf.log[b] + 255)];
}

Symbol gf::inv(Symbol a) { return div(1, a); }

Symbol gf_ops(Symbol a, Symbol b, GfOp op) {
  switch (op) {
    case GfOp::kAdd:
      return gf::add(a, b);
    case GfOp::kMul:
      return gf::mul(a, b);
    case GfOp::kDiv:
      return gf::div(a, b);
    case GfOp::kPow:
      return gf::pow(a, b);
  }
  throw Error("unknown GF operation");
}

void RsCode::validate() const {
  if (!(1 <= k_sym && k_sym < n_sym && n_sym <= 255)) {
    throw Error("invalid RS code (" + std::to_string(n_sym) + "," +
                std::to_string(k_sym) + "): need 1 <= k < n <= 255");
  }
}

RsCode RsCode::correcting(int t, int n_sym) {
  RsCode code{n_sym, n_sym - 2 * t};
  code.validate();
  return code;
}

std::vector<Symbol> rs_syndrome(std::span<const Symbol> word, const RsCode& code) {
  code.validate();
  if (word.size() > static_cast<std::size_t>(code.n_sym)) {
    throw Error("word of " + std::to_string(word.size()) +
                " symbols exceeds code length " + std::to_string(code.n_sym));
  }
  std::vector<Symbol> syn(static_cast<std::size_t>(code.parity()), 0);
  for (int j = 1; j <= code.parity(); ++j) {
    const Symbol root = gf::alpha_pow(j);
    Symbol acc = 0;
    for (std::size_t i = word.size(); i-- > 0;) acc = gf::add(gf::mul(acc, root), word[i]);
    syn[static_cast<std::size_t>(j - 1)] = acc;
  }
  return syn;
}

namespace {

Symbol poly_eval(std::span<const Symbol> poly, Symbol x) {
  Symbol acc = 0;
  for (std::size_t i = poly.size(); i-- > 0;) acc = gf::add(gf::mul(acc, x), poly[i]);
  return acc;
}

// Error-locator polynomial Lambda(x) = prod (1 - X_k x), lowest degree first.
std::vector<Symbol> berlekamp_massey(std::span<const Symbol> syn, int& degree) {
  const std::size_t n = syn.size();
  std::vector<Symbol> c(n + 1, 0), b(n + 1, 0);
  c[0] = b[0] = 1;
  int l = 0;
  std::size_t shift = 1;
  Symbol last = 1;
  for (std::size_t r = 0; r < n; ++r) {
    Symbol d = syn[r];
    for (int i = 1; i <= l; ++i)
      d = gf::add(d, gf::mul(c[static_cast<std::size_t>(i)], syn[r - static_cast<std::size_t>(i)]));
    if (d == 0) {
      ++shift;
      continue;
    }
    const Symbol coef = gf::div(d, last);
    if (2 * l <= static_cast<int>(r)) {
      auto prev = c;
      for (std::size_t i = 0; i + shift <= n; ++i)
        c[i + shift] = gf::add(c[i + shift], gf::mul(coef, b[i]));
      l = static_cast<int>(r) + 1 - l;
      b = std::move(prev);
      last = d;
      shift = 1;
    } else {
      for (std::size_t i = 0; i + shift <= n; ++i)
        c[i + shift] = gf::add(c[i + shift], gf::mul(coef, b[i]));
      ++shift;
    }
  }
  degree = l;
  c.resize(static_cast<std::size_t>(l) + 1);
  return c;
}

}  // namespace

std::vector<WordError> decode_error_from_syndrome(std::span<const Symbol> syndrome,
                                                  const RsCode& code,
                                                  std::size_t block_length) {
  code.validate();
  if (syndrome.size() != static_cast<std::size_t>(code.parity())) {
    throw Error("syndrome has " + std::to_string(syndrome.size()) +
                " symbols, code expects " + std::to_string(code.parity()));
  }
  if (block_length > static_cast<std::size_t>(code.n_sym)) {
    throw Error("block length exceeds code length");
  }
  if (std::all_of(syndrome.begin(), syndrome.end(), [](Symbol s) { return s == 0; })) {
    return {};
  }

  int degree = 0;
  const auto locator = berlekamp_massey(syndrome, degree);
  if (degree > code.t() || locator[static_cast<std::size_t>(degree)] == 0) {
    throw UncorrectableError("uncorrectable: locator degree " + std::to_string(degree) +
                             " exceeds capacity " + std::to_string(code.t()));
  }

  // Chien search: position i is in error iff Lambda(alpha^-i) = 0.
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < block_length; ++i) {
    if (poly_eval(locator, gf::alpha_pow(-static_cast<int>(i))) == 0) positions.push_back(i);
  }
  if (positions.size() != static_cast<std::size_t>(degree)) {
    throw UncorrectableError("uncorrectable: found " + std::to_string(positions.size()) +
                             " locator roots for degree " + std::to_string(degree));
  }

  // Forney with first root alpha^1: e = Omega(X^-1) / Lambda'(X^-1), where
  // Omega = S(x) Lambda(x) mod x^(n-k).
  const std::size_t np = syndrome.size();
  std::vector<Symbol> omega(np, 0);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < locator.size() && i + j < np; ++j)
      omega[i + j] = gf::add(omega[i + j], gf::mul(syndrome[i], locator[j]));
  }
  std::vector<Symbol> derivative;
  for (std::size_t i = 1; i < locator.size(); ++i)
    derivative.push_back((i % 2 == 1) ? locator[i] : Symbol{0});

  std::vector<WordError> errors;
  for (std::size_t pos : positions) {
    const Symbol x_inv = gf::alpha_pow(-static_cast<int>(pos));
    const Symbol denom = poly_eval(derivative, x_inv);
    if (denom == 0) throw UncorrectableError("uncorrectable: repeated locator root");
    const Symbol mag = gf::div(poly_eval(omega, x_inv), denom);
    if (mag == 0) throw UncorrectableError("uncorrectable: zero error magnitude");
    errors.push_back({pos, mag});
  }

  // Fail closed: the pattern must reproduce the syndrome exactly.
  std::vector<Symbol> check(static_cast<std::size_t>(code.parity()), 0);
  for (const auto& e : errors) {
    for (int j = 1; j <= code.parity(); ++j) {
      check[static_cast<std::size_t>(j - 1)] ^=
          gf::mul(e.magnitude, gf::alpha_pow(static_cast<int>(e.position) * j));
    }
  }
  if (!std::equal(check.begin(), check.end(), syndrome.begin())) {
    throw UncorrectableError("uncorrectable: decoded pattern does not match syndrome");
  }
  return errors;
}

}  // namespace pke::coding
