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

#include <cstddef>
#include <span>
#include <vector>

#include "pke/gf256.hpp"

namespace pke::coding {

// Reed-Solomon code over GF(2^8) with roots alpha^1 .. alpha^(n-k). Only the
// parity-check side is needed: the sketch transmits syndromes, never
// codewords.
struct RsCode {
  int n_sym = 255;
  int k_sym = 229;

  int parity() const { return n_sym - k_sym; }
  // Correctable symbol errors.
  int t() const { return parity() / 2; }

  // Throws unless 1 <= k_sym < n_sym <= 255.
  void validate() const;

  // The (n, n - 2t) code correcting t symbol errors.
  static RsCode correcting(int t, int n_sym = 255);

  friend bool operator==(const RsCode&, const RsCode&) = default;
};

struct WordError {
  std::size_t position = 0;
  Symbol magnitude = 0;

  friend bool operator==(const WordError&, const WordError&) = default;
  friend auto operator<=>(const WordError&, const WordError&) = default;
};

// Evaluates the (zero-padded) received word r(x) = sum r_i x^i at
// alpha^1 .. alpha^(n-k).
std::vector<Symbol> rs_syndrome(std::span<const Symbol> word, const RsCode& code);

// Unique error pattern of weight <= t with the given syndrome, located within
// the first `block_length` positions. Berlekamp-Massey, Chien search and
// Forney. Throws UncorrectableError when no such pattern exists; the result
// is re-checked against the syndrome before it is returned.
std::vector<WordError> decode_error_from_syndrome(std::span<const Symbol> syndrome,
                                                  const RsCode& code,
                                                  std::size_t block_length = 255);

}  // namespace pke::coding
