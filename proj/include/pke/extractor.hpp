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

#include "pke/bitstring.hpp"

namespace pke::extract {

// Seed of the Toeplitz hash family mapping t input bits to l output bits.
struct ExtractorSeed {
  BitString bits;  // t + l - 1 bits
  std::size_t input_length = 0;
  std::size_t output_length = 0;

  // Throws unless |bits| = t + l - 1 with t, l >= 1.
  static ExtractorSeed make(BitString bits, std::size_t input_length,
                            std::size_t output_length);

  static std::size_t seed_length(std::size_t input_length, std::size_t output_length) {
    return input_length + output_length - 1;
  }
};

// T * input over GF(2), where T[i][j] = seed[i - j + t - 1].
BitString extract(const BitString& input, const ExtractorSeed& seed);

// Largest l with s >= l + 2*lambda - 2, floored at zero.
long max_extractable_length(double s_bits, double lambda);

}  // namespace pke::extract
