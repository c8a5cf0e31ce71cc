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

#include "pke/bitstring.hpp"
#include "pke/trace.hpp"

namespace pke::quant {

// Unary embedding of integer levels in [-max_magnitude, max_magnitude].
struct QuantizerConfig {
  int max_magnitude = 8;
  bool include_sign = false;

  std::size_t bits_per_sample() const {
    return static_cast<std::size_t>(max_magnitude) + (include_sign ? 1 : 0);
  }
};

// [sign] ++ (m - |x|) zeros ++ |x| ones. The sign bit is 1 iff x < 0.
// Without a sign bit the mapping is an isometry from same-sign levels
// (l1 metric) into bit strings (Hamming metric).
BitString embed_unary(int level, const QuantizerConfig& config = {});

// Concatenated per-sample embeddings.
BitString embed_levels(std::span<const int> levels,
                       const QuantizerConfig& config = {});
BitString embed_trace(const MeasurementTrace& trace,
                      const QuantizerConfig& config = {});

std::size_t hamming_distance(const BitString& a, const BitString& b);

// Number of differing `word_bits`-bit words; a partial final word counts too.
std::size_t word_errors(const BitString& a, const BitString& b,
                        std::size_t word_bits = 8);

}  // namespace pke::quant
