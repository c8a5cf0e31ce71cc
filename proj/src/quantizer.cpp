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

#include "pke/quantizer.hpp"

#include <cstdlib>
#include <string>

#include "pke/error.hpp"

namespace pke::quant {

BitString embed_unary(int level, const QuantizerConfig& config) {
  if (config.max_magnitude < 1) throw Error("quantizer magnitude must be >= 1");
  const int magnitude = std::abs(level);
  if (magnitude > config.max_magnitude) {
    throw Error("level out of range: |" + std::to_string(level) + "| > " +
                std::to_string(config.max_magnitude));
  }
  BitString out;
  if (config.include_sign) out.push_back(level < 0);
  for (int i = 0; i < config.max_magnitude - magnitude; ++i) out.push_back(false);
  for (int i = 0; i < magnitude; ++i) out.push_back(true);
  return out;
}

BitString embed_levels(std::span<const int> levels, const QuantizerConfig& config) {
  BitString out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    try {
      out.append(embed_unary(levels[i], config));
    } catch (const Error& e) {
      throw Error("sample " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

BitString embed_trace(const MeasurementTrace& trace, const QuantizerConfig& config) {
  const auto levels = trace.levels();
  return embed_levels(levels, config);
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) {
    throw Error("hamming distance of unequal lengths " + std::to_string(a.size()) +
                " and " + std::to_string(b.size()));
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::size_t word_errors(const BitString& a, const BitString& b,
                        std::size_t word_bits) {
  if (a.size() != b.size()) throw Error("word errors of unequal lengths");
  if (word_bits == 0) throw Error("word size must be positive");
  std::size_t errors = 0;
  for (std::size_t w = 0; w < a.size(); w += word_bits) {
    for (std::size_t i = w; i < std::min(a.size(), w + word_bits); ++i) {
      if (a[i] != b[i]) {
        ++errors;
        break;
      }
    }
  }
  return errors;
}

}  // namespace pke::quant
