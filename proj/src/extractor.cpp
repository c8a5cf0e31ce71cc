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

#include "pke/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pke/error.hpp"

namespace pke::extract {

ExtractorSeed ExtractorSeed::make(BitString bits, std::size_t input_length,
                                  std::size_t output_length) {
  if (input_length == 0 || output_length == 0) {
    throw Error("extractor dimensions must be positive");
  }
  if (bits.size() != seed_length(input_length, output_length)) {
    throw Error("extractor seed has " + std::to_string(bits.size()) + " bits, expected " +
                std::to_string(seed_length(input_length, output_length)));
  }
  return {std::move(bits), input_length, output_length};
}

BitString extract(const BitString& input, const ExtractorSeed& seed) {
  const std::size_t t = seed.input_length;
  const std::size_t l = seed.output_length;
  if (input.size() != t) {
    throw Error("extractor input has " + std::to_string(input.size()) +
                " bits, seed expects " + std::to_string(t));
  }
  if (seed.bits.size() != ExtractorSeed::seed_length(t, l)) {
    throw Error("extractor seed dimension mismatch");
  }
  const auto x = input.raw();
  const auto s = seed.bits.raw();
  BitString out(l);
  for (std::size_t i = 0; i < l; ++i) {
    // Row i reads seed[i + t - 1 - j] for j = 0..t-1.
    const std::uint8_t* diag = s.data() + i + t - 1;
    std::uint8_t acc = 0;
    for (std::size_t j = 0; j < t; ++j) acc ^= static_cast<std::uint8_t>(*(diag - j) & x[j]);
    out.set(i, acc != 0);
  }
  return out;
}

long max_extractable_length(double s_bits, double lambda) {
  const double l = std::floor(s_bits - 2.0 * lambda + 2.0);
  return l > 0.0 ? static_cast<long>(l) : 0;
}

}  // namespace pke::extract
