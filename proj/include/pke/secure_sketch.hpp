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
#include <cstdint>
#include <span>
#include <vector>

#include "pke/bitstring.hpp"
#include "pke/reed_solomon.hpp"

namespace pke::coding {

// Public reconciliation message: per-block RS syndromes of the sender's
// 8-bit words.
struct Sketch {
  std::vector<Symbol> syndromes;  // block_count * parity, block order
  std::uint32_t block_count = 0;
  RsCode code;
  std::uint16_t padded_words = 0;  // block_count * n_sym - word count

  std::size_t word_count() const;
  std::size_t bit_length() const { return syndromes.size() * 8; }

  friend bool operator==(const Sketch&, const Sketch&) = default;
};

// Word ranges of the blocks: ceil(words / n_sym) blocks whose sizes differ
// by at most one, larger blocks first.
struct BlockRange {
  std::size_t offset = 0;
  std::size_t length = 0;
};
std::vector<BlockRange> block_layout(std::size_t words, int n_sym);

// Splits a byte-aligned bit string into 8-bit words, MSB first.
std::vector<Symbol> to_words(const BitString& bits);
BitString from_words(std::span<const Symbol> words);

// Syndrome construction. Throws on input that is not byte aligned.
Sketch ss_sketch(const BitString& rho, const RsCode& code);

// Recovers rho from rho' within t word errors per block. Throws
// UncorrectableError naming the first block beyond capacity.
BitString ss_recover(const BitString& rho_prime, const Sketch& sketch);

// As above; also reports how many words were corrected.
BitString ss_recover(const BitString& rho_prime, const Sketch& sketch,
                     std::size_t& corrected_words);

// Wire format: "PKS1" | n_sym (1) | k_sym (1) | block_count (4, BE) |
// padded_words (2, BE) | syndromes.
std::vector<std::uint8_t> serialize_sketch(const Sketch& sketch);
// Parses a sketch from the start of `bytes`; `consumed` receives its length.
Sketch parse_sketch(std::span<const std::uint8_t> bytes, std::size_t* consumed = nullptr);

}  // namespace pke::coding
