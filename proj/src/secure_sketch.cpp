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

#include "pke/secure_sketch.hpp"

#include <algorithm>
#include <string>

#include "pke/error.hpp"

namespace pke::coding {

std::size_t Sketch::word_count() const {
  return static_cast<std::size_t>(block_count) * static_cast<std::size_t>(code.n_sym) -
         padded_words;
}

std::vector<BlockRange> block_layout(std::size_t words, int n_sym) {
  std::vector<BlockRange> out;
  if (words == 0) return out;
  const auto n = static_cast<std::size_t>(n_sym);
  const std::size_t blocks = (words + n - 1) / n;
  const std::size_t base = words / blocks;
  const std::size_t extra = words % blocks;
  std::size_t offset = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    out.push_back({offset, len});
    offset += len;
  }
  return out;
}

std::vector<Symbol> to_words(const BitString& bits) {
  if (bits.size() % 8 != 0) {
    throw Error("bit string of length " + std::to_string(bits.size()) +
                " is not byte aligned");
  }
  return bits.to_bytes();
}

BitString from_words(std::span<const Symbol> words) {
  return BitString::from_bytes(words, words.size() * 8);
}

Sketch ss_sketch(const BitString& rho, const RsCode& code) {
  code.validate();
  const auto words = to_words(rho);
  const auto layout = block_layout(words.size(), code.n_sym);
  Sketch sketch;
  sketch.code = code;
  sketch.block_count = static_cast<std::uint32_t>(layout.size());
  sketch.padded_words = static_cast<std::uint16_t>(
      layout.size() * static_cast<std::size_t>(code.n_sym) - words.size());
  sketch.syndromes.reserve(layout.size() * static_cast<std::size_t>(code.parity()));
  for (const auto& block : layout) {
    const auto syn = rs_syndrome(
        std::span<const Symbol>(words).subspan(block.offset, block.length), code);
    sketch.syndromes.insert(sketch.syndromes.end(), syn.begin(), syn.end());
  }
  return sketch;
}

BitString ss_recover(const BitString& rho_prime, const Sketch& sketch,
                     std::size_t& corrected_words) {
  sketch.code.validate();
  const auto parity = static_cast<std::size_t>(sketch.code.parity());
  if (sketch.syndromes.size() != sketch.block_count * parity) {
    throw Error("sketch holds " + std::to_string(sketch.syndromes.size()) +
                " syndromes, expected " + std::to_string(sketch.block_count * parity));
  }
  auto words = to_words(rho_prime);
  if (words.size() != sketch.word_count()) {
    throw Error("received string has " + std::to_string(words.size()) +
                " words, sketch covers " + std::to_string(sketch.word_count()));
  }
  const auto layout = block_layout(words.size(), sketch.code.n_sym);
  if (layout.size() != sketch.block_count) throw Error("sketch block count mismatch");

  corrected_words = 0;
  for (std::size_t b = 0; b < layout.size(); ++b) {
    auto block = std::span<Symbol>(words).subspan(layout[b].offset, layout[b].length);
    auto diff = rs_syndrome(block, sketch.code);
    for (std::size_t j = 0; j < parity; ++j) diff[j] ^= sketch.syndromes[b * parity + j];
    std::vector<WordError> errors;
    try {
      errors = decode_error_from_syndrome(diff, sketch.code, block.size());
    } catch (const UncorrectableError& e) {
      throw UncorrectableError("uncorrectable block " + std::to_string(b) + ": " + e.what(), b);
    }
    for (const auto& e : errors) block[e.position] ^= e.magnitude;
    corrected_words += errors.size();
  }
  return from_words(words);
}

BitString ss_recover(const BitString& rho_prime, const Sketch& sketch) {
  std::size_t corrected = 0;
  return ss_recover(rho_prime, sketch, corrected);
}

namespace {
constexpr std::uint8_t kMagic[4] = {'P', 'K', 'S', '1'};
constexpr std::size_t kHeaderBytes = 12;
}  // namespace

std::vector<std::uint8_t> serialize_sketch(const Sketch& sketch) {
  sketch.code.validate();
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  out.push_back(static_cast<std::uint8_t>(sketch.code.n_sym));
  out.push_back(static_cast<std::uint8_t>(sketch.code.k_sym));
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<std::uint8_t>(sketch.block_count >> shift));
  out.push_back(static_cast<std::uint8_t>(sketch.padded_words >> 8));
  out.push_back(static_cast<std::uint8_t>(sketch.padded_words));
  out.insert(out.end(), sketch.syndromes.begin(), sketch.syndromes.end());
  return out;
}

Sketch parse_sketch(std::span<const std::uint8_t> bytes, std::size_t* consumed) {
  if (bytes.size() < kHeaderBytes || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw Error("not a sketch: missing PKS1 header");
  }
  Sketch sketch;
  sketch.code = {bytes[4], bytes[5]};
  sketch.code.validate();
  sketch.block_count = (std::uint32_t{bytes[6]} << 24) | (std::uint32_t{bytes[7]} << 16) |
                       (std::uint32_t{bytes[8]} << 8) | std::uint32_t{bytes[9]};
  sketch.padded_words = static_cast<std::uint16_t>((bytes[10] << 8) | bytes[11]);
  const std::size_t payload =
      static_cast<std::size_t>(sketch.block_count) * static_cast<std::size_t>(sketch.code.parity());
  if (bytes.size() < kHeaderBytes + payload) throw Error("truncated sketch payload");
  if (sketch.block_count > 0 &&
      sketch.padded_words >= static_cast<std::size_t>(sketch.code.n_sym) * sketch.block_count) {
    throw Error("sketch padding exceeds block capacity");
  }
  sketch.syndromes.assign(bytes.begin() + kHeaderBytes,
                          bytes.begin() + static_cast<std::ptrdiff_t>(kHeaderBytes + payload));
  if (consumed != nullptr) *consumed = kHeaderBytes + payload;
  return sketch;
}

}  // namespace pke::coding
