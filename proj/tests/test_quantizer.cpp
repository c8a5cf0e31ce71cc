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

#include <cstdlib>

#include "doctest.h"
#include "pke/bitstring.hpp"
#include "pke/error.hpp"
#include "pke/quantizer.hpp"
#include "pke/rng.hpp"

using namespace pke;
using namespace pke::quant;

TEST_CASE("unary embedding examples") {
  CHECK(embed_unary(-3).to_string() == "00000111");
  CHECK(embed_unary(0).to_string() == "00000000");
  CHECK(embed_unary(-8, {8, true}).to_string() == "111111111");
  CHECK(embed_unary(3, {8, true}).to_string() == "000000111");
  CHECK(embed_unary(0, {8, true}).to_string() == "000000000");
  CHECK_THROWS_WITH_AS(embed_unary(-9), doctest::Contains("level out of range"), Error);
  CHECK_THROWS_AS(embed_unary(0, {0, false}), Error);
}

TEST_CASE("trace embedding") {
  std::vector<int> levels(100, -2);
  CHECK(embed_trace(make_trace("a", levels)).size() == 800);
  CHECK(embed_trace(MeasurementTrace{}).empty());
  const std::vector<int> two{-1, -2};
  CHECK(embed_levels(two, {2, false}).to_string() == "0111");
  const std::vector<int> bad{0, -1, -12};
  CHECK_THROWS_WITH_AS(embed_levels(bad), doctest::Contains("sample 2"), Error);
}

TEST_CASE("hamming distance") {
  const auto a = BitString::from_string("00000111");
  CHECK(hamming_distance(a, a) == 0);
  CHECK(hamming_distance(a, BitString::from_string("00011111")) == 2);
  CHECK_THROWS_AS(hamming_distance(a, BitString(7)), Error);
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    BitString x(200), y(200);
    std::size_t expected = 0;
    for (std::size_t i = 0; i < 200; ++i) {
      x.set(i, rng.bit());
      y.set(i, rng.bit());
      if (x[i] != y[i]) ++expected;
    }
    CHECK(hamming_distance(x, y) == expected);
  }
}

TEST_CASE("word errors count differing 8-bit words") {
  const std::vector<int> a{0, -1, -2, -3}, b{0, -2, -2, -8};
  CHECK(word_errors(embed_levels(a), embed_levels(b)) == 2);
  CHECK_THROWS_AS(word_errors(BitString(16), BitString(8)), Error);
  // A trailing partial word counts as one word.
  auto c = BitString(12);
  c.flip(11);
  CHECK(word_errors(BitString(12), c) == 1);
}

TEST_CASE("property: isometry on [-m, 0]") {
  for (int m = 1; m <= 12; ++m)
    for (int x = -m; x <= 0; ++x)
      for (int y = -m; y <= 0; ++y) {
        const QuantizerConfig c{m, false};
        CHECK(hamming_distance(embed_unary(x, c), embed_unary(y, c)) ==
              static_cast<std::size_t>(std::abs(x - y)));
      }
}

TEST_CASE("property: signed embedding is injective and distorts by at most one") {
  const QuantizerConfig c{8, true};
  for (int x = -8; x <= 8; ++x)
    for (int y = -8; y <= 8; ++y) {
      const auto d = hamming_distance(embed_unary(x, c), embed_unary(y, c));
      if (x != y) CHECK(d > 0);
      const bool same_sign = (x < 0) == (y < 0);
      if (same_sign) {
        CHECK(d == static_cast<std::size_t>(std::abs(std::abs(x) - std::abs(y))));
      } else {
        CHECK(d == 1 + static_cast<std::size_t>(std::abs(std::abs(x) - std::abs(y))));
        CHECK(d <= static_cast<std::size_t>(std::abs(x - y)) + 1);
      }
    }
}

TEST_CASE("property: embedding length is additive") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> levels(rng.below(50));
    for (auto& l : levels) l = -static_cast<int>(rng.below(9));
    for (bool sign : {false, true}) {
      const QuantizerConfig c{8, sign};
      CHECK(embed_levels(levels, c).size() == levels.size() * c.bits_per_sample());
    }
  }
}

TEST_CASE("bit string hex form") {
  const auto b = BitString::from_string("1011");
  CHECK(b.to_len_hex() == "4:b0");
  CHECK(BitString::from_len_hex("4:b0") == b);
  CHECK(BitString::from_len_hex("0:").empty());
  CHECK_THROWS_AS(BitString::from_len_hex("4:b1"), Error);  // nonzero padding
  CHECK_THROWS_AS(BitString::from_len_hex("9:ff"), Error);  // too few bytes
  CHECK_THROWS_AS(BitString::from_len_hex("abc"), Error);
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    BitString x(rng.below(100));
    for (std::size_t i = 0; i < x.size(); ++i) x.set(i, rng.bit());
    CHECK(BitString::from_len_hex(x.to_len_hex()) == x);
    CHECK(BitString::from_bytes(x.to_bytes(), x.size()) == x);
    CHECK(BitString::from_string(x.to_string()) == x);
  }
}

TEST_CASE("bit string operations") {
  auto a = BitString::from_string("1100");
  const auto b = BitString::from_string("1010");
  CHECK((a ^ b).to_string() == "0110");
  CHECK(a.popcount() == 2);
  a.append(b);
  CHECK(a.to_string() == "11001010");
  CHECK(a.slice(2, 4).to_string() == "0010");
  CHECK(a.to_bytes() == std::vector<std::uint8_t>{0xca});
  CHECK_THROWS_AS(a.slice(6, 4), Error);
  CHECK_THROWS_AS(a ^ b, Error);
  CHECK_THROWS_AS(BitString::from_string("10x"), Error);
}
