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

#include <algorithm>

#include "doctest.h"
#include "pke/error.hpp"
#include "pke/gf256.hpp"
#include "pke/quantizer.hpp"
#include "pke/reed_solomon.hpp"
#include "pke/secure_sketch.hpp"
#include "support.hpp"

using namespace pke;
using namespace pke::coding;

namespace {

std::vector<Symbol> random_word(Rng& rng, std::size_t len) {
  std::vector<Symbol> w(len);
  for (auto& s : w) s = static_cast<Symbol>(rng.below(256));
  return w;
}

BitString random_bits(Rng& rng, std::size_t len) {
  BitString b(len);
  for (std::size_t i = 0; i < len; ++i) b.set(i, rng.bit());
  return b;
}

// Corrupts `count` distinct words of [offset, offset + length).
void corrupt_words(BitString& bits, Rng& rng, std::size_t offset, std::size_t length,
                   std::size_t count) {
  for (std::size_t p : testing::distinct_positions(rng, length, count)) {
    const auto mask = static_cast<Symbol>(1 + rng.below(255));
    for (int b = 0; b < 8; ++b)
      if (mask & (0x80 >> b)) bits.flip((offset + p) * 8 + static_cast<std::size_t>(b));
  }
}

}  // namespace

TEST_CASE("GF tables invert each other") {
  for (int x = 1; x < 256; ++x) {
    CHECK(kGf.exp[static_cast<std::size_t>(kGf.log[x])] == x);
  }
  CHECK(gf::alpha_pow(0) == 1);
  CHECK(gf::alpha_pow(1) == 2);
  CHECK(gf::alpha_pow(8) == 0x1d);
}

TEST_CASE("GF multiplication table matches the shift-and-add oracle") {
  for (int a = 0; a < 256; ++a)
    for (int b = 0; b < 256; ++b)
      REQUIRE(gf::mul(static_cast<Symbol>(a), static_cast<Symbol>(b)) ==
              testing::peasant_mul(static_cast<Symbol>(a), static_cast<Symbol>(b)));
}

TEST_CASE("GF field laws") {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const auto a = static_cast<Symbol>(rng.below(256));
    const auto b = static_cast<Symbol>(1 + rng.below(255));
    const auto c = static_cast<Symbol>(rng.below(256));
    CHECK(gf_ops(a, a, GfOp::kAdd) == 0);
    CHECK(gf_ops(a, 1, GfOp::kMul) == a);
    CHECK(gf::div(gf::mul(a, b), b) == a);
    CHECK(gf::mul(b, gf::inv(b)) == 1);
    CHECK(gf::mul(a, c) == gf::mul(c, a));
    CHECK(gf::mul(gf::mul(a, b), c) == gf::mul(a, gf::mul(b, c)));
    CHECK(gf::mul(a, gf::add(b, c)) == gf::add(gf::mul(a, b), gf::mul(a, c)));
    const unsigned e = static_cast<unsigned>(rng.below(600));
    CHECK(gf_ops(a, static_cast<Symbol>(e % 256), GfOp::kPow) == testing::peasant_pow(a, e % 256));
    CHECK(gf::pow(a, e) == testing::peasant_pow(a, e));
  }
  CHECK_THROWS_AS(gf::div(5, 0), Error);
  CHECK_THROWS_AS(gf_ops(5, 0, GfOp::kDiv), Error);
  CHECK_THROWS_AS(gf::inv(0), Error);
}

TEST_CASE("RsCode parameters") {
  const RsCode code;
  CHECK(code.n_sym == 255);
  CHECK(code.k_sym == 229);
  CHECK(code.t() == 13);
  CHECK(RsCode::correcting(13) == code);
  CHECK_THROWS_AS((RsCode{255, 255}.validate()), Error);
  CHECK_THROWS_AS((RsCode{256, 200}.validate()), Error);
  CHECK_THROWS_AS((RsCode{255, 0}.validate()), Error);
}

TEST_CASE("syndromes of zero words and generator codewords vanish") {
  const RsCode code;
  CHECK(rs_syndrome(std::vector<Symbol>(255, 0), code) == std::vector<Symbol>(26, 0));
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto msg = random_word(rng, 229);
    const auto cw = testing::encode_by_generator(msg, 26);
    REQUIRE(cw.size() == 255);
    CHECK(rs_syndrome(cw, code) == std::vector<Symbol>(26, 0));
    // A shortened codeword is a codeword with leading zero message symbols.
    const auto short_cw = testing::encode_by_generator(random_word(rng, 50), 26);
    CHECK(rs_syndrome(short_cw, code) == std::vector<Symbol>(26, 0));
  }
}

TEST_CASE("syndromes match direct polynomial evaluation") {
  const RsCode code{255, 239};
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = random_word(rng, 1 + rng.below(255));
    const auto s = rs_syndrome(w, code);
    REQUIRE(s.size() == 16);
    for (int i = 0; i < 16; ++i) {
      CHECK(s[static_cast<std::size_t>(i)] ==
            testing::poly_eval(w, testing::peasant_pow(2, static_cast<unsigned>(i + 1))));
    }
  }
  CHECK_THROWS_AS(rs_syndrome(std::vector<Symbol>(256, 0), code), Error);
}

TEST_CASE("syndrome is linear") {
  const RsCode code;
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_word(rng, 255), b = random_word(rng, 255);
    std::vector<Symbol> x(255);
    for (std::size_t i = 0; i < 255; ++i) x[i] = a[i] ^ b[i];
    const auto sa = rs_syndrome(a, code), sb = rs_syndrome(b, code), sx = rs_syndrome(x, code);
    for (std::size_t i = 0; i < sx.size(); ++i) CHECK(sx[i] == (sa[i] ^ sb[i]));
  }
}

TEST_CASE("single error syndrome follows the evaluation pattern") {
  const RsCode code;
  const auto cw = testing::encode_by_generator(std::vector<Symbol>(229, 7), 26);
  auto received = cw;
  const std::size_t p = 100;
  const Symbol e = 0x5a;
  received[p] ^= e;
  const auto s = rs_syndrome(received, code);
  for (int i = 0; i < 26; ++i) {
    const Symbol expect = testing::peasant_mul(
        e, testing::peasant_pow(testing::peasant_pow(2, static_cast<unsigned>(i + 1)), p));
    CHECK(s[static_cast<std::size_t>(i)] == expect);
  }
  const auto errors = decode_error_from_syndrome(s, code);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0] == WordError{p, e});
}

TEST_CASE("decoder: zero syndrome, inject-then-decode, beyond capacity") {
  const RsCode code;
  CHECK(decode_error_from_syndrome(std::vector<Symbol>(26, 0), code).empty());
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t weight = 1 + rng.below(13);
    std::vector<Symbol> err(255, 0);
    std::vector<WordError> truth;
    for (auto p : testing::distinct_positions(rng, 255, weight)) {
      const auto mag = static_cast<Symbol>(1 + rng.below(255));
      err[p] = mag;
      truth.push_back({p, mag});
    }
    std::sort(truth.begin(), truth.end());
    auto got = decode_error_from_syndrome(rs_syndrome(err, code), code);
    std::sort(got.begin(), got.end());
    CHECK(got == truth);
  }
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Symbol> err(255, 0);
    for (auto p : testing::distinct_positions(rng, 255, 14)) err[p] = static_cast<Symbol>(1 + rng.below(255));
    try {
      const auto got = decode_error_from_syndrome(rs_syndrome(err, code), code);
      // Any returned pattern must be consistent with the syndrome and weigh <= t.
      std::vector<Symbol> rebuilt(255, 0);
      for (const auto& w : got) rebuilt[w.position] = w.magnitude;
      CHECK(got.size() <= 13);
      CHECK(rs_syndrome(rebuilt, code) == rs_syndrome(err, code));
      CHECK(rebuilt != err);
    } catch (const UncorrectableError&) {
    }
  }
}

TEST_CASE("decoder stays inside a shortened block") {
  const RsCode code;
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t len = 30 + rng.below(200);
    std::vector<Symbol> err(len, 0);
    for (auto p : testing::distinct_positions(rng, len, 1 + rng.below(13)))
      err[p] = static_cast<Symbol>(1 + rng.below(255));
    const auto got = decode_error_from_syndrome(rs_syndrome(err, code), code, len);
    for (const auto& w : got) CHECK(w.position < len);
  }
}

TEST_CASE("block layout is balanced") {
  CHECK(block_layout(100, 255).size() == 1);
  CHECK(block_layout(2048, 255).size() == 9);
  const auto layout = block_layout(2325, 255);
  REQUIRE(layout.size() == 10);
  std::size_t total = 0, offset = 0;
  for (const auto& b : layout) {
    CHECK(b.offset == offset);
    CHECK((b.length == 233 || b.length == 232));
    offset += b.length;
    total += b.length;
  }
  CHECK(total == 2325);
  CHECK(layout.front().length >= layout.back().length);
}

TEST_CASE("sketch sizes") {
  const RsCode code;
  const Sketch s = ss_sketch(BitString(800), code);
  CHECK(s.block_count == 1);
  CHECK(s.syndromes.size() == 26);
  CHECK(s.bit_length() == 208);
  CHECK(std::all_of(s.syndromes.begin(), s.syndromes.end(), [](Symbol v) { return v == 0; }));
  CHECK(s.word_count() == 100);
  const Sketch big = ss_sketch(BitString(2048 * 8), code);
  CHECK(big.block_count == 9);
  CHECK(big.bit_length() == 9u * 26u * 8u);
  CHECK_THROWS_AS(ss_sketch(BitString(801), code), Error);
}

TEST_CASE("sketch recovers the identity and <= t errors per block") {
  const RsCode code;
  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t words = 100 + rng.below(2000);
    const auto rho = random_bits(rng, words * 8);
    const auto sketch = ss_sketch(rho, code);
    CHECK(ss_recover(rho, sketch) == rho);
    auto noisy = rho;
    for (const auto& block : block_layout(words, 255))
      corrupt_words(noisy, rng, block.offset, block.length, rng.below(14));
    std::size_t corrected = 0;
    CHECK(ss_recover(noisy, sketch, corrected) == rho);
    CHECK(corrected == quant::word_errors(rho, noisy));
  }
}

TEST_CASE("sketch with 14 errors in a block never passes silently") {
  const RsCode code;
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = random_bits(rng, 255 * 8);
    const auto sketch = ss_sketch(rho, code);
    auto noisy = rho;
    corrupt_words(noisy, rng, 0, 255, 14);
    try {
      const auto recovered = ss_recover(noisy, sketch);
      CHECK(recovered != rho);
    } catch (const UncorrectableError& e) {
      CHECK(e.block() == 0);
      CHECK(std::string(e.what()).find("uncorrectable block 0") != std::string::npos);
    }
  }
}

TEST_CASE("recovery rejects a length mismatch") {
  const auto sketch = ss_sketch(BitString(800), RsCode{});
  CHECK_THROWS_AS(ss_recover(BitString(808), sketch), Error);
}

TEST_CASE("sketch wire format is bit-exact") {
  Rng rng(16);
  const auto rho = random_bits(rng, 300 * 8);
  const auto sketch = ss_sketch(rho, RsCode{255, 239});
  const auto bytes = serialize_sketch(sketch);
  REQUIRE(bytes.size() == 12 + sketch.syndromes.size());
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "PKS1");
  CHECK(bytes[4] == 255);
  CHECK(bytes[5] == 239);
  CHECK(bytes[6] == 0);
  CHECK(bytes[7] == 0);
  CHECK(bytes[8] == 0);
  CHECK(bytes[9] == 2);
  const std::size_t padded = 2 * 255 - 300;
  CHECK(bytes[10] == (padded >> 8));
  CHECK(bytes[11] == (padded & 0xff));
  CHECK(std::equal(sketch.syndromes.begin(), sketch.syndromes.end(), bytes.begin() + 12));
  std::size_t consumed = 0;
  CHECK(parse_sketch(bytes, &consumed) == sketch);
  CHECK(consumed == bytes.size());

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(parse_sketch(bad), Error);
  const std::vector<std::uint8_t> truncated(bytes.begin(), bytes.end() - 1);
  CHECK_THROWS_AS(parse_sketch(truncated), Error);
}

TEST_CASE("words round-trip through bit strings") {
  Rng rng(18);
  const auto words = random_word(rng, 40);
  CHECK(to_words(from_words(words)) == words);
  CHECK(from_words(std::vector<Symbol>{0x80}).to_string() == "10000000");
}
