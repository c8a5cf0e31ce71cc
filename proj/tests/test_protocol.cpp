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

#include <cmath>

#include "doctest.h"
#include "pke/channel_sim.hpp"
#include "pke/error.hpp"
#include "pke/extractor.hpp"
#include "pke/protocol.hpp"
#include "pke/quantizer.hpp"
#include "pke/rng.hpp"

using namespace pke;
using namespace pke::protocol;
using hmm::LinearFit;

namespace {

// Smallest n >= 1 satisfying both planner conditions, by linear scan.
std::size_t scan_n(std::size_t l, double lambda, double c, const LinearFit& g, const LinearFit& e) {
  for (std::size_t n = 1; n < 10000000; ++n) {
    const double x = static_cast<double>(n);
    const bool entropy = g(x) - 16.0 * 1.2 * e(x) >= static_cast<double>(l) + 2 * lambda - 2;
    const bool correct = (e.slope == 0.0 && e.intercept <= 0.0) || e(x) / 100.0 >= c;
    if (entropy && correct) return n;
  }
  return 0;
}

MeasurementTrace noisy_copy(const MeasurementTrace& t, Rng& rng, double p) {
  MeasurementTrace out = t;
  out.node_id = "bob";
  for (auto& s : out.samples) {
    if (rng.uniform() < p) s.level = s.level == -8 ? -7 : s.level - 1;
  }
  return out;
}

MeasurementTrace random_trace(Rng& rng, std::size_t n, const char* id = "alice") {
  std::vector<int> v(n);
  for (auto& x : v) x = -static_cast<int>(rng.below(9));
  return make_trace(id, v);
}

}  // namespace

TEST_CASE("planner at l = 128, lambda = 80, c = 1") {
  const auto r = plan_parameters(128, 80, 1, kReferenceEntropyFit, kReferenceErrorFit);
  CHECK(r.closed_form_n == 2325);
  CHECK(r.closed_form_entropy_term == doctest::Approx(1802.52));
  CHECK(r.closed_form_correctness_term == doctest::Approx(2325.0));
  CHECK(r.entropy_bound_n >= 1790);
  CHECK(r.entropy_bound_n <= 1815);
  CHECK(r.correctness_bound_n == 2325);
  CHECK(r.first_principles_n == 2325);
  CHECK(r.params.n == 2325);
  CHECK(r.condition_slope == doctest::Approx(0.1594));
  CHECK(r.condition_intercept == doctest::Approx(0.5454));
  CHECK(r.constant_discrepancy);
  bool warned = false;
  for (const auto& w : r.warnings) warned |= w.find("549.4") != std::string::npos;
  CHECK(warned);
  bool success_warned = false;
  for (const auto& w : r.warnings) success_warned |= w.find("1 - e^-c") != std::string::npos;
  CHECK(r.predicted_success_probability < 1.0 - std::exp(-1.0));
  CHECK(success_warned);
  CHECK(r.params.code == coding::RsCode{255, 229});
  CHECK(r.blocks == 10);
  CHECK(r.words == 2325);
  CHECK(r.sketch_bits == 2080);
  CHECK(r.correctness.probability == doctest::Approx(std::exp(-kReferenceErrorFit(2325.0) / 100.0)).epsilon(1e-12));
  // Planner and closed form agree within 1%.
  CHECK(std::abs(double(r.first_principles_n) - double(r.closed_form_n)) <= 0.01 * r.closed_form_n);
}

TEST_CASE("planner without the correctness term lands near 1800") {
  const auto r = plan_parameters(128, 80, 1e-6, kReferenceEntropyFit, kReferenceErrorFit);
  CHECK(r.first_principles_n == r.entropy_bound_n);
  CHECK(std::abs(double(r.entropy_bound_n) - 1803.0) / 1803.0 < 0.01);
}

TEST_CASE("planner: error-free line") {
  const LinearFit g{1.0, 0.5, 0.0}, e{0.0, 0.0, 0.0};
  const auto r = plan_parameters(10, 0, 1, g, e);
  CHECK(r.entropy_bound_n == 8);  // n + 0.5 >= 8
  CHECK(r.correctness.vacuous);
  CHECK(r.first_principles_n == scan_n(10, 0, 1, g, e));
}

TEST_CASE("property: planner matches a direct inequality scan") {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const LinearFit e{0.001 + 0.05 * rng.uniform(), 0.2 * rng.uniform(), 0.0};
    const LinearFit g{19.2 * e.slope + 0.05 + rng.uniform(), 3.0 * rng.uniform() - 1.0, 0.0};
    const std::size_t l = 1 + rng.below(256);
    const double lambda = static_cast<double>(rng.below(100));
    const double c = 0.01 + 2.0 * rng.uniform();
    const auto r = plan_parameters(l, lambda, c, g, e);
    CHECK(r.first_principles_n == scan_n(l, lambda, c, g, e));
    CHECK(r.params.code.t() >= 1);
    CHECK(r.blocks == (r.words + 254) / 255);
  }
}

TEST_CASE("planner rejects infeasible inputs") {
  CHECK_THROWS_AS(plan_parameters(128, 80, 1, {0.5, 0, 0}, {0.05, 0, 0}), Error);
  CHECK_THROWS_AS(plan_parameters(128, 80, 1, {0.0, 0, 0}, {0.05, 0, 0}), Error);
  CHECK_THROWS_AS(plan_parameters(128, 80, 1, {1.0, 0, 0}, {-0.1, 0, 0}), Error);
  CHECK_THROWS_AS(plan_parameters(0, 80, 1, kReferenceEntropyFit, kReferenceErrorFit), Error);
  CHECK_THROWS_AS(plan_parameters(128, 80, 0, kReferenceEntropyFit, kReferenceErrorFit), Error);
}

TEST_CASE("correctness bound") {
  CHECK(correctness_bound(10, {10.0, 0.0, 0.0}).probability == doctest::Approx(std::exp(-1.0)));
  const auto b = correctness_bound(2325, kReferenceErrorFit);
  CHECK(b.probability == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));
  CHECK_FALSE(b.vacuous);
  const auto v = correctness_bound(100, {0.0, 0.0, 0.0});
  CHECK(v.probability == 1.0);
  CHECK(v.vacuous);
  CHECK_THROWS_AS(correctness_bound(0, kReferenceErrorFit), Error);
}

TEST_CASE("entropy ledger arithmetic") {
  const auto single = entropy_ledger(99.82, 208, 80);
  CHECK(single.residual_bits == doctest::Approx(-108.18));
  CHECK(single.key_bits == 0);
  const auto chain = entropy_ledger(2260, 2000, 80);
  CHECK(chain.residual_bits == doctest::Approx(260));
  CHECK(chain.extractor_loss_bits == doctest::Approx(158));
  CHECK(chain.key_bits == 102);
  const auto free = entropy_ledger(57.6, 0, 0);
  CHECK(free.key_bits == 59);
  const auto sketch = coding::ss_sketch(BitString(800), coding::RsCode{});
  CHECK(entropy_ledger(99.82, sketch, 80).sketch_loss_bits == 208);
  CHECK_THROWS_AS(entropy_ledger(-1, 0, 0), Error);
}

TEST_CASE("property: ledger never exceeds the extractor bound") {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const double initial = 4000 * rng.uniform();
    const std::size_t sketch = rng.below(4000);
    const double lambda = static_cast<double>(rng.below(128));
    const auto l = entropy_ledger(initial, sketch, lambda);
    CHECK(l.residual_bits == doctest::Approx(initial - static_cast<double>(sketch)));
    CHECK(l.key_bits <= extract::max_extractable_length(initial - static_cast<double>(sketch), lambda));
    CHECK(l.key_bits <= std::max(0L, static_cast<long>(std::floor(l.residual_bits - 2 * lambda + 2))));
  }
}

TEST_CASE("quantize for exchange pads to whole bytes") {
  const std::vector<int> v{-1, -2, -3};
  CHECK(quantize_for_exchange(make_trace("a", v), 3, 8).size() == 24);
  CHECK(quantize_for_exchange(make_trace("a", v), 3, 3).size() == 16);
  CHECK(quantize_for_exchange(make_trace("a", v), 2, 8) == quant::embed_levels(std::vector<int>{-1, -2}));
  CHECK_THROWS_AS(quantize_for_exchange(make_trace("a", v), 4, 8), Error);
}

TEST_CASE("exchange with identical traces") {
  Rng rng(3);
  const auto alice = random_trace(rng, 2400);
  auto bob = alice;
  bob.node_id = "bob";
  const auto params = plan_parameters(128, 80, 1, kReferenceEntropyFit, kReferenceErrorFit).params;
  const auto r = run_exchange(alice, bob, params, 7);
  CHECK(r.success);
  CHECK(r.alice_key == r.bob_key);
  CHECK(r.alice_key.size() == 128);
  CHECK(r.corrected_words == 0);
  CHECK(r.ledger.sketch_loss_bits == 2080);
  CHECK(r.ledger.initial_bits == doctest::Approx(0.985 * 2325 + 1.467));
  CHECK_FALSE(r.certified);  // 211.6 residual bits < 286
}

TEST_CASE("exchange corrects moderate noise and is reproducible") {
  Rng rng(4);
  const auto alice = random_trace(rng, 2400);
  const auto bob = noisy_copy(alice, rng, 0.02);
  const auto params = plan_parameters(128, 80, 1, kReferenceEntropyFit, kReferenceErrorFit).params;
  const auto r1 = run_exchange(alice, bob, params, 11);
  const auto r2 = run_exchange(alice, bob, params, 11);
  CHECK(r1.success);
  CHECK(r1.corrected_words > 0);
  CHECK(r1.alice_key == r2.alice_key);
  CHECK(r1.transcript.seed == r2.transcript.seed);
  CHECK(serialize_transcript(r1.transcript) == serialize_transcript(r2.transcript));
  const auto r3 = run_exchange(alice, bob, params, 12);
  CHECK_FALSE(r3.alice_key == r1.alice_key);
}

TEST_CASE("exchange fails closed beyond capacity") {
  Rng rng(5);
  const auto alice = random_trace(rng, 2400);
  const auto bob = noisy_copy(alice, rng, 0.5);
  const auto params = plan_parameters(128, 80, 1, kReferenceEntropyFit, kReferenceErrorFit).params;
  const auto r = run_exchange(alice, bob, params, 1);
  CHECK_FALSE(r.success);
  CHECK(r.reason.find("uncorrectable block") != std::string::npos);
}

TEST_CASE("exchange preconditions") {
  Rng rng(6);
  const auto alice = random_trace(rng, 100);
  auto params = plan_parameters(128, 80, 1, kReferenceEntropyFit, kReferenceErrorFit).params;
  CHECK_THROWS_WITH_AS(run_exchange(alice, alice, params, 1), doctest::Contains("too short"), Error);
  params.n = 50;
  const std::vector<int> v(100, -1);
  CHECK_THROWS_WITH_AS(run_exchange(alice, make_trace("bob", v, FrameType::kPing, 3), params, 1),
                       doctest::Contains("not aligned"), Error);
}

TEST_CASE("Bob needs only his string and the transcript") {
  Rng rng(7);
  const auto alice = random_trace(rng, 500);
  const auto bob = noisy_copy(alice, rng, 0.02);
  auto rho_a = quantize_for_exchange(alice, 500, 8);
  const auto rho_b = quantize_for_exchange(bob, 500, 8);
  const auto sent = alice_send(rho_a, coding::RsCode{}, 64, 3);
  for (std::size_t i = 0; i < rho_a.size(); ++i) rho_a.set(i, false);  // gone after sketching
  const auto bytes = serialize_transcript(sent.transcript);
  const auto received = bob_receive(rho_b, parse_transcript(bytes), 64);
  CHECK(received.key == sent.key);
  CHECK(received.key.size() == 64);
}

TEST_CASE("transcript round-trip") {
  Rng rng(8);
  BitString rho(1200 * 8);
  for (std::size_t i = 0; i < rho.size(); ++i) rho.set(i, rng.bit());
  const auto sent = alice_send(rho, coding::RsCode{255, 211}, 128, 9);
  const auto bytes = serialize_transcript(sent.transcript);
  const auto parsed = parse_transcript(bytes);
  CHECK(parsed.sketch == sent.transcript.sketch);
  CHECK(parsed.seed == sent.transcript.seed);
  CHECK(parsed.seed.size() == rho.size() + 127);
  std::vector<std::uint8_t> broken(bytes.begin(), bytes.end() - 3);
  CHECK_THROWS_AS(parse_transcript(broken), Error);
}

TEST_CASE("growth series on a noiseless channel") {
  sim::ChannelFamily f;
  f.eve_accuracy = 0.6;
  const auto run = sim::simulate_run(sim::family_config(f, 2000, 3));
  GrowthOptions o;
  o.slices = 10;
  const auto g = measure_growth(run.alice, run.bob, run.eve, o);
  CHECK(g.points.size() == 20);
  CHECK(g.points.front().n == 10);
  CHECK(g.points.back().n == 200);
  CHECK(g.error_fit.slope == doctest::Approx(0.0));
  CHECK(g.entropy_fit.slope > 0.5);
  for (const auto& p : g.points) CHECK(p.mean_word_errors == 0.0);
  o.slices = 11;
  CHECK_THROWS_AS(measure_growth(run.alice, run.bob, run.eve, o), Error);
}
