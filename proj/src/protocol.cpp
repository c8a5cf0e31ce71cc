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

#include "pke/protocol.hpp"

#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <cmath>
#include <string>

#include "pke/error.hpp"
#include "pke/extractor.hpp"
#include "pke/quantizer.hpp"
#include "pke/rng.hpp"

namespace pke::protocol {

void ProtocolParams::validate() const {
  if (n < 1) throw Error("protocol: n must be at least 1");
  if (l < 1) throw Error("protocol: l must be at least 1");
  if (m < 1) throw Error("protocol: quantizer magnitude must be at least 1");
  if (!(lambda >= 0.0)) throw Error("protocol: lambda must be non-negative");
  if (!(c > 0.0)) throw Error("protocol: c must be positive");
  code.validate();
}

EntropyLedger entropy_ledger(double initial_bits, std::size_t sketch_bits, double lambda) {
  if (!(initial_bits >= 0.0)) throw Error("ledger: initial entropy must be non-negative");
  EntropyLedger ledger;
  ledger.initial_bits = initial_bits;
  ledger.sketch_loss_bits = sketch_bits;
  ledger.extractor_loss_bits = 2.0 * lambda - 2.0;
  ledger.residual_bits = initial_bits - static_cast<double>(sketch_bits);
  ledger.key_bits = extract::max_extractable_length(ledger.residual_bits, lambda);
  return ledger;
}

EntropyLedger entropy_ledger(double initial_bits, const coding::Sketch& sketch,
                             double lambda) {
  return entropy_ledger(initial_bits, sketch.bit_length(), lambda);
}

CorrectnessBound correctness_bound(std::size_t n, const hmm::LinearFit& error_fit) {
  if (n < 1) throw Error("correctness bound: n must be at least 1");
  const double expected = error_fit(static_cast<double>(n));
  if (expected <= 0.0) return {1.0, true};
  return {std::exp(-expected / kChernoffDenominator), false};
}

namespace {

// Smallest integer n >= 1 with slope * n + intercept >= target.
std::size_t smallest_n(double slope, double intercept, double target, const char* what) {
  if (intercept + slope >= target) return 1;
  if (!(slope > 0.0)) {
    throw Error(std::string("infeasible: ") + what + " can never be met");
  }
  auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((target - intercept) / slope)));
  while (n > 1 && slope * static_cast<double>(n - 1) + intercept >= target) --n;
  while (slope * static_cast<double>(n) + intercept < target) ++n;
  return n;
}

double block_success_probability(std::size_t words, double p, int t) {
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return static_cast<std::size_t>(t) >= words ? 1.0 : 0.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(words), p);
  return boost::math::cdf(dist, static_cast<double>(t));
}

}  // namespace

PlanReport plan_parameters(std::size_t l, double lambda, double c,
                           const hmm::LinearFit& entropy_fit,
                           const hmm::LinearFit& error_fit, int m) {
  if (!(entropy_fit.slope > 0.0)) throw Error("plan: entropy fit must have positive slope");
  if (error_fit.slope < 0.0) throw Error("plan: error fit must have non-negative slope");
  if (l < 1) throw Error("plan: l must be at least 1");
  if (!(lambda >= 0.0) || !(c > 0.0)) throw Error("plan: need lambda >= 0 and c > 0");
  if (m < 1) throw Error("plan: quantizer magnitude must be at least 1");

  PlanReport report;
  const double cost = kSketchBitsPerError * kErrorSafetyFactor;
  report.condition_slope = entropy_fit.slope - cost * error_fit.slope;
  report.condition_intercept = entropy_fit.intercept - cost * error_fit.intercept;
  const double entropy_target = static_cast<double>(l) + 2.0 * lambda - 2.0;
  report.entropy_bound_n = smallest_n(report.condition_slope, report.condition_intercept,
                                      entropy_target, "the entropy condition");

  if (error_fit.slope == 0.0 && error_fit.intercept <= 0.0) {
    report.correctness_bound_n = 1;
    report.warnings.push_back(
        "error fit is identically non-positive: the correctness condition is vacuous");
  } else {
    report.correctness_bound_n = smallest_n(error_fit.slope / kChernoffDenominator,
                                            error_fit.intercept / kChernoffDenominator, c,
                                            "the correctness condition");
  }
  report.first_principles_n = std::max(report.entropy_bound_n, report.correctness_bound_n);

  report.closed_form_entropy_term = 12.54 * lambda + 6.27 * static_cast<double>(l) - 3.24;
  report.closed_form_correctness_term = 2326.0 * c - 1.0;
  report.closed_form_n = static_cast<std::size_t>(
      std::max(1.0, std::ceil(std::max(report.closed_form_entropy_term, report.closed_form_correctness_term))));
  report.constant_discrepancy =
      std::abs(report.condition_slope - report.reference_condition_slope) > 5e-5 ||
      std::abs(report.condition_intercept - report.reference_condition_intercept) > 5e-5;
  if (report.constant_discrepancy) {
    report.warnings.push_back(
        "entropy condition recomputed from the fits is " +
        std::to_string(report.condition_slope * 1000.0) + " n + " +
        std::to_string(report.condition_intercept * 1000.0) +
        " (per mille); the reference closed form states 159.4 n + 549.4");
  }
  const double rel_gap =
      std::abs(static_cast<double>(report.first_principles_n) -
               static_cast<double>(report.closed_form_n)) /
      static_cast<double>(report.closed_form_n);
  if (rel_gap > 0.01) {
    report.warnings.push_back("first-principles n differs from the closed form by " +
                              std::to_string(rel_gap * 100.0) + "%");
  }

  // Code allocation: balanced blocks of at most 255 words, each sized for its
  // proportional share of the (6/5) e(n) budget.
  const std::size_t n = report.first_principles_n;
  report.words = (n * static_cast<std::size_t>(m) + 7) / 8;
  const auto layout = coding::block_layout(report.words, 255);
  report.blocks = layout.size();
  const double expected_errors = std::max(0.0, error_fit(static_cast<double>(n)));
  report.error_budget_words = kErrorSafetyFactor * expected_errors;
  const double largest = static_cast<double>(layout.front().length);
  const double share = report.error_budget_words * largest / static_cast<double>(report.words);
  const int t = std::max(1, static_cast<int>(std::ceil(share - 1e-9)));
  if (2 * t >= 255) throw Error("infeasible: per-block error budget exceeds RS capacity");

  ProtocolParams& params = report.params;
  params.n = n;
  params.m = m;
  params.code = coding::RsCode::correcting(t);
  params.l = l;
  params.lambda = lambda;
  params.c = c;
  params.entropy_fit = entropy_fit;
  params.error_fit = error_fit;

  report.sketch_bits = report.blocks * static_cast<std::size_t>(params.code.parity()) * 8;
  report.predicted_initial_bits = std::max(0.0, entropy_fit(static_cast<double>(n)));
  report.predicted_ledger = entropy_ledger(report.predicted_initial_bits, report.sketch_bits, lambda);
  report.correctness = correctness_bound(n, error_fit);
  if (report.correctness.vacuous) {
    report.warnings.push_back("expected word errors e(n) <= 0: correctness bound is vacuous");
  }

  const double p = std::clamp(expected_errors / static_cast<double>(report.words), 0.0, 1.0);
  report.predicted_success_probability = 1.0;
  for (const auto& block : layout)
    report.predicted_success_probability *= block_success_probability(block.length, p, t);

  if (report.predicted_ledger.key_bits < static_cast<long>(l)) {
    report.warnings.push_back(
        "sketch of " + std::to_string(report.sketch_bits) + " bits leaves " +
        std::to_string(report.predicted_ledger.residual_bits) + " bits, below l + 2 lambda - 2 = " +
        std::to_string(entropy_target) + " after per-block rounding");
  }
  if (report.predicted_success_probability < 1.0 - std::exp(-c)) {
    report.warnings.push_back("per-block decoding success " +
                              std::to_string(report.predicted_success_probability) +
                              " is below 1 - e^-c = " + std::to_string(1.0 - std::exp(-c)));
  }
  return report;
}

BitString quantize_for_exchange(const MeasurementTrace& trace, std::size_t n, int m) {
  if (trace.size() < n) {
    throw Error("trace '" + trace.node_id + "' has " + std::to_string(trace.size()) +
                " samples, exchange needs " + std::to_string(n));
  }
  BitString rho = quant::embed_trace(trace.prefix(n), quant::QuantizerConfig{m, false});
  while (rho.size() % 8 != 0) rho.push_back(false);
  return rho;
}

std::vector<std::uint8_t> serialize_transcript(const Transcript& transcript) {
  auto out = coding::serialize_sketch(transcript.sketch);
  const auto seed = transcript.seed.to_len_hex();
  out.insert(out.end(), seed.begin(), seed.end());
  out.push_back('\n');
  return out;
}

Transcript parse_transcript(std::span<const std::uint8_t> bytes) {
  std::size_t consumed = 0;
  Transcript transcript;
  transcript.sketch = coding::parse_sketch(bytes, &consumed);
  std::string rest(bytes.begin() + static_cast<std::ptrdiff_t>(consumed), bytes.end());
  while (!rest.empty() && (rest.back() == '\n' || rest.back() == '\r')) rest.pop_back();
  transcript.seed = BitString::from_len_hex(rest);
  return transcript;
}

AliceOutput alice_send(const BitString& rho_a, const coding::RsCode& code, std::size_t l,
                       std::uint64_t seed) {
  AliceOutput out;
  out.transcript.sketch = coding::ss_sketch(rho_a, code);
  Rng rng(seed);
  BitString seed_bits(extract::ExtractorSeed::seed_length(rho_a.size(), l));
  for (std::size_t i = 0; i < seed_bits.size(); ++i) seed_bits.set(i, rng.bit());
  out.transcript.seed = seed_bits;
  out.key = extract::extract(rho_a, extract::ExtractorSeed::make(seed_bits, rho_a.size(), l));
  return out;
}

BobOutput bob_receive(const BitString& rho_b, const Transcript& transcript, std::size_t l) {
  BobOutput out;
  out.recovered = coding::ss_recover(rho_b, transcript.sketch, out.corrected_words);
  out.key = extract::extract(
      out.recovered, extract::ExtractorSeed::make(transcript.seed, out.recovered.size(), l));
  return out;
}

KeyResult run_exchange(const MeasurementTrace& alice, const MeasurementTrace& bob,
                       const ProtocolParams& params, std::uint64_t seed) {
  params.validate();
  if (alice.size() < params.n || bob.size() < params.n) {
    throw Error("traces too short: exchange needs " + std::to_string(params.n) + " samples");
  }
  if (!aligned(alice.prefix(params.n), bob.prefix(params.n))) {
    throw Error("traces are not aligned on sequence numbers");
  }
  const BitString rho_a = quantize_for_exchange(alice, params.n, params.m);
  const BitString rho_b = quantize_for_exchange(bob, params.n, params.m);

  KeyResult result;
  const AliceOutput sent = alice_send(rho_a, params.code, params.l, seed);
  result.alice_key = sent.key;
  result.transcript = sent.transcript;
  result.ledger = entropy_ledger(
      std::max(0.0, params.entropy_fit(static_cast<double>(params.n))), sent.transcript.sketch,
      params.lambda);
  result.certified = result.ledger.key_bits >= static_cast<long>(params.l);

  try {
    const BobOutput received = bob_receive(rho_b, sent.transcript, params.l);
    result.bob_key = received.key;
    result.corrected_words = received.corrected_words;
  } catch (const UncorrectableError& e) {
    result.success = false;
    result.reason = e.what();
    return result;
  }
  result.success = result.alice_key == result.bob_key;
  if (!result.success) result.reason = "key mismatch after reconciliation";
  return result;
}

GrowthReport measure_growth(const MeasurementTrace& alice, const MeasurementTrace& bob,
                            const MeasurementTrace& eve, const GrowthOptions& options) {
  if (options.step < 1 || options.n_min < 1 || options.n_min > options.n_max) {
    throw Error("growth: need 1 <= n_min <= n_max and step >= 1");
  }
  if (options.slices < 1) throw Error("growth: need at least one slice");
  if (!aligned(alice, bob) || !aligned(alice, eve)) {
    throw Error("growth: traces are not aligned on sequence numbers");
  }
  const std::size_t needed = options.slices * options.n_max;
  if (alice.size() < needed) {
    throw Error("growth: " + std::to_string(options.slices) + " slices of " +
                std::to_string(options.n_max) + " need " + std::to_string(needed) +
                " samples, got " + std::to_string(alice.size()));
  }
  GrowthReport report;
  const auto fitted = hmm::fit_hmm_from_traces(alice, eve, options.levels, options.smoothing);
  report.warnings = fitted.warnings;
  const quant::QuantizerConfig qc{options.m, false};

  std::vector<std::pair<double, double>> g_points, e_points;
  for (std::size_t n = options.n_min; n <= options.n_max; n += options.step) {
    std::vector<hmm::ObservationSequence> experiments;
    double errors = 0.0;
    for (std::size_t s = 0; s < options.slices; ++s) {
      const std::size_t off = s * options.n_max;
      const auto y = eve.window(off, n).levels();
      experiments.push_back(hmm::encode_observations(fitted.model, y));
      const auto a = quant::embed_trace(alice.window(off, n), qc);
      const auto b = quant::embed_trace(bob.window(off, n), qc);
      errors += static_cast<double>(quant::word_errors(a, b, 8));
    }
    const auto est = hmm::estimate_avg_conditional_min_entropy(fitted.model, experiments);
    GrowthPoint point;
    point.n = n;
    point.mean_entropy_bits = est.mean_bits;
    point.std_entropy_bits = est.std_bits;
    point.mean_word_errors = errors / static_cast<double>(options.slices);
    report.points.push_back(point);
    g_points.emplace_back(static_cast<double>(n), point.mean_entropy_bits);
    e_points.emplace_back(static_cast<double>(n), point.mean_word_errors);
  }
  if (g_points.size() < 2) throw Error("growth: need at least two sample sizes to fit");
  report.entropy_fit = hmm::fit_linear_growth(g_points);
  report.error_fit = hmm::fit_linear_growth(e_points);
  return report;
}

}  // namespace pke::protocol
