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
#include <string>
#include <vector>

#include "pke/bitstring.hpp"
#include "pke/hmm.hpp"
#include "pke/secure_sketch.hpp"
#include "pke/trace.hpp"

namespace pke::protocol {

// Planner constants: the code corrects 6/5 of the
// expected word errors, each corrected word costs two 8-bit syndrome symbols,
// and the tail bound on exceeding that budget is exp(-e(n) / 100).
inline constexpr double kErrorSafetyFactor = 6.0 / 5.0;
inline constexpr double kSketchBitsPerError = 16.0;
inline constexpr double kChernoffDenominator = 100.0;

// Reference entropy (g) and word-error (e) growth lines.
inline constexpr hmm::LinearFit kReferenceEntropyFit{0.985, 1.467, 0.0};
inline constexpr hmm::LinearFit kReferenceErrorFit{0.043, 0.048, 0.0};

struct ProtocolParams {
  std::size_t n = 0;   // samples
  int m = 8;           // quantizer magnitude
  coding::RsCode code;
  std::size_t l = 128;  // key bits
  double lambda = 80;   // epsilon_u = 2^-lambda
  double c = 1;         // epsilon_c = e^-c
  hmm::LinearFit entropy_fit = kReferenceEntropyFit;
  hmm::LinearFit error_fit = kReferenceErrorFit;

  void validate() const;
};

struct EntropyLedger {
  double initial_bits = 0.0;
  std::size_t sketch_loss_bits = 0;
  double extractor_loss_bits = 0.0;  // 2 lambda - 2
  double residual_bits = 0.0;        // initial - sketch loss
  long key_bits = 0;
};

EntropyLedger entropy_ledger(double initial_bits, std::size_t sketch_bits, double lambda);
EntropyLedger entropy_ledger(double initial_bits, const coding::Sketch& sketch, double lambda);

struct CorrectnessBound {
  double probability = 1.0;  // exp(-e(n) / 100)
  bool vacuous = false;      // e(n) <= 0: the bound says nothing
};

CorrectnessBound correctness_bound(std::size_t n, const hmm::LinearFit& error_fit);

struct PlanReport {
  ProtocolParams params;

  // Smallest n with g(n) - 16 * (6/5) * e(n) >= l + 2 lambda - 2.
  std::size_t entropy_bound_n = 0;
  // Smallest n with e(n) / 100 >= c.
  std::size_t correctness_bound_n = 0;
  std::size_t first_principles_n = 0;

  // Closed form max(12.54 lambda + 6.27 l - 3.24, 2326 c - 1).
  double closed_form_entropy_term = 0.0;
  double closed_form_correctness_term = 0.0;
  std::size_t closed_form_n = 0;

  // Entropy condition g(n) - 19.2 e(n) = slope * n + intercept, against the
  // reference statement 159.4 n + 549.4 (per mille).
  double condition_slope = 0.0;
  double condition_intercept = 0.0;
  double reference_condition_slope = 0.1594;
  double reference_condition_intercept = 0.5494;
  bool constant_discrepancy = false;

  // Code allocation at first_principles_n.
  std::size_t words = 0;
  std::size_t blocks = 0;
  double error_budget_words = 0.0;  // (6/5) e(n)
  std::size_t sketch_bits = 0;
  double predicted_initial_bits = 0.0;
  EntropyLedger predicted_ledger;
  CorrectnessBound correctness;
  // Product over blocks of Pr[Binomial(block words, e(n)/words) <= t].
  double predicted_success_probability = 0.0;

  std::vector<std::string> warnings;
};

PlanReport plan_parameters(std::size_t l, double lambda, double c,
                           const hmm::LinearFit& entropy_fit,
                           const hmm::LinearFit& error_fit, int m = 8);

// Quantized and byte-padded string of the first n samples.
BitString quantize_for_exchange(const MeasurementTrace& trace, std::size_t n, int m);

struct Transcript {
  coding::Sketch sketch;
  BitString seed;
};

// Transcript file: sketch wire format followed by the seed as `len:hex`.
std::vector<std::uint8_t> serialize_transcript(const Transcript& transcript);
Transcript parse_transcript(std::span<const std::uint8_t> bytes);

struct AliceOutput {
  Transcript transcript;
  BitString key;
};

// Alice's side: sketch rho_A, draw the extractor seed, extract l bits.
AliceOutput alice_send(const BitString& rho_a, const coding::RsCode& code, std::size_t l,
                       std::uint64_t seed);

struct BobOutput {
  BitString key;
  BitString recovered;
  std::size_t corrected_words = 0;
};

// Bob's side sees only his own string and the public transcript. Throws
// UncorrectableError when reconciliation fails.
BobOutput bob_receive(const BitString& rho_b, const Transcript& transcript, std::size_t l);

struct KeyResult {
  BitString alice_key;
  BitString bob_key;
  bool success = false;
  std::string reason;
  bool certified = false;  // ledger.key_bits >= l
  std::size_t corrected_words = 0;
  EntropyLedger ledger;
  Transcript transcript;
};

KeyResult run_exchange(const MeasurementTrace& alice, const MeasurementTrace& bob,
                       const ProtocolParams& params, std::uint64_t seed);

// Growth of Eve's uncertainty and of Alice/Bob word errors with the number of
// samples: the first n samples of each of `slices` disjoint n_max windows.
struct GrowthOptions {
  std::size_t levels = 9;
  std::size_t slices = 40;
  std::size_t n_min = 10;
  std::size_t n_max = 200;
  std::size_t step = 10;
  int m = 8;
  double smoothing = 1.0;
};

struct GrowthPoint {
  std::size_t n = 0;
  double mean_entropy_bits = 0.0;
  double std_entropy_bits = 0.0;
  double mean_word_errors = 0.0;
};

struct GrowthReport {
  std::vector<GrowthPoint> points;
  hmm::LinearFit entropy_fit;  // g(n)
  hmm::LinearFit error_fit;    // e(n)
  std::vector<std::string> warnings;
};

// The entropy model is fitted on the whole of alice/eve.
GrowthReport measure_growth(const MeasurementTrace& alice, const MeasurementTrace& bob,
                            const MeasurementTrace& eve, const GrowthOptions& options = {});

}  // namespace pke::protocol
