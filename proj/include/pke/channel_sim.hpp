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
#include <map>
#include <vector>

#include "pke/error.hpp"
#include "pke/hmm.hpp"
#include "pke/rng.hpp"
#include "pke/trace.hpp"

namespace pke::sim {

// Generative channel: Alice's levels follow the model's Markov chain, Eve
// observes through the emission matrix, and Bob sees Alice's level plus a
// discrete offset (clamped to the state range).
struct ChannelConfig {
  hmm::HmmModel model;
  std::map<int, double> bob_error{{0, 1.0}};  // offset -> probability
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

void validate_config(const ChannelConfig& config);

struct SimulatedRun {
  MeasurementTrace alice;
  MeasurementTrace bob;
  MeasurementTrace eve;
  std::uint64_t seed = 0;
};

// Deterministic given config.seed.
SimulatedRun simulate_run(const ChannelConfig& config);

struct HmmDraw {
  hmm::StatePath path;
  hmm::ObservationSequence obs;
};

// Draws a hidden path and its observations from the model.
HmmDraw sample_hmm(const hmm::HmmModel& model, std::size_t n, Rng& rng);

// Parametric family searched by calibration. Transitions mix a uniform
// kernel with a symmetric nearest-neighbour kernel; emissions are banded.
struct ChannelFamily {
  int min_level = -8;
  int max_level = 0;
  double coupling = 0.005;    // weight of the neighbour kernel
  double stay = 0.5;          // neighbour kernel self-transition probability
  double eve_accuracy = 1.0;  // probability that Eve reads the exact level
  double bob_flip = 0.0;      // probability that Bob is off by one level

  std::size_t levels() const { return static_cast<std::size_t>(max_level - min_level + 1); }
};

hmm::HmmModel family_model(const ChannelFamily& family);
ChannelConfig family_config(const ChannelFamily& family, std::size_t n, std::uint64_t seed);

struct ChannelRates {
  double entropy_bits_per_sample = 0.0;  // sampled estimator, true model
  double word_errors_per_sample = 0.0;   // Alice/Bob 8-bit word mismatches
  double entropy_rate = 0.0;             // per quantized bit
  double word_error_rate = 0.0;          // word errors per quantized bit
};

// Simulates config and measures the rates over `slice`-sample experiments.
ChannelRates measure_rates(const ChannelConfig& config, std::size_t slice = 100,
                           int quantizer_magnitude = 8);

class CalibrationError : public Error {
 public:
  using Error::Error;
};

struct CalibrationOptions {
  ChannelFamily base;
  std::size_t samples = 40000;
  std::size_t slice = 100;
  std::uint64_t seed = 1;
  double tolerance = 0.10;  // relative
};

struct CalibrationResult {
  ChannelFamily family;
  ChannelConfig config;  // n = options.samples, seed = options.seed
  double target_entropy_rate = 0.0;
  double target_word_error_rate = 0.0;
  ChannelRates achieved;
};

// Searches eve_accuracy and bob_flip so that the simulated entropy rate and
// word error rate (both per quantized bit) match the targets.
CalibrationResult calibrate_to_rates(double target_entropy_rate,
                                           double target_word_error_rate,
                                           const CalibrationOptions& options = {});

}  // namespace pke::sim
