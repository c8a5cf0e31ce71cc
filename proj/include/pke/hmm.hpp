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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pke/matrix.hpp"
#include "pke/trace.hpp"

namespace pke::hmm {

// Discrete hidden Markov model. Hidden states are signal levels at the
// legitimate node; symbols are signal levels at the eavesdropper.
struct HmmModel {
  std::vector<int> states;   // level label of each hidden state
  std::vector<int> symbols;  // level label of each observation symbol
  std::vector<double> pi;    // initial distribution, length k
  Matrix trans;              // k x k, row-stochastic
  Matrix emit;               // k x m, row-stochastic

  std::size_t k() const { return states.size(); }
  std::size_t m() const { return symbols.size(); }

  // Labels default to 0..k-1 and 0..m-1.
  static HmmModel from_tables(std::vector<double> pi,
                              const std::vector<std::vector<double>>& trans,
                              const std::vector<std::vector<double>>& emit);

  friend bool operator==(const HmmModel&, const HmmModel&) = default;
};

struct ObservationSequence {
  std::vector<std::size_t> symbols;
  std::size_t size() const { return symbols.size(); }
};

struct StatePath {
  std::vector<std::size_t> states;
  std::size_t size() const { return states.size(); }
  friend bool operator==(const StatePath&, const StatePath&) = default;
};

struct ViterbiResult {
  double log2_prob = 0.0;  // log2 of max_x Pr[X = x, Y = obs]
  StatePath path;
};

struct EntropyEstimate {
  double mean_bits = 0.0;
  double std_bits = 0.0;  // sample standard deviation
  std::vector<double> per_experiment_bits;
  std::size_t n_samples_per_experiment = 0;
  std::size_t n_experiments = 0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_sum_squares = 0.0;

  double operator()(double x) const { return slope * x + intercept; }
};

struct FittedModel {
  HmmModel model;
  std::vector<std::string> warnings;
};

// Row sums are checked to this tolerance.
inline constexpr double kStochasticTolerance = 1e-9;

// Every invariant violation, or an empty list when the model is well formed.
std::vector<std::string> validate_model(const HmmModel& model);

// Throws pke::Error listing the violations of an invalid model.
void require_valid(const HmmModel& model);

// Maps level labels to symbol indices; unknown labels are an error.
ObservationSequence encode_observations(const HmmModel& model,
                                        std::span<const int> levels);

// Highest joint probability of a state path with `obs`, and one maximizing
// path (lowest state index wins ties). Runs in the log domain. Throws
// ImpossibleObservationError when every path has probability zero.
ViterbiResult viterbi_max_joint(const HmmModel& model,
                                const ObservationSequence& obs);

// log2 Pr[Y = obs] by the scaled forward recursion.
double forward_likelihood(const HmmModel& model, const ObservationSequence& obs);

// -log2(P* / P): min-entropy of the hidden path given this observation.
double conditional_min_entropy_given_obs(const HmmModel& model,
                                         const ObservationSequence& obs);

// Enumeration guard for exact_avg_conditional_min_entropy.
inline constexpr double kMaxEnumeration = 1e6;

// -log2 sum_y max_x Pr[X = x, Y = y] over all m^n observation sequences.
double exact_avg_conditional_min_entropy(const HmmModel& model, std::size_t n);

// Sampled estimator: the per-experiment conditional min-entropies and their
// mean and spread.
EntropyEstimate estimate_avg_conditional_min_entropy(
    const HmmModel& model, std::span<const ObservationSequence> experiments);

// Counting estimator for pi, A and B from aligned hidden/observed traces.
// States span `levels` consecutive labels starting at the smallest hidden
// level; symbols likewise from the observed trace.
FittedModel fit_hmm_from_traces(const MeasurementTrace& hidden,
                                const MeasurementTrace& observed,
                                std::size_t levels, double smoothing = 0.0);

// Ordinary least squares over (x, y) points.
LinearFit fit_linear_growth(std::span<const std::pair<double, double>> points);

}  // namespace pke::hmm
