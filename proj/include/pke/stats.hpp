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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pke/hmm.hpp"
#include "pke/trace.hpp"

namespace pke::stats {

inline constexpr double kDefaultAlpha = 0.05;
// Smallest sample accepted by the asymptotic K-S p-value.
inline constexpr std::size_t kMinKsSample = 8;

struct PearsonResult {
  double r = 0.0;
  double p_value = 1.0;  // two-sided, Student-t with n - 2 dof
  bool significant = false;
};

PearsonResult pearson_significance(std::span<const double> x, std::span<const double> y,
                                   double alpha = kDefaultAlpha);

struct CorrelationReport {
  std::vector<int> lags;
  std::vector<double> r;
  std::vector<bool> significant;
  double alpha = kDefaultAlpha;

  // Significant entries among the nonzero lags.
  std::size_t significant_nonzero() const;
  std::size_t nonzero_lags() const;
};

// Correlation of X_i with X_{i-k}, k = 0..max_lag, over `rows` distinct random
// anchors i in [max_lag, size). Needs size >= max_lag + rows.
CorrelationReport lag_correlation_profile(const MeasurementTrace& trace,
                                          std::size_t max_lag = 500,
                                          std::size_t rows = 10000,
                                          double alpha = kDefaultAlpha,
                                          std::uint64_t seed = 1);

// Correlation of Y_i with X_{i-k}, k = -max_lag..max_lag, on aligned traces.
// Needs size >= 2 max_lag + rows.
CorrelationReport cross_lag_profile(const MeasurementTrace& x, const MeasurementTrace& y,
                                    std::size_t max_lag = 500, std::size_t rows = 10000,
                                    double alpha = kDefaultAlpha, std::uint64_t seed = 1);

struct KsReport {
  double statistic = 0.0;  // sup |ECDF_x - ECDF_y|
  double p_value = 1.0;
  bool reject = false;
};

// Survival function of the Kolmogorov distribution, Pr[K > z].
double kolmogorov_survival(double z);

KsReport ks_two_sample(std::span<const double> x, std::span<const double> y,
                       double alpha = kDefaultAlpha);

// Same test on integer levels through their histograms.
KsReport ks_two_sample_levels(std::span<const int> x, std::span<const int> y,
                              double alpha = kDefaultAlpha);

// Every factor-th sample starting at index 0.
MeasurementTrace downsample(const MeasurementTrace& trace, std::size_t factor);

struct AssumptionConfig {
  double alpha = kDefaultAlpha;
  std::size_t trials = 1000;
  std::size_t slice_len = 100;
  std::size_t max_lag = 50;
  std::size_t rows = 2000;
  std::size_t levels = 9;  // hidden/observed levels for the entropy fit
  double smoothing = 1.0;
  double stable_threshold = 0.25;  // std / mean of per-slice entropy
};

// Outcome of one repeated K-S sub-test.
struct RejectionRate {
  bool ran = false;
  std::size_t tests = 0;
  std::size_t rejections = 0;
  std::string note;

  double rate() const {
    return tests == 0 ? 0.0 : static_cast<double>(rejections) / static_cast<double>(tests);
  }
};

struct AssumptionReport {
  std::optional<CorrelationReport> markov_lag_profile;
  std::optional<CorrelationReport> observation_lag_profile;  // Eve vs Alice
  RejectionRate identical_distribution;
  RejectionRate stationary_transition;
  RejectionRate stationary_observation;
  std::optional<hmm::EntropyEstimate> stable_entropy;
  double stable_entropy_ratio = 0.0;  // std / mean
  bool stable_entropy_ok = false;
  std::vector<std::string> notes;
};

AssumptionReport validate_assumptions(const MeasurementTrace& alice,
                                      const MeasurementTrace& eve,
                                      const AssumptionConfig& config = {},
                                      std::uint64_t seed = 1);

// Sub-tests of validate_assumptions, exposed for direct use.
RejectionRate identical_distribution_test(std::span<const int> x, std::size_t trials,
                                          double alpha, std::uint64_t seed);
RejectionRate stationary_transition_test(std::span<const int> x, std::size_t trials,
                                         double alpha, std::uint64_t seed);
RejectionRate stationary_observation_test(std::span<const int> x, std::span<const int> y,
                                          std::size_t trials, double alpha,
                                          std::uint64_t seed);

}  // namespace pke::stats
