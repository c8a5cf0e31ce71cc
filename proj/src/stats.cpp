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

#include "pke/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "pke/error.hpp"
#include "pke/rng.hpp"

namespace pke::stats {

namespace {

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

std::vector<std::size_t> iota_vector(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

// `count` distinct anchors from [lo, lo + span), by partial Fisher-Yates.
std::vector<std::size_t> distinct_anchors(std::size_t lo, std::size_t span, std::size_t count,
                                          Rng& rng) {
  auto all = iota_vector(span);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(span - i));
    std::swap(all[i], all[j]);
  }
  all.resize(count);
  for (auto& a : all) a += lo;
  return all;
}

KsReport ks_report(double d, std::size_t nx, std::size_t ny, double alpha) {
  const double ne = static_cast<double>(nx) * static_cast<double>(ny) /
                    static_cast<double>(nx + ny);
  KsReport report;
  report.statistic = d;
  report.p_value = std::clamp(kolmogorov_survival(std::sqrt(ne) * d), 0.0, 1.0);
  report.reject = report.p_value < alpha;
  return report;
}

void check_ks_sizes(std::size_t nx, std::size_t ny) {
  if (nx < kMinKsSample || ny < kMinKsSample) {
    throw Error("K-S test needs at least " + std::to_string(kMinKsSample) +
                " samples per side, got " + std::to_string(nx) + " and " + std::to_string(ny));
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
}

}  // namespace

PearsonResult pearson_significance(std::span<const double> x, std::span<const double> y,
                                   double alpha) {
  check_alpha(alpha);
  if (x.size() != y.size()) throw Error("pearson: sequences differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw Error("pearson: need at least 3 pairs");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw Error("pearson: zero-variance input");
  PearsonResult result;
  result.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double one_minus = 1.0 - result.r * result.r;
  if (one_minus <= 0.0) {
    result.p_value = 0.0;
  } else {
    const double dof = static_cast<double>(n - 2);
    const double t = std::abs(result.r) * std::sqrt(dof / one_minus);
    const boost::math::students_t_distribution<double> dist(dof);
    result.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
  }
  result.significant = result.p_value < alpha;
  return result;
}

std::size_t CorrelationReport::significant_nonzero() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < lags.size(); ++i)
    if (lags[i] != 0 && significant[i]) ++count;
  return count;
}

std::size_t CorrelationReport::nonzero_lags() const {
  return static_cast<std::size_t>(std::count_if(lags.begin(), lags.end(),
                                                [](int lag) { return lag != 0; }));
}

CorrelationReport lag_correlation_profile(const MeasurementTrace& trace, std::size_t max_lag,
                                          std::size_t rows, double alpha, std::uint64_t seed) {
  check_alpha(alpha);
  if (rows < 3) throw Error("lag profile: need at least 3 rows");
  if (trace.size() < max_lag + rows) {
    throw Error("trace too short: " + std::to_string(trace.size()) + " samples for max lag " +
                std::to_string(max_lag) + " and " + std::to_string(rows) + " rows");
  }
  const auto x = trace.levels();
  Rng rng(seed);
  const auto anchors = distinct_anchors(max_lag, trace.size() - max_lag, rows, rng);

  std::vector<double> col0(rows), colk(rows);
  for (std::size_t r = 0; r < rows; ++r) col0[r] = x[anchors[r]];
  CorrelationReport report;
  report.alpha = alpha;
  for (std::size_t k = 0; k <= max_lag; ++k) {
    for (std::size_t r = 0; r < rows; ++r) colk[r] = x[anchors[r] - k];
    const auto p = pearson_significance(col0, colk, alpha);
    report.lags.push_back(static_cast<int>(k));
    report.r.push_back(p.r);
    report.significant.push_back(p.significant);
  }
  return report;
}

CorrelationReport cross_lag_profile(const MeasurementTrace& x, const MeasurementTrace& y,
                                    std::size_t max_lag, std::size_t rows, double alpha,
                                    std::uint64_t seed) {
  check_alpha(alpha);
  if (!aligned(x, y)) throw Error("cross-lag profile: traces are not aligned");
  if (rows < 3) throw Error("cross-lag profile: need at least 3 rows");
  if (x.size() < 2 * max_lag + rows) {
    throw Error("trace too short: " + std::to_string(x.size()) + " samples for max lag " +
                std::to_string(max_lag) + " and " + std::to_string(rows) + " rows");
  }
  const auto xv = x.levels();
  const auto yv = y.levels();
  Rng rng(seed);
  const auto anchors = distinct_anchors(max_lag, x.size() - 2 * max_lag, rows, rng);

  std::vector<double> col0(rows), colk(rows);
  for (std::size_t r = 0; r < rows; ++r) col0[r] = yv[anchors[r]];
  CorrelationReport report;
  report.alpha = alpha;
  const auto lag = static_cast<long>(max_lag);
  for (long k = -lag; k <= lag; ++k) {
    for (std::size_t r = 0; r < rows; ++r)
      colk[r] = xv[static_cast<std::size_t>(static_cast<long>(anchors[r]) - k)];
    const auto p = pearson_significance(col0, colk, alpha);
    report.lags.push_back(static_cast<int>(k));
    report.r.push_back(p.r);
    report.significant.push_back(p.significant);
  }
  return report;
}

double kolmogorov_survival(double z) {
  if (!(z > 0.0)) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (z < 1.18) {
    // Pr[K <= z] = sqrt(2 pi) / z * sum exp(-(2j - 1)^2 pi^2 / (8 z^2))
    const double w = -pi * pi / (8.0 * z * z);
    double sum = 0.0;
    for (int j = 1; j <= 8; ++j) {
      const double odd = 2.0 * j - 1.0;
      sum += std::exp(odd * odd * w);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / z * sum, 0.0, 1.0);
  }
  // Pr[K > z] = 2 sum (-1)^(j-1) exp(-2 j^2 z^2)
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * z * z);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsReport ks_two_sample(std::span<const double> x, std::span<const double> y, double alpha) {
  check_alpha(alpha);
  check_ks_sizes(x.size(), y.size());
  std::vector<double> a(x.begin(), x.end()), b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  // Step both ECDFs past every copy of the next support point, then compare.
  while (i < a.size() || j < b.size()) {
    double v;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      v = a[i];
    } else {
      v = b[j];
    }
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return ks_report(d, a.size(), b.size(), alpha);
}

KsReport ks_two_sample_levels(std::span<const int> x, std::span<const int> y, double alpha) {
  check_alpha(alpha);
  check_ks_sizes(x.size(), y.size());
  std::map<int, std::pair<std::size_t, std::size_t>> hist;
  for (int v : x) ++hist[v].first;
  for (int v : y) ++hist[v].second;
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t cx = 0, cy = 0;
  double d = 0.0;
  for (const auto& [level, counts] : hist) {
    cx += counts.first;
    cy += counts.second;
    d = std::max(d, std::abs(static_cast<double>(cx) / nx - static_cast<double>(cy) / ny));
  }
  return ks_report(d, x.size(), y.size(), alpha);
}

MeasurementTrace downsample(const MeasurementTrace& trace, std::size_t factor) {
  if (factor < 1) throw Error("downsample factor must be at least 1");
  MeasurementTrace out;
  out.node_id = trace.node_id;
  out.meta = trace.meta;
  out.meta.delay_ms = trace.meta.delay_ms * static_cast<double>(factor);
  for (std::size_t i = 0; i < trace.size(); i += factor) out.samples.push_back(trace.samples[i]);
  return out;
}

RejectionRate identical_distribution_test(std::span<const int> x, std::size_t trials,
                                          double alpha, std::uint64_t seed) {
  check_alpha(alpha);
  RejectionRate rate;
  const std::size_t half = x.size() / 2;
  if (half < kMinKsSample) {
    rate.note = "identical distribution: " + std::to_string(x.size()) + " samples is too few";
    return rate;
  }
  Rng rng(seed);
  auto idx = iota_vector(x.size());
  std::vector<int> a(half), b(half);
  for (std::size_t t = 0; t < trials; ++t) {
    shuffle(idx, rng);
    for (std::size_t i = 0; i < half; ++i) {
      a[i] = x[idx[i]];
      b[i] = x[idx[half + i]];
    }
    ++rate.tests;
    if (ks_two_sample_levels(a, b, alpha).reject) ++rate.rejections;
  }
  rate.ran = rate.tests > 0;
  return rate;
}

RejectionRate stationary_transition_test(std::span<const int> x, std::size_t trials,
                                         double alpha, std::uint64_t seed) {
  check_alpha(alpha);
  RejectionRate rate;
  const std::size_t n = x.size();
  if (n < 4 * kMinKsSample) {
    rate.note = "stationary transition: " + std::to_string(n) + " samples is too few";
    return rate;
  }
  Rng rng(seed);
  // Each trial cuts the trace at a random point in its middle half and, for
  // every predecessor level seen often enough on both sides, compares the
  // successor distributions before and after the cut.
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t cut = n / 4 + static_cast<std::size_t>(rng.below(n / 2));
    std::map<int, std::pair<std::vector<int>, std::vector<int>>> successors;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      auto& slot = successors[x[i]];
      (i < cut ? slot.first : slot.second).push_back(x[i + 1]);
    }
    for (const auto& [level, groups] : successors) {
      if (groups.first.size() < kMinKsSample || groups.second.size() < kMinKsSample) continue;
      ++rate.tests;
      if (ks_two_sample_levels(groups.first, groups.second, alpha).reject) ++rate.rejections;
    }
  }
  rate.ran = rate.tests > 0;
  if (!rate.ran) rate.note = "stationary transition: no level has enough successors";
  return rate;
}

RejectionRate stationary_observation_test(std::span<const int> x, std::span<const int> y,
                                          std::size_t trials, double alpha,
                                          std::uint64_t seed) {
  check_alpha(alpha);
  if (x.size() != y.size()) throw Error("stationary observation: traces differ in length");
  RejectionRate rate;
  const std::size_t half = x.size() / 2;
  if (half < kMinKsSample) {
    rate.note = "stationary observation: " + std::to_string(x.size()) + " samples is too few";
    return rate;
  }
  Rng rng(seed);
  auto idx = iota_vector(x.size());
  for (std::size_t t = 0; t < trials; ++t) {
    shuffle(idx, rng);
    std::map<int, std::pair<std::vector<int>, std::vector<int>>> emissions;
    for (std::size_t i = 0; i < 2 * half; ++i) {
      auto& slot = emissions[x[idx[i]]];
      (i < half ? slot.first : slot.second).push_back(y[idx[i]]);
    }
    for (const auto& [level, groups] : emissions) {
      if (groups.first.size() < kMinKsSample || groups.second.size() < kMinKsSample) continue;
      ++rate.tests;
      if (ks_two_sample_levels(groups.first, groups.second, alpha).reject) ++rate.rejections;
    }
  }
  rate.ran = rate.tests > 0;
  if (!rate.ran) rate.note = "stationary observation: no level has enough samples";
  return rate;
}

AssumptionReport validate_assumptions(const MeasurementTrace& alice, const MeasurementTrace& eve,
                                      const AssumptionConfig& config, std::uint64_t seed) {
  check_alpha(config.alpha);
  if (!aligned(alice, eve)) throw Error("validate assumptions: traces are not aligned");
  if (config.slice_len < 1) throw Error("validate assumptions: slice length must be positive");
  if (alice.size() < 20 * config.slice_len) {
    throw Error("validate assumptions: need at least " + std::to_string(20 * config.slice_len) +
                " samples, got " + std::to_string(alice.size()));
  }
  AssumptionReport report;
  const auto x = alice.levels();
  const auto y = eve.levels();

  // Rows are capped by the distinct anchors the trace offers.
  const std::size_t span = alice.size() > 2 * config.max_lag ? alice.size() - 2 * config.max_lag : 0;
  const std::size_t rows = std::min(config.rows, span);
  if (rows < config.rows) {
    report.notes.push_back("lag profiles use " + std::to_string(rows) + " rows, trace too short for " +
                           std::to_string(config.rows));
  }
  try {
    report.markov_lag_profile =
        lag_correlation_profile(alice, config.max_lag, rows, config.alpha, seed);
  } catch (const Error& e) {
    report.notes.push_back(std::string("lag profile: ") + e.what());
  }
  try {
    report.observation_lag_profile =
        cross_lag_profile(alice, eve, config.max_lag, rows, config.alpha, seed + 1);
  } catch (const Error& e) {
    report.notes.push_back(std::string("observation lag profile: ") + e.what());
  }

  report.identical_distribution =
      identical_distribution_test(x, config.trials, config.alpha, seed + 2);
  report.stationary_transition =
      stationary_transition_test(x, config.trials, config.alpha, seed + 3);
  report.stationary_observation =
      stationary_observation_test(x, y, config.trials, config.alpha, seed + 4);
  for (const auto* sub : {&report.identical_distribution, &report.stationary_transition,
                          &report.stationary_observation}) {
    if (!sub->note.empty()) report.notes.push_back(sub->note);
  }

  try {
    const auto fitted = hmm::fit_hmm_from_traces(alice, eve, config.levels, config.smoothing);
    for (const auto& w : fitted.warnings) report.notes.push_back("entropy fit: " + w);
    std::vector<hmm::ObservationSequence> slices;
    for (std::size_t off = 0; off + config.slice_len <= eve.size(); off += config.slice_len) {
      const auto window = eve.window(off, config.slice_len).levels();
      slices.push_back(hmm::encode_observations(fitted.model, window));
    }
    report.stable_entropy = hmm::estimate_avg_conditional_min_entropy(fitted.model, slices);
    const double mean = report.stable_entropy->mean_bits;
    report.stable_entropy_ratio =
        mean > 0.0 ? report.stable_entropy->std_bits / mean : std::numeric_limits<double>::infinity();
    report.stable_entropy_ok = report.stable_entropy_ratio <= config.stable_threshold;
  } catch (const Error& e) {
    report.notes.push_back(std::string("stable entropy: ") + e.what());
  }
  return report;
}

}  // namespace pke::stats
