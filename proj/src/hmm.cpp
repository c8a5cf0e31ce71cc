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

#include "pke/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "pke/error.hpp"

namespace pke::hmm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log2(double p) { return p > 0.0 ? std::log2(p) : kNegInf; }

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void check_row(std::span<const double> row, const std::string& what,
               std::vector<std::string>& out) {
  double sum = 0.0;
  bool negative = false;
  bool above_one = false;
  for (double p : row) {
    if (!(p >= 0.0)) negative = true;
    if (p > 1.0) above_one = true;
    sum += p;
  }
  if (negative) out.push_back(what + ": negative probability");
  if (above_one) out.push_back(what + ": probability above 1");
  if (std::abs(sum - 1.0) > kStochasticTolerance) {
    out.push_back(what + " sums to " + fmt_double(sum));
  }
}

// log2-domain accumulator for sums of probabilities.
class Log2SumAccumulator {
 public:
  void add(double log2_value) {
    if (log2_value == kNegInf) return;
    if (log2_value > max_) {
      sum_ = sum_ * std::exp2(max_ - log2_value) + 1.0;
      max_ = log2_value;
    } else {
      sum_ += std::exp2(log2_value - max_);
    }
  }
  double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log2(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

struct LogTables {
  std::vector<double> pi;
  Matrix trans;
  Matrix emit;
};

LogTables log_tables(const HmmModel& model) {
  LogTables t{std::vector<double>(model.k()), Matrix(model.k(), model.k()),
              Matrix(model.k(), model.m())};
  for (std::size_t i = 0; i < model.k(); ++i) {
    t.pi[i] = safe_log2(model.pi[i]);
    for (std::size_t j = 0; j < model.k(); ++j)
      t.trans(i, j) = safe_log2(model.trans(i, j));
    for (std::size_t q = 0; q < model.m(); ++q)
      t.emit(i, q) = safe_log2(model.emit(i, q));
  }
  return t;
}

void check_obs(const HmmModel& model, const ObservationSequence& obs) {
  if (obs.symbols.empty()) throw Error("observation sequence must be non-empty");
  for (std::size_t t = 0; t < obs.size(); ++t) {
    if (obs.symbols[t] >= model.m()) {
      throw Error("observation symbol out of range at step " + std::to_string(t));
    }
  }
}

// One Viterbi step: next[j] = max_i(prev[i] + logA[i][j]) + logB[j][y].
void viterbi_step(const LogTables& lt, std::span<const double> prev,
                  std::size_t symbol, std::span<double> next,
                  std::size_t* backptr) {
  const std::size_t k = prev.size();
  for (std::size_t j = 0; j < k; ++j) {
    double best = kNegInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double v = prev[i] + lt.trans(i, j);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    next[j] = best + lt.emit(j, symbol);
    if (backptr != nullptr) backptr[j] = arg;
  }
}

std::size_t argmax_lowest(std::span<const double> v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[arg]) arg = i;
  }
  return arg;
}

std::pair<int, int> level_span(std::span<const int> levels) {
  const auto [lo, hi] = std::minmax_element(levels.begin(), levels.end());
  return {*lo, *hi};
}

}  // namespace

HmmModel HmmModel::from_tables(std::vector<double> pi,
                               const std::vector<std::vector<double>>& trans,
                               const std::vector<std::vector<double>>& emit) {
  HmmModel model;
  model.pi = std::move(pi);
  model.trans = Matrix::from_rows(trans);
  model.emit = Matrix::from_rows(emit);
  model.states.resize(model.pi.size());
  std::iota(model.states.begin(), model.states.end(), 0);
  model.symbols.resize(model.emit.cols());
  std::iota(model.symbols.begin(), model.symbols.end(), 0);
  return model;
}

std::vector<std::string> validate_model(const HmmModel& model) {
  std::vector<std::string> out;
  const std::size_t k = model.k();
  const std::size_t m = model.m();
  if (k == 0) out.push_back("no hidden states");
  if (m == 0) out.push_back("no observation symbols");
  if (model.pi.size() != k) {
    out.push_back("pi has length " + std::to_string(model.pi.size()) +
                  ", expected k = " + std::to_string(k));
  }
  if (model.trans.rows() != k || model.trans.cols() != k) {
    out.push_back("trans is " + std::to_string(model.trans.rows()) + "x" +
                  std::to_string(model.trans.cols()) + ", expected " +
                  std::to_string(k) + "x" + std::to_string(k));
  }
  if (model.emit.rows() != k || model.emit.cols() != m) {
    out.push_back("emit is " + std::to_string(model.emit.rows()) + "x" +
                  std::to_string(model.emit.cols()) + ", expected " +
                  std::to_string(k) + "x" + std::to_string(m));
  }
  if (!out.empty()) return out;

  check_row(model.pi, "pi", out);
  for (std::size_t i = 0; i < k; ++i) {
    check_row(model.trans.row(i), "trans row " + std::to_string(i), out);
    check_row(model.emit.row(i), "emit row " + std::to_string(i), out);
  }
  return out;
}

void require_valid(const HmmModel& model) {
  const auto violations = validate_model(model);
  if (violations.empty()) return;
  std::string msg = "invalid HMM:";
  for (const auto& v : violations) msg += " [" + v + "]";
  throw Error(msg);
}

ObservationSequence encode_observations(const HmmModel& model,
                                        std::span<const int> levels) {
  std::map<int, std::size_t> index;
  for (std::size_t q = 0; q < model.m(); ++q) index[model.symbols[q]] = q;
  ObservationSequence obs;
  obs.symbols.reserve(levels.size());
  for (std::size_t t = 0; t < levels.size(); ++t) {
    auto it = index.find(levels[t]);
    if (it == index.end()) {
      throw Error("level " + std::to_string(levels[t]) + " at index " +
                  std::to_string(t) + " is not a model symbol");
    }
    obs.symbols.push_back(it->second);
  }
  return obs;
}

ViterbiResult viterbi_max_joint(const HmmModel& model,
                                const ObservationSequence& obs) {
  check_obs(model, obs);
  const std::size_t k = model.k();
  const std::size_t n = obs.size();
  const LogTables lt = log_tables(model);

  std::vector<double> delta(k), next(k);
  std::vector<std::size_t> back(n * k, 0);
  for (std::size_t i = 0; i < k; ++i) delta[i] = lt.pi[i] + lt.emit(i, obs.symbols[0]);
  for (std::size_t t = 1; t < n; ++t) {
    viterbi_step(lt, delta, obs.symbols[t], next, &back[t * k]);
    delta.swap(next);
  }

  ViterbiResult result;
  std::size_t state = argmax_lowest(delta);
  result.log2_prob = delta[state];
  if (result.log2_prob == kNegInf) {
    throw ImpossibleObservationError("impossible observation sequence (P* = 0)");
  }
  result.path.states.resize(n);
  for (std::size_t t = n; t-- > 0;) {
    result.path.states[t] = state;
    if (t > 0) state = back[t * k + state];
  }
  return result;
}

double forward_likelihood(const HmmModel& model, const ObservationSequence& obs) {
  check_obs(model, obs);
  const std::size_t k = model.k();
  std::vector<double> alpha(k), next(k);
  double log2_prob = 0.0;

  auto normalize = [&](std::vector<double>& v) {
    const double c = std::accumulate(v.begin(), v.end(), 0.0);
    if (!(c > 0.0)) {
      throw ImpossibleObservationError("impossible observation sequence (P = 0)");
    }
    for (double& x : v) x /= c;
    log2_prob += std::log2(c);
  };

  for (std::size_t i = 0; i < k; ++i) alpha[i] = model.pi[i] * model.emit(i, obs.symbols[0]);
  normalize(alpha);
  for (std::size_t t = 1; t < obs.size(); ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      if (alpha[i] == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) next[j] += alpha[i] * model.trans(i, j);
    }
    for (std::size_t j = 0; j < k; ++j) next[j] *= model.emit(j, obs.symbols[t]);
    alpha.swap(next);
    normalize(alpha);
  }
  return log2_prob;
}

double conditional_min_entropy_given_obs(const HmmModel& model,
                                         const ObservationSequence& obs) {
  const double log_total = forward_likelihood(model, obs);
  const double log_best = viterbi_max_joint(model, obs).log2_prob;
  // P* <= P; clamp rounding noise.
  return std::max(0.0, log_total - log_best);
}

double exact_avg_conditional_min_entropy(const HmmModel& model, std::size_t n) {
  if (n == 0) throw Error("sequence length must be at least 1");
  const std::size_t k = model.k();
  const std::size_t m = model.m();
  double count = 1.0;
  for (std::size_t t = 0; t < n; ++t) {
    count *= static_cast<double>(m);
    if (count > kMaxEnumeration) {
      throw Error("enumeration too large: m^n = " + std::to_string(m) + "^" +
                  std::to_string(n) + " exceeds 1e6");
    }
  }
  const LogTables lt = log_tables(model);

  // Odometer over observation sequences; delta[t] holds the Viterbi vector
  // after step t for the current prefix, so only the changed suffix is
  // recomputed.
  std::vector<std::size_t> sym(n, 0);
  std::vector<double> delta(n * k);
  auto row = [&](std::size_t t) { return std::span<double>(&delta[t * k], k); };
  auto recompute_from = [&](std::size_t from) {
    for (std::size_t t = from; t < n; ++t) {
      if (t == 0) {
        for (std::size_t i = 0; i < k; ++i) delta[i] = lt.pi[i] + lt.emit(i, sym[0]);
      } else {
        viterbi_step(lt, row(t - 1), sym[t], row(t), nullptr);
      }
    }
  };

  Log2SumAccumulator total;
  recompute_from(0);
  while (true) {
    auto last = row(n - 1);
    total.add(*std::max_element(last.begin(), last.end()));
    std::size_t pos = n;
    while (pos > 0 && sym[pos - 1] + 1 == m) {
      sym[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
    ++sym[pos - 1];
    recompute_from(pos - 1);
  }
  return std::max(0.0, -total.value());
}

EntropyEstimate estimate_avg_conditional_min_entropy(
    const HmmModel& model, std::span<const ObservationSequence> experiments) {
  if (experiments.empty()) throw Error("at least one experiment is required");
  EntropyEstimate est;
  est.n_experiments = experiments.size();
  est.n_samples_per_experiment = experiments.front().size();
  est.per_experiment_bits.resize(experiments.size());
  for (std::size_t j = 0; j < experiments.size(); ++j) {
    try {
      est.per_experiment_bits[j] =
          conditional_min_entropy_given_obs(model, experiments[j]);
    } catch (const ImpossibleObservationError& e) {
      throw ImpossibleObservationError(
          "experiment " + std::to_string(j) + ": " + e.what(), j);
    }
    if (experiments[j].size() != est.n_samples_per_experiment) {
      est.n_samples_per_experiment = 0;  // mixed lengths
    }
  }
  const double n = static_cast<double>(experiments.size());
  est.mean_bits =
      std::accumulate(est.per_experiment_bits.begin(), est.per_experiment_bits.end(), 0.0) / n;
  if (experiments.size() > 1) {
    double ss = 0.0;
    for (double v : est.per_experiment_bits) ss += (v - est.mean_bits) * (v - est.mean_bits);
    est.std_bits = std::sqrt(ss / (n - 1.0));
  }
  return est;
}

FittedModel fit_hmm_from_traces(const MeasurementTrace& hidden,
                                const MeasurementTrace& observed,
                                std::size_t levels, double smoothing) {
  if (hidden.size() != observed.size()) {
    throw Error("unaligned traces: lengths " + std::to_string(hidden.size()) +
                " and " + std::to_string(observed.size()));
  }
  if (hidden.size() < 2) throw Error("traces must hold at least 2 samples");
  if (!aligned(hidden, observed)) {
    throw Error("unaligned traces: sequence numbers differ");
  }
  if (levels < 2) throw Error("levels must be at least 2");
  if (!(smoothing >= 0.0)) throw Error("smoothing must be non-negative");

  const auto x = hidden.levels();
  const auto y = observed.levels();
  const auto [x_lo, x_hi] = level_span(x);
  const auto [y_lo, y_hi] = level_span(y);
  if (static_cast<std::size_t>(x_hi - x_lo) + 1 > levels) {
    throw Error("hidden trace spans " + std::to_string(x_hi - x_lo + 1) +
                " levels, more than levels = " + std::to_string(levels));
  }
  if (static_cast<std::size_t>(y_hi - y_lo) + 1 > levels) {
    throw Error("observed trace spans " + std::to_string(y_hi - y_lo + 1) +
                " levels, more than levels = " + std::to_string(levels));
  }

  const std::size_t k = levels;
  const std::size_t m = levels;
  FittedModel fit;
  HmmModel& model = fit.model;
  model.states.resize(k);
  model.symbols.resize(m);
  std::iota(model.states.begin(), model.states.end(), x_lo);
  std::iota(model.symbols.begin(), model.symbols.end(), y_lo);

  std::vector<double> state_count(k, 0.0), pred_count(k, 0.0);
  Matrix trans_count(k, k), emit_count(k, m);
  const std::size_t n = x.size();
  for (std::size_t t = 0; t < n; ++t) {
    const auto s = static_cast<std::size_t>(x[t] - x_lo);
    const auto o = static_cast<std::size_t>(y[t] - y_lo);
    state_count[s] += 1.0;
    emit_count(s, o) += 1.0;
    if (t + 1 < n) {
      pred_count[s] += 1.0;
      trans_count(s, static_cast<std::size_t>(x[t + 1] - x_lo)) += 1.0;
    }
  }

  model.pi.resize(k);
  for (std::size_t i = 0; i < k; ++i) model.pi[i] = state_count[i] / static_cast<double>(n);

  model.trans = Matrix(k, k);
  model.emit = Matrix(k, m);
  for (std::size_t i = 0; i < k; ++i) {
    const double tden = pred_count[i] + static_cast<double>(k) * smoothing;
    if (tden > 0.0) {
      for (std::size_t j = 0; j < k; ++j)
        model.trans(i, j) = (trans_count(i, j) + smoothing) / tden;
    } else {
      std::fill(model.trans.row(i).begin(), model.trans.row(i).end(),
                1.0 / static_cast<double>(k));
      fit.warnings.push_back("state " + std::to_string(model.states[i]) +
                             " never observed as predecessor; uniform transition row");
    }
    const double eden = state_count[i] + static_cast<double>(m) * smoothing;
    if (eden > 0.0) {
      for (std::size_t q = 0; q < m; ++q)
        model.emit(i, q) = (emit_count(i, q) + smoothing) / eden;
    } else {
      std::fill(model.emit.row(i).begin(), model.emit.row(i).end(),
                1.0 / static_cast<double>(m));
      fit.warnings.push_back("state " + std::to_string(model.states[i]) +
                             " never visited; uniform emission row");
    }
  }
  return fit;
}

LinearFit fit_linear_growth(std::span<const std::pair<double, double>> points) {
  std::vector<double> xs;
  for (const auto& p : points) xs.push_back(p.first);
  std::sort(xs.begin(), xs.end());
  if (std::unique(xs.begin(), xs.end()) - xs.begin() < 2) {
    throw Error("least squares needs at least 2 distinct x values");
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& [x, y] : points) {
    const double r = y - fit(x);
    fit.residual_sum_squares += r * r;
  }
  return fit;
}

}  // namespace pke::hmm
