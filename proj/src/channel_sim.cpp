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

#include "pke/channel_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pke/quantizer.hpp"

namespace pke::sim {

void validate_config(const ChannelConfig& config) {
  hmm::require_valid(config.model);
  if (config.n < 1) throw Error("channel config: n must be at least 1");
  double sum = 0.0;
  for (const auto& [offset, p] : config.bob_error) {
    if (!(p >= 0.0)) throw Error("channel config: negative bob_error probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > hmm::kStochasticTolerance) {
    throw Error("channel config: bob_error sums to " + std::to_string(sum));
  }
}

HmmDraw sample_hmm(const hmm::HmmModel& model, std::size_t n, Rng& rng) {
  HmmDraw draw;
  draw.path.states.resize(n);
  draw.obs.symbols.resize(n);
  std::size_t state = 0;
  for (std::size_t i = 0; i < n; ++i) {
    state = i == 0 ? rng.categorical(model.pi) : rng.categorical(model.trans.row(state));
    draw.path.states[i] = state;
    draw.obs.symbols[i] = rng.categorical(model.emit.row(state));
  }
  return draw;
}

SimulatedRun simulate_run(const ChannelConfig& config) {
  validate_config(config);
  const auto& model = config.model;
  const auto [lo, hi] = std::minmax_element(model.states.begin(), model.states.end());

  std::vector<int> offsets;
  std::vector<double> offset_probs;
  for (const auto& [offset, p] : config.bob_error) {
    offsets.push_back(offset);
    offset_probs.push_back(p);
  }

  Rng rng(config.seed);
  std::vector<int> alice(config.n), bob(config.n), eve(config.n);
  std::size_t state = 0;
  for (std::size_t i = 0; i < config.n; ++i) {
    // Fixed draw order per sample: state, observation, Bob offset.
    state = i == 0 ? rng.categorical(model.pi) : rng.categorical(model.trans.row(state));
    const std::size_t symbol = rng.categorical(model.emit.row(state));
    const int offset = offsets[rng.categorical(offset_probs)];
    alice[i] = model.states[state];
    eve[i] = model.symbols[symbol];
    bob[i] = std::clamp(alice[i] + offset, *lo, *hi);
  }

  SimulatedRun run;
  run.seed = config.seed;
  run.alice = make_trace("alice", alice, FrameType::kPong);
  run.bob = make_trace("bob", bob, FrameType::kPing);
  run.eve = make_trace("eve", eve, FrameType::kObs);
  return run;
}

hmm::HmmModel family_model(const ChannelFamily& f) {
  if (f.max_level <= f.min_level) throw Error("channel family needs at least 2 levels");
  const std::size_t k = f.levels();
  const double kd = static_cast<double>(k);

  hmm::HmmModel model;
  model.states.resize(k);
  for (std::size_t i = 0; i < k; ++i) model.states[i] = f.min_level + static_cast<int>(i);
  model.symbols = model.states;
  model.pi.assign(k, 1.0 / kd);

  // Reflecting banded kernel: centre weight `centre`, (1 - centre) / 2 to each
  // neighbour, with mass that would leave the range kept at the boundary.
  auto banded = [k](double centre) {
    Matrix out(k, k);
    const double side = (1.0 - centre) / 2.0;
    for (std::size_t i = 0; i < k; ++i) {
      out(i, i) += centre;
      out(i, i == 0 ? 0 : i - 1) += side;
      out(i, i + 1 == k ? i : i + 1) += side;
    }
    return out;
  };

  const Matrix neighbour = banded(f.stay);
  model.trans = Matrix(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      model.trans(i, j) = (1.0 - f.coupling) / kd + f.coupling * neighbour(i, j);
  model.emit = banded(f.eve_accuracy);
  return model;
}

ChannelConfig family_config(const ChannelFamily& f, std::size_t n, std::uint64_t seed) {
  ChannelConfig config;
  config.model = family_model(f);
  config.bob_error.clear();
  config.bob_error[0] = 1.0 - f.bob_flip;
  if (f.bob_flip > 0.0) {
    config.bob_error[-1] = f.bob_flip / 2.0;
    config.bob_error[1] = f.bob_flip / 2.0;
  }
  config.n = n;
  config.seed = seed;
  return config;
}

ChannelRates measure_rates(const ChannelConfig& config, std::size_t slice,
                           int quantizer_magnitude) {
  if (slice == 0 || config.n < slice) throw Error("measure_rates: need at least one slice");
  const auto run = simulate_run(config);
  const auto eve_levels = run.eve.levels();
  std::vector<hmm::ObservationSequence> experiments;
  for (std::size_t off = 0; off + slice <= config.n; off += slice) {
    experiments.push_back(hmm::encode_observations(
        config.model, std::span<const int>(eve_levels).subspan(off, slice)));
  }
  const auto est = hmm::estimate_avg_conditional_min_entropy(config.model, experiments);

  const quant::QuantizerConfig qc{quantizer_magnitude, false};
  const std::size_t used = experiments.size() * slice;
  const auto a = quant::embed_trace(run.alice.prefix(used), qc);
  const auto b = quant::embed_trace(run.bob.prefix(used), qc);
  const double bits = static_cast<double>(a.size());
  const double errors = static_cast<double>(quant::word_errors(a, b, 8));

  ChannelRates rates;
  rates.entropy_bits_per_sample = est.mean_bits / static_cast<double>(slice);
  rates.word_errors_per_sample = errors / static_cast<double>(used);
  rates.entropy_rate = est.mean_bits / (static_cast<double>(slice) * qc.bits_per_sample());
  rates.word_error_rate = errors / bits;
  return rates;
}

namespace {

// Bisection on a monotone function of one family parameter.
template <typename Measure>
double bisect(double lo, double hi, double target, bool increasing, Measure measure) {
  for (int iter = 0; iter < 40; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const bool above = measure(mid) > target;
    if (above == increasing) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool within(double achieved, double target, double tol) {
  return std::abs(achieved - target) <= tol * target;
}

}  // namespace

CalibrationResult calibrate_to_rates(double target_entropy_rate,
                                           double target_word_error_rate,
                                           const CalibrationOptions& options) {
  if (!(target_entropy_rate > 0.0 && target_entropy_rate < 1.0) ||
      !(target_word_error_rate > 0.0 && target_word_error_rate < 1.0)) {
    throw CalibrationError("calibration failed: target rates must lie in (0, 1)");
  }
  ChannelFamily family = options.base;
  auto rates_for = [&](const ChannelFamily& f) {
    return measure_rates(family_config(f, options.samples, options.seed), options.slice);
  };

  // Bob's offsets never touch the entropy, so the two searches separate.
  family.bob_flip = bisect(0.0, 1.0, target_word_error_rate, true, [&](double flip) {
    ChannelFamily f = family;
    f.bob_flip = flip;
    return rates_for(f).word_error_rate;
  });
  // Entropy falls as Eve's accuracy rises; below 1/3 the band is no longer
  // peaked at the true level.
  ChannelFamily widest = family;
  widest.eve_accuracy = 1.0 / 3.0;
  if (rates_for(widest).entropy_rate < target_entropy_rate) {
    throw CalibrationError("calibration failed: entropy rate " +
                           std::to_string(target_entropy_rate) +
                           " exceeds what the family reaches");
  }
  family.eve_accuracy =
      bisect(1.0 / 3.0, 1.0, target_entropy_rate, false, [&](double accuracy) {
        ChannelFamily f = family;
        f.eve_accuracy = accuracy;
        return rates_for(f).entropy_rate;
      });

  CalibrationResult result;
  result.family = family;
  result.config = family_config(family, options.samples, options.seed);
  result.target_entropy_rate = target_entropy_rate;
  result.target_word_error_rate = target_word_error_rate;
  result.achieved = measure_rates(result.config, options.slice);
  if (!within(result.achieved.entropy_rate, target_entropy_rate, options.tolerance) ||
      !within(result.achieved.word_error_rate, target_word_error_rate, options.tolerance)) {
    throw CalibrationError(
        "calibration failed: achieved entropy rate " +
        std::to_string(result.achieved.entropy_rate) + ", word error rate " +
        std::to_string(result.achieved.word_error_rate));
  }
  return result;
}

}  // namespace pke::sim
