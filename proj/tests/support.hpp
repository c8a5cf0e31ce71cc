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

// Independent reference implementations used by the tests. Nothing here calls
// into the dynamic programs or decoders under test.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "pke/hmm.hpp"
#include "pke/rng.hpp"

namespace pke::testing {

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// Random row-stochastic model with strictly positive entries, or with a few
// zeros when `sparse` is set.
inline hmm::HmmModel random_model(Rng& rng, std::size_t k, std::size_t m, bool sparse = false) {
  auto row = [&](std::size_t len) {
    std::vector<double> r(len);
    double sum = 0.0;
    for (auto& v : r) {
      v = (sparse && rng.uniform() < 0.25) ? 0.0 : 0.05 + rng.uniform();
      sum += v;
    }
    if (sum == 0.0) {
      r[rng.below(len)] = 1.0;
      return r;
    }
    for (auto& v : r) v /= sum;
    return r;
  };
  std::vector<std::vector<double>> trans, emit;
  for (std::size_t i = 0; i < k; ++i) trans.push_back(row(k));
  for (std::size_t i = 0; i < k; ++i) emit.push_back(row(m));
  return hmm::HmmModel::from_tables(row(k), trans, emit);
}

// Pr[X = path, Y = obs] by direct product.
inline double joint_probability(const hmm::HmmModel& model, const std::vector<std::size_t>& path,
                                const std::vector<std::size_t>& obs) {
  double p = model.pi[path[0]] * model.emit(path[0], obs[0]);
  for (std::size_t t = 1; t < path.size(); ++t)
    p *= model.trans(path[t - 1], path[t]) * model.emit(path[t], obs[t]);
  return p;
}

// Calls f(sequence) for every sequence of `len` symbols from [0, base).
template <typename F>
void for_each_sequence(std::size_t base, std::size_t len, F&& f) {
  std::vector<std::size_t> seq(len, 0);
  while (true) {
    f(seq);
    std::size_t i = 0;
    while (i < len && ++seq[i] == base) seq[i++] = 0;
    if (i == len) return;
  }
}

struct BruteForce {
  double max_joint = 0.0;
  double total = 0.0;
  std::vector<std::size_t> argmax;  // first maximizer in enumeration order
};

// Exhaustive path enumeration for one observation sequence.
inline BruteForce enumerate_paths(const hmm::HmmModel& model, const std::vector<std::size_t>& obs) {
  BruteForce out;
  for_each_sequence(model.k(), obs.size(), [&](const std::vector<std::size_t>& path) {
    const double p = joint_probability(model, path, obs);
    out.total += p;
    if (p > out.max_joint) {
      out.max_joint = p;
      out.argmax = path;
    }
  });
  return out;
}

// -log2 sum_y max_x Pr[x, y] from the full joint table.
inline double joint_table_min_entropy(const hmm::HmmModel& model, std::size_t n) {
  double sum = 0.0;
  for_each_sequence(model.m(), n, [&](const std::vector<std::size_t>& obs) {
    double best = 0.0;
    for_each_sequence(model.k(), n, [&](const std::vector<std::size_t>& path) {
      best = std::max(best, joint_probability(model, path, obs));
    });
    sum += best;
  });
  return -std::log2(sum);
}

// GF(2^8) multiplication by shift-and-add with reduction by 0x11D.
inline std::uint8_t peasant_mul(std::uint8_t a, std::uint8_t b) {
  unsigned x = a, y = b, acc = 0;
  while (y) {
    if (y & 1) acc ^= x;
    y >>= 1;
    x <<= 1;
    if (x & 0x100) x ^= 0x11d;
  }
  return static_cast<std::uint8_t>(acc);
}

inline std::uint8_t peasant_pow(std::uint8_t a, unsigned e) {
  std::uint8_t r = 1;
  for (unsigned i = 0; i < e; ++i) r = peasant_mul(r, a);
  return r;
}

// Evaluates sum_i word[i] x^i.
inline std::uint8_t poly_eval(const std::vector<std::uint8_t>& word, std::uint8_t x) {
  std::uint8_t acc = 0, xp = 1;
  for (std::uint8_t c : word) {
    acc ^= peasant_mul(c, xp);
    xp = peasant_mul(xp, x);
  }
  return acc;
}

// Generator polynomial prod_{i=1}^{2t} (x - alpha^i), low degree first.
inline std::vector<std::uint8_t> generator_poly(int parity) {
  std::vector<std::uint8_t> g{1};
  for (int i = 1; i <= parity; ++i) {
    const std::uint8_t root = peasant_pow(2, static_cast<unsigned>(i));
    std::vector<std::uint8_t> next(g.size() + 1, 0);
    for (std::size_t j = 0; j < g.size(); ++j) {
      next[j + 1] ^= g[j];
      next[j] ^= peasant_mul(g[j], root);
    }
    g = next;
  }
  return g;
}

// Multiplies a message polynomial by the generator: a codeword of length
// message.size() + parity.
inline std::vector<std::uint8_t> encode_by_generator(const std::vector<std::uint8_t>& message,
                                                     int parity) {
  const auto g = generator_poly(parity);
  std::vector<std::uint8_t> out(message.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < message.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) out[i + j] ^= peasant_mul(message[i], g[j]);
  return out;
}

// Samples `count` distinct positions in [0, n).
inline std::vector<std::size_t> distinct_positions(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(all[i], all[j]);
  }
  all.resize(count);
  return all;
}

}  // namespace pke::testing
