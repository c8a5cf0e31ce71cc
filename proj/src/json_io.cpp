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

#include "pke/json_io.hpp"

#include <cstdio>

#include "pke/error.hpp"

namespace pke::io {

namespace {

Json matrix_json(const Matrix& m) { return Json(m.to_rows()); }

std::string hex_of(const BitString& bits) { return bits.to_len_hex(); }

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T field(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(std::string(where) + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string(where) + ": bad field '" + key + "': " + e.what());
  }
}

}  // namespace

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(what + ": invalid JSON: " + e.what());
  }
}

Json to_json(const hmm::HmmModel& model) {
  return Json{{"k", model.k()},                {"m", model.m()},
              {"states", model.states},        {"symbols", model.symbols},
              {"pi", model.pi},                {"trans", matrix_json(model.trans)},
              {"emit", matrix_json(model.emit)}};
}

hmm::HmmModel model_from_json(const Json& j) {
  const auto pi = field<std::vector<double>>(j, "pi", "model");
  const auto trans = field<std::vector<std::vector<double>>>(j, "trans", "model");
  const auto emit = field<std::vector<std::vector<double>>>(j, "emit", "model");
  auto model = hmm::HmmModel::from_tables(pi, trans, emit);
  if (j.contains("states")) model.states = field<std::vector<int>>(j, "states", "model");
  if (j.contains("symbols")) model.symbols = field<std::vector<int>>(j, "symbols", "model");
  if (j.contains("k") && field<std::size_t>(j, "k", "model") != model.k())
    throw Error("model: k does not match the tables");
  if (j.contains("m") && field<std::size_t>(j, "m", "model") != model.m())
    throw Error("model: m does not match the tables");
  hmm::require_valid(model);
  return model;
}

Json to_json(const hmm::LinearFit& fit) {
  return Json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"residual_sum_squares", fit.residual_sum_squares}};
}

hmm::LinearFit linear_fit_from_json(const Json& j) {
  hmm::LinearFit fit;
  fit.slope = field<double>(j, "slope", "fit");
  fit.intercept = field<double>(j, "intercept", "fit");
  if (j.contains("residual_sum_squares"))
    fit.residual_sum_squares = field<double>(j, "residual_sum_squares", "fit");
  return fit;
}

Json fits_to_json(const hmm::LinearFit& g, const hmm::LinearFit& e) {
  return Json{{"g", to_json(g)}, {"e", to_json(e)}};
}

std::pair<hmm::LinearFit, hmm::LinearFit> fits_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("g") || !j.contains("e")) {
    throw Error("fits: expected objects 'g' and 'e'");
  }
  return {linear_fit_from_json(j.at("g")), linear_fit_from_json(j.at("e"))};
}

Json to_json(const sim::ChannelFamily& f) {
  return Json{{"min_level", f.min_level},       {"max_level", f.max_level},
              {"coupling", f.coupling},         {"stay", f.stay},
              {"eve_accuracy", f.eve_accuracy}, {"bob_flip", f.bob_flip}};
}

sim::ChannelFamily family_from_json(const Json& j) {
  sim::ChannelFamily f;
  if (!j.is_object()) throw Error("family: expected an object");
  if (j.contains("min_level")) f.min_level = field<int>(j, "min_level", "family");
  if (j.contains("max_level")) f.max_level = field<int>(j, "max_level", "family");
  if (j.contains("coupling")) f.coupling = field<double>(j, "coupling", "family");
  if (j.contains("stay")) f.stay = field<double>(j, "stay", "family");
  if (j.contains("eve_accuracy")) f.eve_accuracy = field<double>(j, "eve_accuracy", "family");
  if (j.contains("bob_flip")) f.bob_flip = field<double>(j, "bob_flip", "family");
  return f;
}

sim::ChannelConfig channel_config_from_json(const Json& j, std::size_t n, std::uint64_t seed) {
  if (!j.is_object()) throw Error("channel config: expected an object");
  if (j.contains("family")) {
    auto family = family_from_json(j.at("family"));
    if (j.contains("calibrate")) {
      const auto& cal = j.at("calibrate");
      sim::CalibrationOptions options;
      options.base = family;
      if (cal.contains("samples")) options.samples = field<std::size_t>(cal, "samples", "calibrate");
      if (cal.contains("seed")) options.seed = field<std::uint64_t>(cal, "seed", "calibrate");
      family = sim::calibrate_to_rates(field<double>(cal, "entropy_rate", "calibrate"),
                                             field<double>(cal, "word_error_rate", "calibrate"),
                                             options)
                   .family;
    }
    return sim::family_config(family, n, seed);
  }
  sim::ChannelConfig config;
  config.model = model_from_json(field<Json>(j, "model", "channel config"));
  if (j.contains("bob_error")) {
    config.bob_error.clear();
    for (const auto& entry : j.at("bob_error")) {
      config.bob_error[field<int>(entry, "offset", "bob_error")] =
          field<double>(entry, "p", "bob_error");
    }
  }
  config.n = n;
  config.seed = seed;
  sim::validate_config(config);
  return config;
}

Json to_json(const sim::ChannelConfig& config) {
  Json bob = Json::array();
  for (const auto& [offset, p] : config.bob_error) bob.push_back({{"offset", offset}, {"p", p}});
  return Json{{"model", to_json(config.model)}, {"bob_error", bob}};
}

Json to_json(const hmm::EntropyEstimate& e) {
  return Json{{"mean_bits", e.mean_bits},
              {"std_bits", e.std_bits},
              {"n_samples_per_experiment", e.n_samples_per_experiment},
              {"n_experiments", e.n_experiments},
              {"per_experiment_bits", e.per_experiment_bits}};
}

Json to_json(const stats::CorrelationReport& r) {
  return Json{{"alpha", r.alpha},
              {"significant_nonzero_lags", r.significant_nonzero()},
              {"nonzero_lags", r.nonzero_lags()},
              {"lags", r.lags},
              {"r", r.r},
              {"significant", std::vector<bool>(r.significant.begin(), r.significant.end())}};
}

Json to_json(const stats::RejectionRate& rate) {
  Json j{{"ran", rate.ran},
         {"tests", rate.tests},
         {"rejections", rate.rejections},
         {"rate", rate.rate()}};
  if (!rate.note.empty()) j["note"] = rate.note;
  return j;
}

Json to_json(const stats::AssumptionReport& r) {
  Json j;
  j["markov_lag_profile"] = r.markov_lag_profile ? to_json(*r.markov_lag_profile) : Json();
  j["observation_lag_profile"] =
      r.observation_lag_profile ? to_json(*r.observation_lag_profile) : Json();
  j["identical_distribution"] = to_json(r.identical_distribution);
  j["stationary_transition"] = to_json(r.stationary_transition);
  j["stationary_observation"] = to_json(r.stationary_observation);
  if (r.stable_entropy) {
    Json s = to_json(*r.stable_entropy);
    s.erase("per_experiment_bits");
    s["std_over_mean"] = r.stable_entropy_ratio;
    s["stable"] = r.stable_entropy_ok;
    j["stable_entropy"] = s;
  } else {
    j["stable_entropy"] = Json();
  }
  j["notes"] = r.notes;
  return j;
}

Json to_json(const protocol::EntropyLedger& l) {
  return Json{{"initial_bits", l.initial_bits},
              {"sketch_loss_bits", l.sketch_loss_bits},
              {"extractor_loss_bits", l.extractor_loss_bits},
              {"residual_bits", l.residual_bits},
              {"key_bits", l.key_bits}};
}

Json to_json(const protocol::PlanReport& r) {
  const auto& p = r.params;
  Json j;
  j["inputs"] = {{"l", p.l}, {"lambda", p.lambda}, {"c", p.c}, {"m", p.m},
                 {"g", to_json(p.entropy_fit)}, {"e", to_json(p.error_fit)}};
  j["entropy_bound_n"] = r.entropy_bound_n;
  j["correctness_bound_n"] = r.correctness_bound_n;
  j["first_principles_n"] = r.first_principles_n;
  j["closed_form"] = {{"entropy_term", r.closed_form_entropy_term},
                        {"correctness_term", r.closed_form_correctness_term},
                        {"n", r.closed_form_n}};
  j["entropy_condition"] = {{"slope", r.condition_slope},
                            {"intercept", r.condition_intercept},
                            {"reference_slope", r.reference_condition_slope},
                            {"reference_intercept", r.reference_condition_intercept},
                            {"constant_discrepancy", r.constant_discrepancy}};
  j["code"] = {{"n_sym", p.code.n_sym}, {"k_sym", p.code.k_sym}, {"t", p.code.t()},
               {"words", r.words},      {"blocks", r.blocks},   {"error_budget_words", r.error_budget_words},
               {"sketch_bits", r.sketch_bits}};
  j["predicted_ledger"] = to_json(r.predicted_ledger);
  j["correctness"] = {{"failure_bound", r.correctness.probability},
                      {"vacuous", r.correctness.vacuous},
                      {"predicted_success_probability", r.predicted_success_probability}};
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const protocol::KeyResult& r) {
  Json j;
  j["success"] = r.success;
  j["certified"] = r.certified;
  if (!r.reason.empty()) j["reason"] = r.reason;
  j["alice_key"] = hex_of(r.alice_key);
  j["bob_key"] = r.bob_key.size() ? Json(hex_of(r.bob_key)) : Json();
  j["corrected_words"] = r.corrected_words;
  j["ledger"] = to_json(r.ledger);
  j["sketch"] = {{"blocks", r.transcript.sketch.block_count},
                 {"n_sym", r.transcript.sketch.code.n_sym},
                 {"k_sym", r.transcript.sketch.code.k_sym},
                 {"bits", r.transcript.sketch.bit_length()}};
  return j;
}

Json to_json(const protocol::GrowthReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    points.push_back({{"n", p.n},
                      {"mean_entropy_bits", p.mean_entropy_bits},
                      {"std_entropy_bits", p.std_entropy_bits},
                      {"mean_word_errors", p.mean_word_errors}});
  }
  Json j = fits_to_json(r.entropy_fit, r.error_fit);
  j["points"] = points;
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const IngestResult& r) {
  Json eves = Json::array();
  for (const auto& e : r.eves) eves.push_back({{"node_id", e.node_id}, {"samples", e.size()}});
  return Json{{"kept", r.kept},
              {"alice", r.alice.node_id},
              {"bob", r.bob.node_id},
              {"eves", eves},
              {"dropped", r.dropped},
              {"clamped", r.clamped},
              {"clamped_total", r.clamped_total}};
}

std::string correlation_csv(const stats::CorrelationReport& r) {
  std::string out = "lag,r,significant\n";
  for (std::size_t i = 0; i < r.lags.size(); ++i) {
    out += std::to_string(r.lags[i]) + "," + num(r.r[i]) + "," +
           (r.significant[i] ? "true" : "false") + "\n";
  }
  return out;
}

std::string entropy_growth_csv(const protocol::GrowthReport& r) {
  std::string out = "n,mean_entropy_bits,std_entropy_bits\n";
  for (const auto& p : r.points)
    out += std::to_string(p.n) + "," + num(p.mean_entropy_bits) + "," + num(p.std_entropy_bits) + "\n";
  return out;
}

std::string error_growth_csv(const protocol::GrowthReport& r) {
  std::string out = "n,mean_word_errors\n";
  for (const auto& p : r.points) out += std::to_string(p.n) + "," + num(p.mean_word_errors) + "\n";
  return out;
}

}  // namespace pke::io
