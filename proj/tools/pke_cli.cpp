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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pke/channel_sim.hpp"
#include "pke/error.hpp"
#include "pke/hmm.hpp"
#include "pke/ingest.hpp"
#include "pke/json_io.hpp"
#include "pke/protocol.hpp"
#include "pke/stats.hpp"
#include "pke/trace_io.hpp"

namespace {

using pke::io::Json;

pke::MeasurementTrace load_single(const std::string& path) {
  const auto traces = pke::io::read_trace_file(path).traces();
  if (traces.size() != 1) {
    throw pke::Error(path + ": expected exactly one node, found " + std::to_string(traces.size()));
  }
  return traces.front();
}

// Restricts a trace to the sequence numbers it shares with `other`.
void intersect(pke::MeasurementTrace& a, pke::MeasurementTrace& b) {
  if (pke::aligned(a, b)) return;
  std::vector<pke::Sample> ka, kb;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a.samples[i].seq < b.samples[j].seq) {
      ++i;
    } else if (b.samples[j].seq < a.samples[i].seq) {
      ++j;
    } else {
      ka.push_back(a.samples[i++]);
      kb.push_back(b.samples[j++]);
    }
  }
  a.samples = std::move(ka);
  b.samples = std::move(kb);
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::pair<pke::hmm::LinearFit, pke::hmm::LinearFit> load_fits(const std::string& path) {
  if (path.empty()) {
    return {pke::protocol::kReferenceEntropyFit, pke::protocol::kReferenceErrorFit};
  }
  return pke::io::fits_from_json(pke::io::parse_json(pke::io::read_text_file(path), path));
}

struct Common {
  std::string alice, bob, eve;
  std::size_t levels = 9;
  double smoothing = 1.0;
  std::uint64_t seed = 1;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physical-layer key extraction toolkit"};
  app.require_subcommand(1);

  // simulate
  std::string sim_config, sim_out;
  std::size_t sim_n = 10000;
  std::uint64_t sim_seed = 1;
  auto* simulate = app.add_subcommand("simulate", "Simulate Alice/Bob/Eve traces");
  simulate->add_option("--config", sim_config, "Channel JSON")->required();
  simulate->add_option("--n", sim_n, "Samples")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "Seed");
  simulate->add_option("--out", sim_out, "Output directory")->required();

  // ingest
  std::vector<std::string> ing_traces;
  std::string ing_out;
  pke::io::IngestOptions ing_options;
  auto* ingest = app.add_subcommand("ingest", "Align and clamp captured traces");
  ingest->add_option("--trace", ing_traces, "Trace CSV (repeatable)")->required();
  ingest->add_option("--alice", ing_options.alice_id, "Alice node id");
  ingest->add_option("--bob", ing_options.bob_id, "Bob node id");
  ingest->add_option("--eve", ing_options.eve_id, "Designated eavesdropper node id");
  ingest->add_flag("--eve-filter", ing_options.eve_filter, "Drop samples Eve missed");
  ingest->add_option("--m", ing_options.m, "Clamp levels into [-m, 0]");
  ingest->add_option("--out", ing_out, "Output directory for aligned traces");

  // estimate-entropy
  Common est;
  std::size_t est_slice = 100;
  std::string est_model;
  auto* estimate = app.add_subcommand("estimate-entropy", "Per-slice conditional min-entropy");
  estimate->add_option("--alice", est.alice, "Alice trace CSV")->required();
  estimate->add_option("--eve", est.eve, "Eve trace CSV")->required();
  estimate->add_option("--levels", est.levels, "Signal levels");
  estimate->add_option("--slice", est_slice, "Samples per experiment")->check(CLI::PositiveNumber);
  estimate->add_option("--smoothing", est.smoothing, "Additive smoothing of counts");
  estimate->add_option("--model", est_model, "Use this model JSON instead of fitting");

  // fit-growth
  Common fit;
  pke::protocol::GrowthOptions growth;
  std::string fit_csv;
  auto* fit_growth = app.add_subcommand("fit-growth", "Fit entropy and error growth lines");
  fit_growth->add_option("--alice", fit.alice, "Alice trace CSV")->required();
  fit_growth->add_option("--bob", fit.bob, "Bob trace CSV")->required();
  fit_growth->add_option("--eve", fit.eve, "Eve trace CSV")->required();
  fit_growth->add_option("--levels", growth.levels, "Signal levels");
  fit_growth->add_option("--slices", growth.slices, "Slices");
  fit_growth->add_option("--n-min", growth.n_min, "Smallest n");
  fit_growth->add_option("--n-max", growth.n_max, "Largest n");
  fit_growth->add_option("--step", growth.step, "Step in n");
  fit_growth->add_option("--m", growth.m, "Quantizer magnitude");
  fit_growth->add_option("--smoothing", growth.smoothing, "Additive smoothing of counts");
  fit_growth->add_option("--csv-out", fit_csv, "Directory for entropy/error CSVs");

  // validate-assumptions
  Common val;
  pke::stats::AssumptionConfig val_config;
  std::string val_csv;
  auto* validate = app.add_subcommand("validate-assumptions", "Test the channel assumptions");
  validate->add_option("--alice", val.alice, "Alice trace CSV")->required();
  validate->add_option("--eve", val.eve, "Eve trace CSV")->required();
  validate->add_option("--alpha", val_config.alpha, "Significance level");
  validate->add_option("--trials", val_config.trials, "K-S repetitions");
  validate->add_option("--slice", val_config.slice_len, "Samples per entropy slice");
  validate->add_option("--max-lag", val_config.max_lag, "Largest lag");
  validate->add_option("--rows", val_config.rows, "Random anchors in the lag matrix");
  validate->add_option("--levels", val_config.levels, "Signal levels");
  validate->add_option("--threshold", val_config.stable_threshold, "Largest std/mean");
  validate->add_option("--seed", val.seed, "Seed");
  validate->add_option("--csv", val_csv, "Write the lag profile as CSV");

  // plan
  std::size_t plan_l = 128;
  double plan_lambda = 80, plan_c = 1;
  int plan_m = 8;
  std::string plan_fits;
  auto* plan = app.add_subcommand("plan", "Choose n and the code");
  plan->add_option("--l", plan_l, "Key bits")->check(CLI::PositiveNumber);
  plan->add_option("--lambda", plan_lambda, "Uniformity parameter");
  plan->add_option("--c", plan_c, "Correctness parameter");
  plan->add_option("--m", plan_m, "Quantizer magnitude");
  plan->add_option("--fits", plan_fits, "Fits JSON (default: reference growth lines)");

  // extract-key
  Common key;
  std::size_t key_l = 128, key_n = 0;
  double key_lambda = 80, key_c = 1;
  int key_m = 8, key_t = 0;
  std::string key_fits, key_transcript;
  auto* extract_key = app.add_subcommand("extract-key", "Run the key exchange on traces");
  extract_key->add_option("--alice", key.alice, "Alice trace CSV")->required();
  extract_key->add_option("--bob", key.bob, "Bob trace CSV")->required();
  extract_key->add_option("--l", key_l, "Key bits")->check(CLI::PositiveNumber);
  extract_key->add_option("--lambda", key_lambda, "Uniformity parameter");
  extract_key->add_option("--c", key_c, "Correctness parameter");
  extract_key->add_option("--m", key_m, "Quantizer magnitude");
  extract_key->add_option("--fits", key_fits, "Fits JSON (default: reference growth lines)");
  extract_key->add_option("--n", key_n, "Override the planned sample count");
  extract_key->add_option("--t", key_t, "Override the planned per-block correction");
  extract_key->add_option("--seed", key.seed, "Seed for the extractor seed");
  extract_key->add_option("--transcript-out", key_transcript, "Write the public transcript");

  // report
  Common rep;
  pke::protocol::GrowthOptions rep_growth;
  pke::stats::AssumptionConfig rep_config;
  auto* report = app.add_subcommand("report", "Growth fits, plan and assumption checks");
  report->add_option("--alice", rep.alice, "Alice trace CSV")->required();
  report->add_option("--bob", rep.bob, "Bob trace CSV")->required();
  report->add_option("--eve", rep.eve, "Eve trace CSV")->required();
  report->add_option("--levels", rep_growth.levels, "Signal levels");
  report->add_option("--slices", rep_growth.slices, "Slices");
  report->add_option("--trials", rep_config.trials, "K-S repetitions");
  report->add_option("--seed", rep.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate) {
      const auto j = pke::io::parse_json(pke::io::read_text_file(sim_config), sim_config);
      const auto config = pke::io::channel_config_from_json(j, sim_n, sim_seed);
      const auto run = pke::sim::simulate_run(config);
      std::filesystem::create_directories(sim_out);
      const std::filesystem::path dir(sim_out);
      for (const auto* trace : {&run.alice, &run.bob, &run.eve}) {
        pke::io::write_trace_file((dir / (trace->node_id + ".csv")).string(),
                                  pke::io::TraceFile::from_traces({trace, 1}));
      }
      emit(Json{{"n", sim_n}, {"seed", sim_seed}, {"out", sim_out},
                {"channel", pke::io::to_json(config)}});
    } else if (*ingest) {
      std::vector<pke::io::TraceFile> files;
      for (const auto& path : ing_traces) files.push_back(pke::io::read_trace_file(path));
      const auto result = pke::io::ingest_traces(files, ing_options);
      if (!ing_out.empty()) {
        std::filesystem::create_directories(ing_out);
        const std::filesystem::path dir(ing_out);
        std::vector<const pke::MeasurementTrace*> all{&result.alice, &result.bob};
        for (const auto& e : result.eves) all.push_back(&e);
        for (const auto* trace : all) {
          pke::io::write_trace_file((dir / (trace->node_id + ".csv")).string(),
                                    pke::io::TraceFile::from_traces({trace, 1}));
        }
      }
      emit(pke::io::to_json(result));
    } else if (*estimate) {
      auto alice = load_single(est.alice);
      auto eve = load_single(est.eve);
      intersect(alice, eve);
      pke::hmm::HmmModel model;
      std::vector<std::string> warnings;
      if (!est_model.empty()) {
        model = pke::io::model_from_json(
            pke::io::parse_json(pke::io::read_text_file(est_model), est_model));
      } else {
        auto fitted = pke::hmm::fit_hmm_from_traces(alice, eve, est.levels, est.smoothing);
        model = std::move(fitted.model);
        warnings = std::move(fitted.warnings);
      }
      std::vector<pke::hmm::ObservationSequence> slices;
      for (std::size_t off = 0; off + est_slice <= eve.size(); off += est_slice) {
        slices.push_back(pke::hmm::encode_observations(model, eve.window(off, est_slice).levels()));
      }
      const auto estimate_result = pke::hmm::estimate_avg_conditional_min_entropy(model, slices);
      Json j = pke::io::to_json(estimate_result);
      j["bits_per_sample"] = estimate_result.mean_bits / static_cast<double>(est_slice);
      j["levels"] = model.k();
      j["warnings"] = warnings;
      emit(j);
    } else if (*fit_growth) {
      auto alice = load_single(fit.alice);
      auto bob = load_single(fit.bob);
      auto eve = load_single(fit.eve);
      intersect(alice, bob);
      intersect(alice, eve);
      intersect(bob, alice);
      const auto g = pke::protocol::measure_growth(alice, bob, eve, growth);
      if (!fit_csv.empty()) {
        std::filesystem::create_directories(fit_csv);
        const std::filesystem::path dir(fit_csv);
        pke::io::write_text_file((dir / "entropy_vs_n.csv").string(), pke::io::entropy_growth_csv(g));
        pke::io::write_text_file((dir / "errors_vs_n.csv").string(), pke::io::error_growth_csv(g));
      }
      emit(pke::io::to_json(g));
    } else if (*validate) {
      auto alice = load_single(val.alice);
      auto eve = load_single(val.eve);
      intersect(alice, eve);
      const auto r = pke::stats::validate_assumptions(alice, eve, val_config, val.seed);
      if (!val_csv.empty() && r.markov_lag_profile) {
        pke::io::write_text_file(val_csv, pke::io::correlation_csv(*r.markov_lag_profile));
      }
      emit(pke::io::to_json(r));
    } else if (*plan) {
      const auto [g, e] = load_fits(plan_fits);
      emit(pke::io::to_json(pke::protocol::plan_parameters(plan_l, plan_lambda, plan_c, g, e, plan_m)));
    } else if (*extract_key) {
      auto alice = load_single(key.alice);
      auto bob = load_single(key.bob);
      intersect(alice, bob);
      const auto [g, e] = load_fits(key_fits);
      auto params = pke::protocol::plan_parameters(key_l, key_lambda, key_c, g, e, key_m).params;
      if (key_n > 0) params.n = key_n;
      if (key_t > 0) params.code = pke::coding::RsCode::correcting(key_t);
      const auto result = pke::protocol::run_exchange(alice, bob, params, key.seed);
      if (!key_transcript.empty()) {
        const auto bytes = pke::protocol::serialize_transcript(result.transcript);
        pke::io::write_text_file(key_transcript,
                                 std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
      }
      Json j = pke::io::to_json(result);
      j["n"] = params.n;
      emit(j);
      return result.success ? 0 : 1;
    } else if (*report) {
      auto alice = load_single(rep.alice);
      auto bob = load_single(rep.bob);
      auto eve = load_single(rep.eve);
      intersect(alice, bob);
      intersect(alice, eve);
      intersect(bob, alice);
      rep_config.levels = rep_growth.levels;
      const auto g = pke::protocol::measure_growth(alice, bob, eve, rep_growth);
      Json j;
      j["growth"] = pke::io::to_json(g);
      j["growth"].erase("points");
      try {
        j["plan"] = pke::io::to_json(
            pke::protocol::plan_parameters(128, 80, 1, g.entropy_fit, g.error_fit, rep_growth.m));
      } catch (const pke::Error& err) {
        j["plan"] = Json{{"error", err.what()}};
      }
      auto assumptions = pke::io::to_json(pke::stats::validate_assumptions(alice, eve, rep_config, rep.seed));
      for (const char* key_name : {"markov_lag_profile", "observation_lag_profile"}) {
        if (!assumptions[key_name].is_null()) {
          for (const char* drop : {"lags", "r", "significant"}) assumptions[key_name].erase(drop);
        }
      }
      j["assumptions"] = assumptions;
      emit(j);
    }
  } catch (const pke::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
