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

#include <cstdint>
#include <string>
#include <utility>

#include "json.hpp"
#include "pke/channel_sim.hpp"
#include "pke/hmm.hpp"
#include "pke/ingest.hpp"
#include "pke/protocol.hpp"
#include "pke/stats.hpp"

namespace pke::io {

using Json = nlohmann::ordered_json;

Json to_json(const hmm::HmmModel& model);
hmm::HmmModel model_from_json(const Json& j);

Json to_json(const hmm::LinearFit& fit);
hmm::LinearFit linear_fit_from_json(const Json& j);

// {"g": {"slope", "intercept"}, "e": {...}}
Json fits_to_json(const hmm::LinearFit& g, const hmm::LinearFit& e);
std::pair<hmm::LinearFit, hmm::LinearFit> fits_from_json(const Json& j);

Json to_json(const sim::ChannelFamily& family);
sim::ChannelFamily family_from_json(const Json& j);

// Channel file: {"model": {...}, "bob_error": [{"offset", "p"}]}, or
// {"family": {...}}, optionally with "calibrate": {"entropy_rate",
// "word_error_rate"} to fit the family first.
sim::ChannelConfig channel_config_from_json(const Json& j, std::size_t n, std::uint64_t seed);
Json to_json(const sim::ChannelConfig& config);

Json to_json(const hmm::EntropyEstimate& estimate);
Json to_json(const stats::CorrelationReport& report);
Json to_json(const stats::RejectionRate& rate);
Json to_json(const stats::AssumptionReport& report);
Json to_json(const protocol::EntropyLedger& ledger);
Json to_json(const protocol::PlanReport& report);
Json to_json(const protocol::KeyResult& result);
Json to_json(const protocol::GrowthReport& report);
Json to_json(const IngestResult& result);

// Plot-ready series.
std::string correlation_csv(const stats::CorrelationReport& report);
std::string entropy_growth_csv(const protocol::GrowthReport& report);
std::string error_growth_csv(const protocol::GrowthReport& report);

Json parse_json(const std::string& text, const std::string& what);

}  // namespace pke::io
