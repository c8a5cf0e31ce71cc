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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pke/trace.hpp"
#include "pke/trace_io.hpp"

namespace pke::io {

struct IngestOptions {
  std::string alice_id = "alice";
  std::string bob_id = "bob";
  // Eavesdropper whose sequence numbers also bound the kept set when
  // eve_filter is on. Empty: the first other node by id.
  std::string eve_id;
  bool eve_filter = false;
  int m = 8;  // levels are clamped into [-m, 0]
};

struct IngestResult {
  MeasurementTrace alice;
  MeasurementTrace bob;
  std::vector<MeasurementTrace> eves;  // sorted by node id
  std::size_t kept = 0;
  std::map<std::string, std::size_t> dropped;  // per node
  std::map<std::string, std::size_t> clamped;  // per node
  std::size_t clamped_total = 0;
};

// Merges every node's rows across files, keeps the sequence numbers common to
// Alice and Bob (and the designated eavesdropper with eve_filter), and clamps
// levels. The result does not depend on the order of `files`.
IngestResult ingest_traces(std::span<const TraceFile> files, const IngestOptions& options = {});

}  // namespace pke::io
