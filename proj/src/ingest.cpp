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

#include "pke/ingest.hpp"

#include <algorithm>
#include <set>

#include "pke/error.hpp"

namespace pke::io {

namespace {

struct NodeData {
  std::map<std::uint32_t, Sample> samples;
  CaptureMeta meta;
  bool has_meta = false;
};

}  // namespace

IngestResult ingest_traces(std::span<const TraceFile> files, const IngestOptions& options) {
  if (options.m < 1) throw Error("ingest: m must be at least 1");
  std::map<std::string, NodeData> nodes;
  for (const auto& file : files) {
    for (const auto& row : file.rows) {
      auto& node = nodes[row.node_id];
      const Sample sample{row.seq, row.rssi, row.frame};
      const auto [it, inserted] = node.samples.emplace(row.seq, sample);
      if (!inserted && !(it->second == sample)) {
        throw Error("ingest: conflicting rows for node '" + row.node_id + "' seq " +
                    std::to_string(row.seq));
      }
    }
    for (const auto& [id, meta] : file.meta) {
      auto& node = nodes[id];
      if (node.has_meta && !(node.meta == meta)) {
        throw Error("ingest: conflicting capture metadata for node '" + id + "'");
      }
      node.meta = meta;
      node.has_meta = true;
    }
  }
  for (const auto* id : {&options.alice_id, &options.bob_id}) {
    const auto it = nodes.find(*id);
    if (it == nodes.end() || it->second.samples.empty()) {
      throw Error("ingest: no trace for node '" + *id + "'");
    }
  }

  std::string eve_id = options.eve_id;
  if (eve_id.empty()) {
    for (const auto& [id, node] : nodes) {
      if (id != options.alice_id && id != options.bob_id && !node.samples.empty()) {
        eve_id = id;
        break;
      }
    }
  }
  if (options.eve_filter && (eve_id.empty() || !nodes.count(eve_id))) {
    throw Error("ingest: eve filter requested but no eavesdropper trace '" + eve_id + "'");
  }

  std::set<std::uint32_t> keep;
  for (const auto& [seq, s] : nodes[options.alice_id].samples) {
    if (!nodes[options.bob_id].samples.count(seq)) continue;
    if (options.eve_filter && !nodes[eve_id].samples.count(seq)) continue;
    keep.insert(seq);
  }
  if (keep.empty()) throw Error("ingest: empty intersection of sequence numbers");

  IngestResult result;
  result.kept = keep.size();
  auto build = [&](const std::string& id) {
    const auto& node = nodes.at(id);
    MeasurementTrace trace;
    trace.node_id = id;
    trace.meta = node.meta;
    std::size_t clamped = 0;
    for (const auto& [seq, s] : node.samples) {
      if (!keep.count(seq)) continue;
      Sample out = s;
      const int level = std::clamp(s.level, -options.m, 0);
      if (level != s.level) ++clamped;
      out.level = level;
      trace.samples.push_back(out);
    }
    result.dropped[id] = node.samples.size() - trace.samples.size();
    result.clamped[id] = clamped;
    result.clamped_total += clamped;
    return trace;
  };
  result.alice = build(options.alice_id);
  result.bob = build(options.bob_id);
  for (const auto& [id, node] : nodes) {
    if (id == options.alice_id || id == options.bob_id) continue;
    result.eves.push_back(build(id));
  }
  return result;
}

}  // namespace pke::io
