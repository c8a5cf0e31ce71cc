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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pke/error.hpp"
#include "pke/trace.hpp"

namespace pke::io {

inline constexpr std::string_view kTraceHeader = "seq,node_id,frame_type,rssi";

class TraceParseError : public Error {
 public:
  TraceParseError(const std::string& what, std::size_t line, const std::string& path = {})
      : Error((path.empty() ? "" : path + ": ") + "line " + std::to_string(line) + ": " + what),
        line_(line),
        detail_(what) {}
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

struct TraceRow {
  std::uint32_t seq = 0;
  std::string node_id;
  FrameType frame = FrameType::kObs;
  int rssi = 0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

// A trace CSV: optional `# meta,<node_id>,<delay_ms>,<precision_bits>` lines,
// the header, then one row per observation in file order.
struct TraceFile {
  std::string path;
  std::vector<std::pair<std::string, CaptureMeta>> meta;
  std::vector<TraceRow> rows;

  // One trace per node in order of first appearance. Throws unless each
  // node's sequence numbers are strictly increasing.
  std::vector<MeasurementTrace> traces() const;

  static TraceFile from_traces(std::span<const MeasurementTrace> traces);
};

TraceFile parse_trace_csv(std::string_view text, std::string path = {});
std::string serialize_trace_csv(const TraceFile& file);

TraceFile read_trace_file(const std::string& path);
void write_trace_file(const std::string& path, const TraceFile& file);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace pke::io
