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

#include "pke/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace pke::io {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
T parse_number(std::string_view field, const char* what, std::size_t line) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw TraceParseError(std::string("bad ") + what + " '" + std::string(field) + "'", line);
  }
  return value;
}

void check_node_id(std::string_view id, std::size_t line) {
  if (id.empty()) throw TraceParseError("empty node_id", line);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<MeasurementTrace> TraceFile::traces() const {
  std::vector<MeasurementTrace> out;
  std::map<std::string, std::size_t> index;
  for (const auto& row : rows) {
    auto [it, inserted] = index.emplace(row.node_id, out.size());
    if (inserted) {
      out.emplace_back();
      out.back().node_id = row.node_id;
    }
    auto& trace = out[it->second];
    if (!trace.samples.empty() && trace.samples.back().seq >= row.seq) {
      throw Error("node '" + row.node_id + "': sequence numbers not strictly increasing at seq " +
                  std::to_string(row.seq));
    }
    trace.samples.push_back({row.seq, row.rssi, row.frame});
  }
  for (const auto& [node, meta] : this->meta) {
    const auto it = index.find(node);
    if (it != index.end()) out[it->second].meta = meta;
  }
  return out;
}

TraceFile TraceFile::from_traces(std::span<const MeasurementTrace> traces) {
  TraceFile file;
  for (const auto& trace : traces) {
    if (trace.meta != CaptureMeta{}) file.meta.emplace_back(trace.node_id, trace.meta);
    for (const auto& s : trace.samples) file.rows.push_back({s.seq, trace.node_id, s.frame, s.level});
  }
  return file;
}

namespace {

TraceFile parse_rows(std::string_view text) {
  TraceFile file;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) throw TraceParseError("empty line", line_no);

    if (line.front() == '#') {
      if (header_seen) throw TraceParseError("comment after header", line_no);
      constexpr std::string_view kMeta = "# meta,";
      if (line.substr(0, kMeta.size()) != kMeta) {
        throw TraceParseError("unknown comment line", line_no);
      }
      const auto fields = split(line.substr(kMeta.size()), ',');
      if (fields.size() != 3) throw TraceParseError("meta line needs 3 fields", line_no);
      check_node_id(fields[0], line_no);
      CaptureMeta meta;
      meta.delay_ms = parse_number<double>(fields[1], "delay_ms", line_no);
      meta.precision_bits = parse_number<int>(fields[2], "precision_bits", line_no);
      file.meta.emplace_back(std::string(fields[0]), meta);
      continue;
    }
    if (!header_seen) {
      if (line != kTraceHeader) {
        throw TraceParseError("expected header '" + std::string(kTraceHeader) + "'", line_no);
      }
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 4) {
      throw TraceParseError("expected 4 fields, got " + std::to_string(fields.size()), line_no);
    }
    TraceRow row;
    row.seq = parse_number<std::uint32_t>(fields[0], "seq", line_no);
    check_node_id(fields[1], line_no);
    row.node_id = std::string(fields[1]);
    try {
      row.frame = parse_frame_type(fields[2]);
    } catch (const Error&) {
      throw TraceParseError("bad frame_type '" + std::string(fields[2]) + "'", line_no);
    }
    row.rssi = parse_number<int>(fields[3], "rssi", line_no);
    file.rows.push_back(std::move(row));
  }
  if (!header_seen) throw TraceParseError("missing header", line_no + 1);
  return file;
}

}  // namespace

TraceFile parse_trace_csv(std::string_view text, std::string path) {
  try {
    TraceFile file = parse_rows(text);
    file.path = std::move(path);
    return file;
  } catch (const TraceParseError& e) {
    if (path.empty()) throw;
    throw TraceParseError(e.detail(), e.line(), path);
  }
}

std::string serialize_trace_csv(const TraceFile& file) {
  std::string out;
  for (const auto& [node, meta] : file.meta) {
    out += "# meta," + node + "," + format_double(meta.delay_ms) + "," +
           std::to_string(meta.precision_bits) + "\n";
  }
  out += kTraceHeader;
  out += '\n';
  for (const auto& row : file.rows) {
    out += std::to_string(row.seq);
    out += ',';
    out += row.node_id;
    out += ',';
    out += frame_type_name(row.frame);
    out += ',';
    out += std::to_string(row.rssi);
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write to '" + path + "' failed");
}

TraceFile read_trace_file(const std::string& path) {
  return parse_trace_csv(read_text_file(path), path);
}

void write_trace_file(const std::string& path, const TraceFile& file) {
  write_text_file(path, serialize_trace_csv(file));
}

}  // namespace pke::io
