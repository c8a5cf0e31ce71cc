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

#include "pke/trace.hpp"

#include <algorithm>

#include "pke/error.hpp"

namespace pke {

std::string_view frame_type_name(FrameType type) {
  switch (type) {
    case FrameType::kPing:
      return "PING";
    case FrameType::kPong:
      return "PONG";
    case FrameType::kObs:
      return "OBS";
  }
  return "OBS";
}

FrameType parse_frame_type(std::string_view name) {
  if (name == "PING") return FrameType::kPing;
  if (name == "PONG") return FrameType::kPong;
  if (name == "OBS") return FrameType::kObs;
  throw Error("unknown frame type '" + std::string(name) + "'");
}

std::vector<int> MeasurementTrace::levels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.level);
  return out;
}

std::vector<std::uint32_t> MeasurementTrace::seqs() const {
  std::vector<std::uint32_t> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.seq);
  return out;
}

MeasurementTrace MeasurementTrace::prefix(std::size_t count) const {
  return window(0, std::min(count, samples.size()));
}

MeasurementTrace MeasurementTrace::window(std::size_t offset,
                                          std::size_t count) const {
  if (offset + count > samples.size()) throw Error("trace window out of range");
  MeasurementTrace out{node_id, {}, meta};
  out.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(offset),
                     samples.begin() + static_cast<std::ptrdiff_t>(offset + count));
  return out;
}

MeasurementTrace make_trace(std::string node_id, std::span<const int> levels,
                            FrameType frame, std::uint32_t first_seq) {
  MeasurementTrace out;
  out.node_id = std::move(node_id);
  out.samples.reserve(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out.samples.push_back(
        {first_seq + static_cast<std::uint32_t>(i), levels[i], frame});
  }
  return out;
}

void check_trace(const MeasurementTrace& trace) {
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    if (trace.samples[i].seq <= trace.samples[i - 1].seq) {
      throw Error("trace '" + trace.node_id +
                  "': sequence numbers not strictly increasing at index " +
                  std::to_string(i));
    }
  }
}

bool aligned(const MeasurementTrace& a, const MeasurementTrace& b) {
  return std::equal(a.samples.begin(), a.samples.end(), b.samples.begin(),
                    b.samples.end(),
                    [](const Sample& x, const Sample& y) { return x.seq == y.seq; });
}

}  // namespace pke
