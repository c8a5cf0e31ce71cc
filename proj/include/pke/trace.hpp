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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pke {

enum class FrameType { kPing, kPong, kObs };

std::string_view frame_type_name(FrameType type);
FrameType parse_frame_type(std::string_view name);

// One received frame: its sequence number and the quantized RSSI in dBm.
struct Sample {
  std::uint32_t seq = 0;
  int level = 0;
  FrameType frame = FrameType::kObs;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct CaptureMeta {
  double delay_ms = 0.0;
  int precision_bits = 0;

  friend bool operator==(const CaptureMeta&, const CaptureMeta&) = default;
};

// Time-ordered measurements taken by a single node. Sequence numbers are
// strictly increasing.
struct MeasurementTrace {
  std::string node_id;
  std::vector<Sample> samples;
  CaptureMeta meta;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }

  std::vector<int> levels() const;
  std::vector<std::uint32_t> seqs() const;

  // First `count` samples.
  MeasurementTrace prefix(std::size_t count) const;
  // Samples [offset, offset + count).
  MeasurementTrace window(std::size_t offset, std::size_t count) const;

  friend bool operator==(const MeasurementTrace&,
                         const MeasurementTrace&) = default;
};

// Builds a trace with sequence numbers first_seq, first_seq + 1, ...
MeasurementTrace make_trace(std::string node_id, std::span<const int> levels,
                            FrameType frame = FrameType::kObs,
                            std::uint32_t first_seq = 1);

// Throws unless seqs are strictly increasing.
void check_trace(const MeasurementTrace& trace);

// True when both traces carry identical sequence numbers.
bool aligned(const MeasurementTrace& a, const MeasurementTrace& b);

}  // namespace pke
