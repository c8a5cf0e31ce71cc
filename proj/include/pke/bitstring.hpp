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
#include <vector>

namespace pke {

// A string of bits with Hamming-metric semantics. Bits are stored one per
// byte (0 or 1); packing only happens at the serialization boundary.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length, bool value = false)
      : bits_(length, value ? 1 : 0) {}
  explicit BitString(std::vector<std::uint8_t> bits);

  // Parses "0101..." (whitespace ignored).
  static BitString from_string(std::string_view text);

  // Unpacks `bit_length` bits MSB-first from `bytes`.
  static BitString from_bytes(std::span<const std::uint8_t> bytes,
                              std::size_t bit_length);

  // Parses the `len:hex` wire form.
  static BitString from_len_hex(std::string_view text);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }
  void push_back(bool v) { bits_.push_back(v ? 1 : 0); }
  void append(const BitString& other);

  BitString slice(std::size_t offset, std::size_t length) const;

  // Bitwise XOR of equal-length strings.
  BitString operator^(const BitString& other) const;

  std::size_t popcount() const;

  // MSB-first packing, zero-padded in the final byte.
  std::vector<std::uint8_t> to_bytes() const;

  // `len:hex`, e.g. "10:ffc0" for ten set bits.
  std::string to_len_hex() const;

  std::string to_string() const;

  std::span<const std::uint8_t> raw() const { return bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace pke
