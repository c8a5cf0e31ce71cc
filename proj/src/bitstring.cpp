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

#include "pke/bitstring.hpp"

#include <algorithm>
#include <charconv>

#include "pke/error.hpp"

namespace pke {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) throw Error("bit value must be 0 or 1");
  }
}

BitString BitString::from_string(std::string_view text) {
  BitString out;
  for (char c : text) {
    if (c == '0' || c == '1') {
      out.push_back(c == '1');
    } else if (c != ' ' && c != '\t' && c != '\n' && c != '_') {
      throw Error(std::string("invalid bit character '") + c + "'");
    }
  }
  return out;
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes,
                                std::size_t bit_length) {
  if (bit_length > bytes.size() * 8) {
    throw Error("bit length exceeds byte payload");
  }
  BitString out;
  out.bits_.resize(bit_length);
  for (std::size_t i = 0; i < bit_length; ++i) {
    out.bits_[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
  }
  return out;
}

BitString BitString::from_len_hex(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw Error("missing ':' in len:hex");
  std::size_t length = 0;
  const auto len_part = text.substr(0, colon);
  auto [ptr, ec] =
      std::from_chars(len_part.data(), len_part.data() + len_part.size(), length);
  if (ec != std::errc() || ptr != len_part.data() + len_part.size() ||
      len_part.empty()) {
    throw Error("invalid length in len:hex");
  }
  const auto hex = text.substr(colon + 1);
  if (hex.size() != (length + 7) / 8 * 2) {
    throw Error("hex payload does not match declared bit length");
  }
  std::vector<std::uint8_t> bytes(hex.size() / 2);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    unsigned value = 0;
    auto [p, e] = std::from_chars(hex.data() + 2 * i, hex.data() + 2 * i + 2,
                                  value, 16);
    if (e != std::errc() || p != hex.data() + 2 * i + 2) {
      throw Error("invalid hex digit in len:hex");
    }
    bytes[i] = static_cast<std::uint8_t>(value);
  }
  BitString out = from_bytes(bytes, length);
  // Padding bits must be zero so that the encoding is canonical.
  if (out.to_bytes() != bytes) throw Error("non-zero padding bits in len:hex");
  return out;
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
  if (offset + length > bits_.size()) throw Error("bit slice out of range");
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                   bits_.begin() + static_cast<std::ptrdiff_t>(offset + length));
  return out;
}

BitString BitString::operator^(const BitString& other) const {
  if (other.size() != size()) throw Error("xor of bit strings of unequal length");
  BitString out(*this);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] ^= other.bits_[i];
  return out;
}

std::size_t BitString::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<std::uint8_t> BitString::to_bytes() const {
  std::vector<std::uint8_t> bytes((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return bytes;
}

std::string BitString::to_len_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = std::to_string(bits_.size());
  out.push_back(':');
  for (auto byte : to_bytes()) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xf]);
  }
  return out;
}

std::string BitString::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

}  // namespace pke
