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
#include <stdexcept>
#include <string>

namespace pke {

// Base for every domain failure raised by the library. The CLI maps these to
// exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The observation sequence has zero probability under the model.
class ImpossibleObservationError : public Error {
 public:
  explicit ImpossibleObservationError(const std::string& what,
                                      std::size_t experiment = kNoIndex)
      : Error(what), experiment_(experiment) {}

  static constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);
  std::size_t experiment() const { return experiment_; }

 private:
  std::size_t experiment_;
};

// Syndrome decoding failed: the error pattern exceeds the code's capacity.
class UncorrectableError : public Error {
 public:
  explicit UncorrectableError(const std::string& what,
                              std::size_t block = static_cast<std::size_t>(-1))
      : Error(what), block_(block) {}

  std::size_t block() const { return block_; }

 private:
  std::size_t block_;
};

}  // namespace pke
