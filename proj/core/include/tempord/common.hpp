// Copyright 2026 The tempord Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tempord {

using NodeId = std::uint32_t;

enum class ErrorKind {
  contract,     // precondition violated by the caller
  domain,       // parameter outside its mathematical domain
  cycle,        // relation is not acyclic
  guard,        // size guard of an exhaustive routine exceeded
  infeasible,   // optimisation problem has no feasible point
  numerical,
  parse,
  solver,
  io,
  empty_reference,   // ground truth has no comparable pair
  no_common_pairs,   // estimate and ground truth share no comparable pair
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a relation that must be acyclic is not. Carries one cycle,
/// listed so that each node is older than the next and the last is older
/// than the first.
class CycleError : public Error {
 public:
  CycleError(std::vector<NodeId> cycle, const std::string& message)
      : Error(ErrorKind::cycle, message), cycle_(std::move(cycle)) {}

  const std::vector<NodeId>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<NodeId> cycle_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const char* message) {
  if (!condition) fail(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

constexpr std::size_t pair_count(std::size_t n) noexcept {
  return n < 2 ? 0 : n * (n - 1) / 2;
}

}  // namespace tempord
