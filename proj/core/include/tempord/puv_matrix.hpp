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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tempord/common.hpp"

namespace tempord {

/// p(u,v) = probability that u arrived before v. One value is stored per
/// unordered pair, always the one >= 0.5, so p(u,v) + p(v,u) == 1 holds
/// exactly in floating point. Seed conventions: two seeds 0.5, a seed before
/// a non-seed 1.
class PuvMatrix {
 public:
  PuvMatrix() = default;
  /// Seed pairs per convention, every other pair 0.5.
  PuvMatrix(std::size_t n, std::size_t n0);

  std::size_t n() const noexcept { return n_; }
  std::size_t n0() const noexcept { return n0_; }

  /// Diagonal returns 0.
  double operator()(NodeId u, NodeId v) const noexcept {
    if (u == v) return 0.0;
    if (u < v) {
      const double s = data_[index(u, v)];
      return s >= 0.0 ? s : 1.0 + s;
    }
    const double s = data_[index(v, u)];
    return s >= 0.0 ? 1.0 - s : -s;
  }

  /// Sets p(u,v) = x and p(v,u) = 1 - x.
  void set(NodeId u, NodeId v, double x);

  /// Sum of p(u,v) over v in `nodes` (v != u).
  double row_sum(NodeId u, std::span<const NodeId> nodes) const;
  /// Row sums over all nodes.
  std::vector<double> row_sums() const;

  /// Free-form origin, e.g. "exact" or "sampled local-unif k=1000".
  std::string provenance;

 private:
  std::size_t index(std::size_t lo, std::size_t hi) const noexcept {
    return lo * (2 * n_ - lo - 1) / 2 + (hi - lo - 1);
  }

  std::size_t n_ = 0;
  std::size_t n0_ = 0;
  // p(lo,hi) when >= 0.5, otherwise -p(hi,lo)
  std::vector<double> data_;
};

/// Header `node,0,1,...`; row u holds p(u,v); the diagonal cell is empty.
void write_puv_csv(std::ostream& out, const PuvMatrix& m);
/// Reads the CSV back. Off-diagonal pairs must be complementary within 1e-9.
PuvMatrix read_puv_csv(std::istream& in, std::size_t n0 = 0);

}  // namespace tempord
