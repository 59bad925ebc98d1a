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
#include <vector>

#include "tempord/common.hpp"
#include "tempord/graph.hpp"
#include "tempord/puv_matrix.hpp"

namespace tempord {

/// Largest number of non-seed nodes the exhaustive routines accept.
inline constexpr std::size_t exact_max_free_nodes = 10;

/// Every feasible arrival order of the non-seed nodes with its log-probability
/// of producing h. Orders are stored flat, oldest first.
struct OrderProbabilityTable {
  std::size_t order_length = 0;
  std::vector<NodeId> orders;          // order_length entries per order
  std::vector<double> log_probability;

  std::size_t size() const noexcept { return log_probability.size(); }
  std::vector<NodeId> order(std::size_t i) const {
    return {orders.begin() + static_cast<std::ptrdiff_t>(i * order_length),
            orders.begin() + static_cast<std::ptrdiff_t>((i + 1) * order_length)};
  }
  /// log of the sum over all orders.
  double log_total() const;
};

/// Depth-first enumeration over removal sequences. Orders with a zero
/// likelihood step are skipped. Throws ErrorKind::guard above
/// exact_max_free_nodes non-seed nodes.
OrderProbabilityTable enumerate_orders(const Graph& h, double p, double r);

/// Subset recursion over the set of still-present non-seed nodes.
struct SubsetRecursion {
  std::vector<NodeId> free_nodes;   // non-seed ids; bit i of a mask = free_nodes[i]
  std::vector<double> log_down;     // log prob of building h from seed+S, per mask S
  std::vector<double> log_up;       // log prob of peeling h down to seed+S, per mask S
  double log_total() const { return log_down.back(); }
};

SubsetRecursion subset_recursion(const Graph& h, double p, double r);

/// Exact p(u,v) from the subset recursion. Throws ErrorKind::infeasible when
/// no order can produce h.
PuvMatrix exact_puv(const Graph& h, double p, double r);

/// Exact p(u,v) from a flat order table; used to cross-check exact_puv.
PuvMatrix puv_from_orders(const Graph& h, const OrderProbabilityTable& table);

}  // namespace tempord
