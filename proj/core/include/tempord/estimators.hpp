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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tempord/graph.hpp"
#include "tempord/partial_order.hpp"
#include "tempord/puv_matrix.hpp"

namespace tempord {

// Every estimator takes an optional node subset (empty = all nodes). Nodes
// outside the subset are left incomparable; experiments pass the non-seed
// nodes.

/// Bins of the given ordering (oldest first) as a partial order on 0..n-1.
PartialOrder order_from_bins(std::size_t n, const std::vector<std::vector<NodeId>>& bins);

/// Sorts by score, descending, ties by ascending id, and cuts consecutive
/// bins of bin_size nodes. bin_size = 1 gives a total order on the subset.
PartialOrder sort_by_scores(std::size_t n, std::span<const double> scores, std::size_t bin_size,
                            std::span<const NodeId> nodes = {});

/// sort_by_scores on p_u = sum over the subset of p(u,v).
PartialOrder sort_by_puv_sum(const PuvMatrix& m, std::size_t bin_size,
                             std::span<const NodeId> nodes = {});

/// {(u,v) : p(u,v) > tau}, closed. At tau = 1 the pairs with p(u,v) = 1 are
/// kept. Throws CycleError when the matrix is inconsistent.
PartialOrder puv_threshold(const PuvMatrix& m, double tau, std::span<const NodeId> nodes = {});

/// Descending degree. Nodes of equal degree always share a bin; a bin closes
/// once it holds at least bin_size nodes and the degree changes.
PartialOrder sort_by_degree(const Graph& h, std::size_t bin_size,
                            std::span<const NodeId> nodes = {});

/// Repeatedly takes the minimum-degree nodes as the youngest cluster.
PartialOrder peel_by_degree(const Graph& h, std::span<const NodeId> nodes = {});

/// (u,v) when |N(v) \ N(u)| <= r_slack and deg u >= deg v, unless (v,u)
/// qualifies too. Pairs are added by descending deg u and any pair that
/// would close a cycle is dropped. The result is closed.
PartialOrder sort_by_neighborhood(const Graph& h, double r_slack,
                                  std::span<const NodeId> nodes = {});

/// Repeatedly takes as the youngest cluster the nodes u whose neighbourhood
/// is covered by another present node v, |N(u) \ N(v)| <= r_slack. Stops when
/// at most stop_size nodes are left or nothing can be peeled; the remainder
/// is the oldest cluster.
PartialOrder peel_by_neighborhood(const Graph& h, double r_slack, std::size_t stop_size = 0,
                                  std::span<const NodeId> nodes = {});

enum class EstimatorKind {
  sort_by_puv_sum,
  puv_threshold,
  sort_by_degree,
  peel_by_degree,
  sort_by_neighborhood,
  peel_by_neighborhood,
};

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::sort_by_puv_sum;
  std::size_t bin_size = 1;
  double tau = 0.5;
  double r_slack = 0.0;
  std::size_t stop_size = 0;

  /// e.g. "sort-by-puv-sum:5", "puv-threshold:0.9", "peel-by-degree",
  /// "sort-by-neighborhood:1".
  static EstimatorConfig parse(std::string_view text);
  std::string label() const;
  bool needs_puv() const noexcept {
    return kind == EstimatorKind::sort_by_puv_sum || kind == EstimatorKind::puv_threshold;
  }
};

struct EstimatorInput {
  const Graph* graph = nullptr;
  const PuvMatrix* puv = nullptr;         // dense estimates
  const std::vector<double>* scores = nullptr;  // p_u when no dense matrix
  std::span<const NodeId> nodes;
};

PartialOrder run_estimator(const EstimatorConfig& config, const EstimatorInput& input);

}  // namespace tempord
