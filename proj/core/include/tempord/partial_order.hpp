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
#include <utility>
#include <vector>

#include "tempord/bitrow.hpp"
#include "tempord/common.hpp"

namespace tempord {

/// Ordered partition C_1 < ... < C_K of the node set, oldest cluster first.
struct OrderedClustering {
  std::vector<std::vector<NodeId>> clusters;

  std::size_t size() const noexcept { return clusters.size(); }
  /// cluster index (0 = oldest) of every node of 0..n-1. Throws if the clusters
  /// do not partition 0..n-1.
  std::vector<std::size_t> index_of(std::size_t n) const;

  friend bool operator==(const OrderedClustering&, const OrderedClustering&) = default;
};

/// Irreflexive antisymmetric relation on 0..n-1; (u,v) means u is older than v.
/// Transitivity holds after close(). Stored as successor bit rows.
class PartialOrder {
 public:
  PartialOrder() = default;
  explicit PartialOrder(std::size_t n);

  /// Total order given oldest first; ids not listed are left incomparable.
  static PartialOrder from_sequence(std::size_t n, const std::vector<NodeId>& oldest_first);
  /// Every node of C_i precedes every node of C_j for i < j.
  static PartialOrder from_clusters(std::size_t n, const OrderedClustering& c);

  std::size_t n() const noexcept { return succ_.size(); }

  /// Adds (u,v). Throws on u == v or if (v,u) is present.
  void add(NodeId u, NodeId v);
  void erase(NodeId u, NodeId v) { succ_[u].reset(v); }
  bool precedes(NodeId u, NodeId v) const { return succ_[u].test(v); }
  bool comparable(NodeId u, NodeId v) const {
    return succ_[u].test(v) || succ_[v].test(u);
  }

  /// Number of ordered pairs, which equals |K(σ)|.
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  /// Pairs in lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> pairs() const;

  const BitRow& successors(NodeId u) const { return succ_[u]; }
  /// Rows of predecessors (transpose).
  std::vector<BitRow> predecessor_rows() const;

  bool is_transitively_closed() const;
  /// Transitive closure. Throws CycleError naming one cycle.
  PartialOrder closed() const;

  friend bool operator==(const PartialOrder&, const PartialOrder&) = default;

 private:
  std::vector<BitRow> succ_;
};

inline PartialOrder transitive_close(const PartialOrder& po) { return po.closed(); }

/// A topological order of the relation, oldest first (ties by ascending id).
/// Throws CycleError when the relation has a cycle.
std::vector<NodeId> topological_order(const PartialOrder& po);

/// Layering of an acyclic relation: the nodes with nothing younger form the
/// youngest cluster, are removed, and so on. Returned oldest first.
OrderedClustering to_clusters(const PartialOrder& po);

/// |K(σ) ∩ K(ref)| / |K(ref)|. Throws ErrorKind::empty_reference when ref has
/// no comparable pair.
double density(const PartialOrder& sigma, const PartialOrder& ref);

/// Fraction of pairs comparable in both whose direction agrees. Throws
/// ErrorKind::no_common_pairs when no pair is comparable in both.
double precision(const PartialOrder& sigma, const PartialOrder& ref);

/// Count of pairs comparable in both relations.
std::size_t joint_comparable(const PartialOrder& sigma, const PartialOrder& ref);

/// Reference line for plots: a uniform guess orders a pair correctly half the time.
constexpr double random_guess_baseline(std::size_t /*n*/) noexcept { return 0.5; }

/// `u < v` lines.
void write_partial_order(std::ostream& out, const PartialOrder& po);
/// Reads `u < v` lines ('#' comments). n = 0 sizes the order from the ids.
PartialOrder read_partial_order(std::istream& in, std::size_t n = 0);

/// `node_id cluster_index` lines, cluster 1 = oldest.
void write_clustering(std::ostream& out, const OrderedClustering& c);
OrderedClustering read_clustering(std::istream& in);

}  // namespace tempord
