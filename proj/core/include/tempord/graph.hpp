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
#include <vector>

#include "tempord/common.hpp"
#include "tempord/rng.hpp"

namespace tempord {

/// Undirected simple graph over the id space 0..capacity()-1. Ids 0..n0-1 are
/// seed nodes. Deleted nodes keep their id slot; ids are never renumbered.
class Graph {
 public:
  Graph() = default;
  /// n nodes, no edges, the first n0 of them seeds.
  explicit Graph(std::size_t n, std::size_t n0 = 0);

  std::size_t capacity() const noexcept { return adj_.size(); }
  std::size_t num_nodes() const noexcept { return alive_count_; }
  std::size_t num_edges() const noexcept { return edge_count_; }
  std::size_t n0() const noexcept { return n0_; }
  void set_n0(std::size_t n0);

  bool contains(NodeId u) const noexcept { return u < adj_.size() && alive_[u]; }
  bool is_seed(NodeId u) const noexcept { return u < n0_; }
  bool has_edge(NodeId u, NodeId v) const;

  /// Sorted neighbour ids of u.
  std::span<const NodeId> neighbors(NodeId u) const { return adj_[u]; }
  std::size_t degree(NodeId u) const { return adj_[u].size(); }

  /// Present node ids in increasing order.
  std::vector<NodeId> nodes() const;

  /// Adds edge {u,v}. Returns false (and changes nothing) for a self-loop or
  /// an existing edge.
  bool add_edge(NodeId u, NodeId v);

  /// Appends a new node (id = capacity()) adjacent to the given ids, which must
  /// be sorted, distinct and present. Returns the new id.
  NodeId append_node(std::span<const NodeId> sorted_neighbors);

  /// Removes a non-seed node and its incident edges.
  void remove_node(NodeId v);

  /// Size of N(u) ∩ N(v); O(deg u + deg v).
  std::size_t common_neighbors(NodeId u, NodeId v) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<std::vector<NodeId>> adj_;
  std::vector<char> alive_;
  std::size_t alive_count_ = 0;
  std::size_t edge_count_ = 0;
  std::size_t n0_ = 0;
};

/// Copy of g with v removed.
Graph delete_node(const Graph& g, NodeId v);

/// Bijection on node ids that fixes the seed ids.
class Permutation {
 public:
  Permutation() = default;
  /// Validates that mapping is a bijection on 0..size-1 fixing 0..n0-1.
  Permutation(std::vector<NodeId> mapping, std::size_t n0);

  static Permutation identity(std::size_t n, std::size_t n0 = 0);
  /// Uniformly random permutation that fixes the first n0 ids.
  static Permutation random(std::size_t n, std::size_t n0, Rng& rng);

  std::size_t size() const noexcept { return map_.size(); }
  std::size_t n0() const noexcept { return n0_; }
  NodeId operator()(NodeId u) const { return map_[u]; }
  const std::vector<NodeId>& mapping() const noexcept { return map_; }

  Permutation inverse() const;
  /// (outer ∘ inner)(u) = outer(inner(u)).
  friend Permutation compose(const Permutation& outer, const Permutation& inner);

 private:
  std::vector<NodeId> map_;
  std::size_t n0_ = 0;
};

/// Relabels g: edge {u,v} becomes {s(u),s(v)}; node u present iff s(u) present.
Graph apply_permutation(const Graph& g, const Permutation& s);

/// G(n0, p0) with every node a seed.
Graph erdos_renyi_seed(std::size_t n0, double p0, Rng& rng);

/// Complete graph on n nodes, all seeds.
Graph complete_graph(std::size_t n);

struct EdgeListStats {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

/// Reads `u v` lines with integer ids. Lines starting with '#' are comments,
/// except the headers `# nodes N` and `# n0 K`. Without a nodes header the id
/// space is 0..max id. Self-loops and repeated edges are dropped and counted.
Graph read_edge_list(std::istream& in, EdgeListStats* stats = nullptr);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace tempord
