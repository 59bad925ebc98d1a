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
#include <functional>
#include <span>
#include <vector>

#include "tempord/common.hpp"
#include "tempord/graph.hpp"
#include "tempord/rng.hpp"

namespace tempord {

struct DDParams {
  double p = 0.5;        // retention probability of a copied edge
  double r = 0.0;        // expected number of extra edges per arrival
  std::size_t n = 0;     // final node count
  std::size_t n0 = 1;    // seed size

  /// Throws ErrorKind::domain when a parameter is out of range, including
  /// r / k > 1 for some growth step k in [n0, n).
  void validate() const;
};

struct GeneratedGraph {
  Graph graph;
  /// Arrival order, oldest first. Node ids equal arrival ranks, so this is the
  /// identity; kept explicit for callers that relabel.
  std::vector<NodeId> arrival;
};

/// Called after every arrival with the graph grown so far.
using GrowthObserver = std::function<void(const Graph&)>;

/// Grows seed_graph to params.n nodes. At size k the new node picks a uniform
/// parent, keeps each parent edge with probability p and links to every other
/// node (the parent included) with probability r / k.
GeneratedGraph generate(const DDParams& params, const Graph& seed_graph, Rng& rng,
                        const GrowthObserver& observer = {});

/// Log-probability that u is the parent of v, the youngest node of h.
/// N(u) is taken without v.
double log_parent_likelihood(const Graph& h, NodeId v, NodeId u, double p, double r);
double parent_likelihood(const Graph& h, NodeId v, NodeId u, double p, double r);

/// Log of w(h - v, h): the sum of parent likelihoods over all present u != v.
double log_step_likelihood(const Graph& h, NodeId v, double p, double r);
double step_likelihood(const Graph& h, NodeId v, double p, double r);

/// True when every non-seed node of a graph with `alive` nodes has a positive
/// step likelihood regardless of structure.
bool all_removable(std::size_t alive, double p, double r) noexcept;

/// Non-seed nodes with positive step likelihood, ascending.
std::vector<NodeId> removable_set(const Graph& h, double p, double r);

/// Incremental peeling of a fixed snapshot. Removal only flips flags and
/// updates degree counts, so reset() is O(n). Step likelihoods group the
/// parents that share no neighbour with v by degree, which makes one
/// evaluation cost O(sum of deg over N(v) + max degree).
class PeelingState {
 public:
  PeelingState(const Graph& h, double p, double r);
  PeelingState(Graph&&, double, double) = delete;

  void reset();

  const Graph& graph() const noexcept { return *h_; }
  std::size_t alive_count() const noexcept { return alive_list_.size(); }
  bool alive(NodeId u) const noexcept { return alive_[u] != 0; }
  std::span<const NodeId> alive_nodes() const noexcept { return alive_list_; }
  std::size_t degree(NodeId u) const noexcept { return deg_[u]; }
  std::size_t n0() const noexcept { return h_->n0(); }

  /// log w for removing v now. -inf when no parent can explain v.
  double log_step_likelihood(NodeId v);

  /// Same value computed parent by parent; reference for tests.
  double log_step_likelihood_naive(NodeId v) const;

  void remove(NodeId v);

  /// all_removable() at the current size.
  bool generic() const noexcept { return all_removable(alive_count(), p_, r_); }

 private:
  const Graph* h_;
  double p_, r_;
  double lp_, lq_;  // log p, log(1-p)
  std::vector<char> alive_;
  std::vector<NodeId> alive_list_;
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint32_t> deg_;
  std::vector<std::uint32_t> hist_;  // hist_[d] = alive nodes of degree d
  std::size_t max_deg_ = 0;
  // scratch
  std::vector<std::uint32_t> common_;
  std::vector<char> adj_v_;
  std::vector<std::uint32_t> sub_;
  std::vector<NodeId> touched_;
  std::vector<double> terms_;
};

/// log(sum(exp(x))) of a range; -inf for an empty range.
double log_sum_exp(std::span<const double> xs) noexcept;

/// log(exp(a) + exp(b)).
double log_add(double a, double b) noexcept;

}  // namespace tempord
