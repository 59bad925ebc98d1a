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
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tempord/common.hpp"
#include "tempord/dd_model.hpp"
#include "tempord/graph.hpp"
#include "tempord/partial_order.hpp"
#include "tempord/puv_matrix.hpp"
#include "tempord/rng.hpp"

namespace tempord {

enum class Scheme {
  local_unif,     // uniform over the candidates
  high_prob,      // proportional to the step likelihood
  accept_reject,  // uniform over all nodes, rejecting non-candidates
};

const char* to_string(Scheme s) noexcept;
Scheme parse_scheme(std::string_view name);

/// Known pairs (u older than v), transitively closed. While v is present u
/// cannot be removed.
class TrainingPairs {
 public:
  TrainingPairs() = default;
  /// Closes `pairs`; throws CycleError on a cycle and a contract error when
  /// a seed is claimed younger than some node.
  TrainingPairs(const PartialOrder& pairs, std::size_t n0);

  bool empty() const noexcept { return count_ == 0; }
  std::size_t size() const noexcept { return count_; }
  const PartialOrder& order() const noexcept { return order_; }
  /// u with (u, v) in the relation.
  std::span<const NodeId> older_than(NodeId v) const { return older_[v]; }
  /// |{v : (u, v)}|
  std::uint32_t younger_count(NodeId u) const { return younger_count_[u]; }

 private:
  PartialOrder order_;
  std::vector<std::vector<NodeId>> older_;
  std::vector<std::uint32_t> younger_count_;
  std::size_t count_ = 0;
};

struct SamplePath {
  std::vector<NodeId> removed;  // youngest first
  double log_weight = 0.0;      // -inf when the path hit a dead end
  /// Arrival order, oldest first (reverse of removal).
  std::vector<NodeId> arrival() const { return {removed.rbegin(), removed.rend()}; }
};

/// One backward chain at a time over a fixed snapshot; reuses its buffers.
class PathSampler {
 public:
  PathSampler(const Graph& h, double p, double r, Scheme scheme,
              const TrainingPairs* restriction = nullptr);
  // keeps a pointer to h
  PathSampler(Graph&&, double, double, Scheme, const TrainingPairs* = nullptr) = delete;

  /// Peels h down to the seed. Returns the log importance weight, -inf when
  /// no candidate has positive likelihood before the seed is reached.
  double run(Rng& rng);

  /// Removal sequence of the last run, youngest first.
  std::span<const NodeId> removed() const noexcept { return removed_; }

  /// Candidate set of the current state (after reset, the first step).
  std::vector<NodeId> first_step_candidates();

 private:
  void reset();
  void drop_eligible(NodeId v);
  void add_eligible(NodeId v);
  // Fills cand_/cand_lw_ for the current step; returns log of the sum of w.
  double compute_candidates(bool need_all);

  const Graph* h_;
  Scheme scheme_;
  const TrainingPairs* restriction_;
  PeelingState state_;
  std::vector<std::uint32_t> nr_;
  std::vector<NodeId> eligible_;
  std::vector<std::uint32_t> epos_;
  std::vector<char> in_eligible_;
  std::vector<NodeId> removed_;
  std::vector<NodeId> cand_;
  std::vector<double> cand_lw_;
  std::vector<double> node_lw_;
};

SamplePath sample_path(const Graph& h, double p, double r, Scheme scheme,
                       const TrainingPairs* restriction, Rng& rng);

struct SamplerOptions {
  Scheme scheme = Scheme::local_unif;
  std::uint64_t paths = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Paths per block. Blocks are merged in index order, so results do not
  /// depend on the thread count.
  std::size_t block_size = 1024;
  /// Full pair matrix up to this many nodes; above it only scores and the
  /// requested pairs are kept.
  std::size_t dense_limit = 5000;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  /// Accumulate pair probabilities at all (false: weights only).
  bool accumulate = true;

  std::string checkpoint_path;
  std::uint64_t checkpoint_every = 0;  // in blocks; 0 = never
  bool resume = false;
  std::uint64_t stop_after_blocks = 0;  // 0 = run to completion
};

struct WeightSummary {
  std::uint64_t paths = 0;
  std::uint64_t zero_paths = 0;
  double log_sum = -std::numeric_limits<double>::infinity();     // log sum W
  double log_sum_sq = -std::numeric_limits<double>::infinity();  // log sum W^2

  double log_mean() const;
  /// Mean of W and its standard error, in linear scale.
  double mean() const;
  double standard_error() const;
  /// (sum W)^2 / sum W^2
  double effective_sample_size() const;
};

struct PuvEstimate {
  bool dense = true;
  bool complete = true;
  PuvMatrix matrix;  // dense mode
  /// p_u = sum over all v of p(u,v), for every node id.
  std::vector<double> scores;
  std::vector<std::tuple<NodeId, NodeId, double>> pairs;  // requested pairs
  WeightSummary weights;
};

/// Self-normalised importance sampling estimate of p(u,v) over
/// options.paths independent chains. Path i uses the stream
/// derive_seed(options.seed, "path", i).
PuvEstimate estimate_puv(const Graph& h, double p, double r, const SamplerOptions& options,
                         const TrainingPairs* restriction = nullptr);

/// Mean of the path weights, an unbiased estimate of the total probability
/// of all arrival orders.
WeightSummary weighted_mean_check(const Graph& h, double p, double r, Scheme scheme,
                                  std::uint64_t paths, std::uint64_t seed,
                                  unsigned threads = 1);

}  // namespace tempord
