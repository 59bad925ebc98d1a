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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tempord/partial_order.hpp"
#include "tempord/puv_matrix.hpp"
#include "tempord/rng.hpp"
#include "tempord/simplex.hpp"

namespace tempord {

inline constexpr std::size_t poset_max_nodes = 6;

/// A labelled strict partial order on at most 6 nodes: bit v of succ[u] set
/// when u precedes v.
using SmallPoset = std::array<std::uint8_t, poset_max_nodes>;

/// All labelled posets on n nodes (n <= 6), closed and antisymmetric.
/// Cached after the first call.
const std::vector<SmallPoset>& enumerate_posets(std::size_t n);

struct PrecisionProgram {
  const PuvMatrix* puv = nullptr;
  double epsilon = 1.0;  // minimum density, in (0, 1]

  /// ceil(epsilon * C(n,2)) with a small tolerance; throws when below 1.
  std::size_t min_pairs() const;
  /// s = 1 / (epsilon * C(n,2))
  double cap() const;
};

struct IpSolution {
  PartialOrder order;
  double objective = 0.0;   // mean p over the ordered pairs
  std::size_t pairs = 0;
};

/// Exhaustive search over all posets (n <= 6). Ties go to more pairs, then to
/// the lexicographically smaller pair list.
IpSolution solve_ip_bruteforce(const PrecisionProgram& prog);

struct LpOptions {
  std::size_t max_nodes = 60;
  /// Add violated transitivity rows in rounds instead of all at once.
  bool lazy = true;
  std::size_t cuts_per_round = 200;
  std::size_t max_rounds = 200;
  SimplexOptions simplex;
};

struct LpRelaxation {
  /// y for ordered pair (u,v) at index u * n + v; diagonal zero.
  std::vector<double> y;
  double objective = 0.0;
  std::size_t transitivity_rows = 0;
  std::size_t rounds = 0;
};

/// max sum p y with 0 <= y <= s, sum y = 1, y_uv + y_vu <= s and
/// y_uv + y_vw - y_uw <= s over all triples.
LpRelaxation solve_lp(const PrecisionProgram& prog, const LpOptions& options = {});

/// Largest violation of any relaxation constraint by y.
double lp_violation(const PuvMatrix& m, double epsilon, const std::vector<double>& y);

struct CurvePoint {
  double epsilon = 0.0;
  double density = 0.0;
  double precision = 0.0;
  std::string kind;  // "exact-ip" or "lp-bound"
};

/// Exact points for n <= 6, LP bounds above.
std::vector<CurvePoint> optimal_curve(const PuvMatrix& m, const std::vector<double>& epsilons,
                                      const LpOptions& options = {});

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

struct Lemma1Report {
  std::size_t trials = 0;
  double lambda = 0.0;
  double bound = 0.0;  // 3 lambda
  double max_gap = 0.0;
  std::size_t violations = 0;
  PuvMatrix witness;   // perturbed matrix of the largest gap
};

/// Perturbs every pair by U(-lambda, lambda) (clamped to [0,1], complement
/// kept), solves both programs exactly and compares optima.
Lemma1Report lemma1_bound_check(const PuvMatrix& m, double epsilon, double lambda,
                                std::size_t trials, Rng& rng);

/// Copy of m restricted to `nodes` (renumbered 0..k-1 in the given order).
PuvMatrix restrict_matrix(const PuvMatrix& m, const std::vector<NodeId>& nodes);

}  // namespace tempord
