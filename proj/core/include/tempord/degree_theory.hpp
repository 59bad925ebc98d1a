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
#include <iosfwd>
#include <vector>

#include "tempord/dd_model.hpp"
#include "tempord/graph.hpp"

namespace tempord {

// Times are 1-based graph sizes: node s is the s-th arrival (id s-1) and
// deg_t(s) is its degree once the graph has t nodes.

/// E[deg_t(s)] from E[deg_s(s)] = initial by iterating
/// d <- d (1 + p/k - r/k^2) + r/k for k = s .. t-1.
double expected_degree_recursion(std::size_t s, std::size_t t, double p, double r, double initial);

/// E[deg_{t+1}(t+1)] = (p - r/t) (2/t) E(G_t) + r.
double arrival_degree_mean(std::size_t t, double p, double r, double mean_edges);

struct DegreeSimulation {
  std::vector<std::size_t> s_values, t_values;
  /// mean_degree[i * t_values.size() + j] = mean deg_{t_j}(s_i); NaN when t_j < s_i.
  std::vector<double> mean_degree;
  /// mean_edges[t] = mean E(G_t) for t = n0 .. n (index t).
  std::vector<double> mean_edges;
  /// mean_arrival_degree[t] = mean deg_t(t) for t = n0+1 .. n.
  std::vector<double> mean_arrival_degree;
  std::size_t runs = 0;

  double degree(std::size_t i, std::size_t j) const { return mean_degree[i * t_values.size() + j]; }
};

/// Grows `runs` independent graphs from seed_graph; run i uses the stream
/// derive_seed(seed, "degree-run", i).
DegreeSimulation simulate_degrees(const DDParams& params, const Graph& seed_graph,
                                  const std::vector<std::size_t>& s_values,
                                  const std::vector<std::size_t>& t_values, std::size_t runs,
                                  std::uint64_t seed);

struct DegreeRow {
  std::size_t s = 0, t = 0;
  double simulated_mean = 0.0;
  double recursion_value = 0.0;
  double ratio = 0.0;
};

struct ScalingReport {
  double t_exponent = 0.0;  // coefficient of log(t/s)
  double s_exponent = 0.0;  // coefficient of log s
  double constant = 0.0;
  double residual_rms = 0.0;
  double edge_slope = 0.0;  // d log E(G_t) / d log t
  std::vector<DegreeRow> rows;
};

/// Fits log E[deg_t(s)] = a log(t/s) + b log s + c by least squares, fits the
/// edge growth exponent over t >= edge_fit_from, and lists simulation against
/// the recursion seeded with arrival_degree_mean.
ScalingReport scaling_check(const DDParams& params, const DegreeSimulation& sim,
                            std::size_t edge_fit_from = 0);

/// Header `s,t,simulated_mean,recursion_value,ratio`.
void write_degree_report(std::ostream& out, const ScalingReport& report);

}  // namespace tempord
