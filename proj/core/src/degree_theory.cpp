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

#include "tempord/degree_theory.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

namespace tempord {

double expected_degree_recursion(std::size_t s, std::size_t t, double p, double r, double initial) {
  require(t >= s && s >= 1, ErrorKind::contract, "need t >= s >= 1");
  require(initial >= 0.0, ErrorKind::domain, "initial degree must be non-negative");
  double d = initial;
  for (std::size_t k = s; k < t; ++k) {
    const double kk = static_cast<double>(k);
    d = d * (1.0 + p / kk - r / (kk * kk)) + r / kk;
  }
  return d;
}

double arrival_degree_mean(std::size_t t, double p, double r, double mean_edges) {
  require(t >= 1, ErrorKind::contract, "need t >= 1");
  const double tt = static_cast<double>(t);
  return (p - r / tt) * (2.0 / tt) * mean_edges + r;
}

DegreeSimulation simulate_degrees(const DDParams& params, const Graph& seed_graph,
                                  const std::vector<std::size_t>& s_values,
                                  const std::vector<std::size_t>& t_values, std::size_t runs,
                                  std::uint64_t seed) {
  params.validate();
  require(runs >= 1, ErrorKind::contract, "need at least one run");
  for (auto s : s_values) require(s >= 1 && s <= params.n, ErrorKind::contract, "s outside 1..n");
  for (auto t : t_values)
    require(t >= params.n0 && t <= params.n, ErrorKind::contract, "t outside n0..n");
  DegreeSimulation sim;
  sim.s_values = s_values;
  sim.t_values = t_values;
  sim.runs = runs;
  const std::size_t S = s_values.size(), T = t_values.size();
  std::vector<double> deg_sum(S * T, 0.0);
  std::vector<double> edge_sum(params.n + 1, 0.0);
  std::vector<double> arrival_sum(params.n + 1, 0.0);
  std::vector<std::vector<std::size_t>> at_size(params.n + 1);
  for (std::size_t j = 0; j < T; ++j) at_size[t_values[j]].push_back(j);

  auto record = [&](const Graph& g) {
    const std::size_t t = g.num_nodes();
    edge_sum[t] += static_cast<double>(g.num_edges());
    if (t > params.n0) arrival_sum[t] += static_cast<double>(g.degree(static_cast<NodeId>(t - 1)));
    for (std::size_t j : at_size[t])
      for (std::size_t i = 0; i < S; ++i)
        if (s_values[i] <= t) deg_sum[i * T + j] += static_cast<double>(g.degree(static_cast<NodeId>(s_values[i] - 1)));
  };
  for (std::size_t run = 0; run < runs; ++run) {
    Rng rng(derive_seed(seed, "degree-run", run));
    record(seed_graph);
    generate(params, seed_graph, rng, record);
  }
  const double k = static_cast<double>(runs);
  sim.mean_degree.assign(S * T, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t j = 0; j < T; ++j)
      if (s_values[i] <= t_values[j]) sim.mean_degree[i * T + j] = deg_sum[i * T + j] / k;
  sim.mean_edges.assign(params.n + 1, std::numeric_limits<double>::quiet_NaN());
  sim.mean_arrival_degree.assign(params.n + 1, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t t = params.n0; t <= params.n; ++t) {
    sim.mean_edges[t] = edge_sum[t] / k;
    if (t > params.n0) sim.mean_arrival_degree[t] = arrival_sum[t] / k;
  }
  return sim;
}

ScalingReport scaling_check(const DDParams& params, const DegreeSimulation& sim,
                            std::size_t edge_fit_from) {
  ScalingReport rep;
  const std::size_t S = sim.s_values.size(), T = sim.t_values.size();
  std::vector<std::array<double, 4>> obs;  // log(t/s), log s, 1, log mean
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t j = 0; j < T; ++j) {
      const std::size_t s = sim.s_values[i], t = sim.t_values[j];
      const double mean = sim.degree(i, j);
      if (s > t || !(mean > 0.0)) continue;
      obs.push_back({std::log(static_cast<double>(t) / static_cast<double>(s)),
                     std::log(static_cast<double>(s)), 1.0, std::log(mean)});
      DegreeRow row;
      row.s = s;
      row.t = t;
      row.simulated_mean = mean;
      if (s > params.n0 && s - 1 < sim.mean_edges.size() && !std::isnan(sim.mean_edges[s - 1])) {
        const double init = arrival_degree_mean(s - 1, params.p, params.r, sim.mean_edges[s - 1]);
        row.recursion_value = expected_degree_recursion(s, t, params.p, params.r, init);
        row.ratio = mean / row.recursion_value;
      } else {
        row.recursion_value = std::numeric_limits<double>::quiet_NaN();
        row.ratio = std::numeric_limits<double>::quiet_NaN();
      }
      rep.rows.push_back(row);
    }
  require(obs.size() >= 3, ErrorKind::contract, "need at least three (s,t) points to fit");
  Eigen::MatrixXd X(obs.size(), 3);
  Eigen::VectorXd y(obs.size());
  for (std::size_t k = 0; k < obs.size(); ++k) {
    X(k, 0) = obs[k][0];
    X(k, 1) = obs[k][1];
    X(k, 2) = obs[k][2];
    y(k) = obs[k][3];
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  rep.t_exponent = beta(0);
  rep.s_exponent = beta(1);
  rep.constant = beta(2);
  rep.residual_rms = std::sqrt((X * beta - y).squaredNorm() / static_cast<double>(obs.size()));

  std::vector<std::pair<double, double>> pts;
  for (std::size_t t = std::max(edge_fit_from, params.n0); t < sim.mean_edges.size(); ++t)
    if (sim.mean_edges[t] > 0.0)
      pts.emplace_back(std::log(static_cast<double>(t)), std::log(sim.mean_edges[t]));
  if (pts.size() >= 2) {
    Eigen::MatrixXd A(pts.size(), 2);
    Eigen::VectorXd b(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      A(k, 0) = pts[k].first;
      A(k, 1) = 1.0;
      b(k) = pts[k].second;
    }
    rep.edge_slope = A.colPivHouseholderQr().solve(b)(0);
  }
  return rep;
}

void write_degree_report(std::ostream& out, const ScalingReport& report) {
  out << "s,t,simulated_mean,recursion_value,ratio\n";
  for (const auto& r : report.rows)
    out << r.s << ',' << r.t << ',' << r.simulated_mean << ',' << r.recursion_value << ',' << r.ratio << '\n';
}

}  // namespace tempord
