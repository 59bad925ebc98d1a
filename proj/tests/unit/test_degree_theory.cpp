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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "tempord/degree_theory.hpp"

using namespace tempord;

TEST(Recursion, MatchesDirectIteration) {
  const double p = 0.6, r = 0.5;
  double d = 3.0;
  for (std::size_t k = 10; k < 40; ++k) d = d * (1 + p / k - r / (double(k) * k)) + r / k;
  EXPECT_NEAR(expected_degree_recursion(10, 40, p, r, 3.0), d, 1e-12);
  EXPECT_EQ(expected_degree_recursion(7, 7, p, r, 2.5), 2.5);
}

TEST(Recursion, ArrivalDegreeByParentAverage) {
  // t nodes, E edges: E over parents of p deg(u) + r (t - deg(u)) / t
  const double p = 0.4, r = 1.0, E = 30.0;
  const std::size_t t = 12;
  const double mean_deg = 2 * E / t;
  EXPECT_NEAR(arrival_degree_mean(t, p, r, E), p * mean_deg + r * (t - mean_deg) / t, 1e-12);
}

TEST(Simulation, MeansFollowExactRecursions) {
  const DDParams prm{0.6, 0.5, 80, 6};
  const std::vector<std::size_t> s_values{8, 15};
  const std::vector<std::size_t> t_values{20, 40, 80};
  const auto sim = simulate_degrees(prm, complete_graph(6), s_values, t_values, 4000, 11);
  EXPECT_EQ(sim.runs, 4000u);
  EXPECT_EQ(sim.mean_edges[6], 15.0);
  // arrival degree identity holds in expectation at every size
  for (std::size_t t : {10, 30, 79}) {
    const double expect = arrival_degree_mean(t, prm.p, prm.r, sim.mean_edges[t]);
    EXPECT_NEAR(sim.mean_arrival_degree[t + 1], expect, 0.05 * expect + 0.05) << t;
  }
  // degree of node s at later sizes, seeded by its simulated arrival degree
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    const std::size_t s = s_values[i];
    const double start = sim.mean_arrival_degree[s];
    for (std::size_t j = 0; j < t_values.size(); ++j) {
      const double rec = expected_degree_recursion(s, t_values[j], prm.p, prm.r, start);
      EXPECT_NEAR(sim.degree(i, j), rec, 0.06 * rec) << s << " " << t_values[j];
    }
  }
}

TEST(Simulation, Deterministic) {
  const DDParams prm{0.5, 0.5, 40, 4};
  const auto a = simulate_degrees(prm, complete_graph(4), {5}, {40}, 50, 3);
  const auto b = simulate_degrees(prm, complete_graph(4), {5}, {40}, 50, 3);
  // unused slots hold NaN, so compare bits
  auto same = [](const std::vector<double>& x, const std::vector<double>& y) {
    return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
  };
  EXPECT_TRUE(same(a.mean_degree, b.mean_degree));
  EXPECT_TRUE(same(a.mean_edges, b.mean_edges));
}

TEST(Scaling, RecoversPlantedExponents) {
  const DDParams prm{0.7, 0.5, 400, 10};
  DegreeSimulation sim;
  sim.s_values = {20, 40, 80};
  sim.t_values = {100, 200, 300, 400};
  sim.runs = 1;
  sim.mean_edges.assign(401, 0.0);
  sim.mean_arrival_degree.assign(401, 1.0);
  for (std::size_t t = 10; t <= 400; ++t) sim.mean_edges[t] = 3.0 * std::pow(double(t), 1.4);
  for (std::size_t s : sim.s_values)
    for (std::size_t t : sim.t_values)
      sim.mean_degree.push_back(2.0 * std::pow(double(t) / s, 0.7) * std::pow(double(s), 0.4));
  const auto rep = scaling_check(prm, sim, 50);
  EXPECT_NEAR(rep.t_exponent, 0.7, 1e-9);
  EXPECT_NEAR(rep.s_exponent, 0.4, 1e-9);
  EXPECT_NEAR(rep.constant, std::log(2.0), 1e-9);
  EXPECT_NEAR(rep.edge_slope, 1.4, 1e-9);
  EXPECT_LT(rep.residual_rms, 1e-9);
  EXPECT_EQ(rep.rows.size(), 12u);
  std::ostringstream out;
  write_degree_report(out, rep);
  EXPECT_EQ(out.str().rfind("s,t,simulated_mean,recursion_value,ratio", 0), 0u);
}
