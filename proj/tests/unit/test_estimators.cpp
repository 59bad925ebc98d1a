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

#include <numeric>

#include "oracles.hpp"
#include "tempord/estimators.hpp"
#include "tempord/exact.hpp"

using namespace tempord;

namespace {

PuvMatrix random_consistent_matrix(std::size_t n, Rng& rng) {
  // p from a noisy latent score, so thresholding stays acyclic often enough
  std::vector<double> score(n);
  for (auto& s : score) s = uniform01(rng);
  PuvMatrix m(n, 0);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) {
      const double d = score[a] - score[b];
      m.set(a, b, 1.0 / (1.0 + std::exp(-8.0 * d)));
    }
  return m;
}

Graph star(std::size_t leaves) {
  Graph g(leaves + 1, 0);
  for (NodeId l = 1; l <= leaves; ++l) g.add_edge(0, l);
  return g;
}

void expect_valid(const PartialOrder& po) {
  EXPECT_TRUE(po.is_transitively_closed());
  for (NodeId a = 0; a < po.n(); ++a) {
    EXPECT_FALSE(po.precedes(a, a));
    for (NodeId b = 0; b < po.n(); ++b)
      if (po.precedes(a, b)) EXPECT_FALSE(po.precedes(b, a));
  }
}

}  // namespace

TEST(SortByPuvSum, OneBinPerNodeIsTotal) {
  Rng rng(1);
  const auto m = random_consistent_matrix(10, rng);
  const auto po = sort_by_puv_sum(m, 1);
  EXPECT_EQ(po.size(), 45u);
  EXPECT_EQ(sort_by_puv_sum(m, 10).size(), 0u);
}

TEST(SortByPuvSum, FollowsExactProbabilities) {
  Graph g(5, 3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  g.add_edge(1, 3);
  const auto m = exact_puv(g, 0.2, 0.0);
  const std::vector<NodeId> nodes{3, 4};
  const auto po = sort_by_puv_sum(m, 1, nodes);
  EXPECT_TRUE(po.precedes(3, 4));
  EXPECT_EQ(po.size(), 1u);
}

TEST(SortByPuvSum, BinDensityOnFortyNodes) {
  // 8 bins of 5 on 40 nodes: 1 - 8 C(5,2) / C(40,2)
  Rng rng(2);
  const auto m = random_consistent_matrix(40, rng);
  const auto po = sort_by_puv_sum(m, 5);
  std::vector<NodeId> seq(40);
  std::iota(seq.begin(), seq.end(), NodeId{0});
  const auto truth = PartialOrder::from_sequence(40, seq);
  EXPECT_NEAR(density(po, truth), 1.0 - 80.0 / 780.0, 1e-12);
  EXPECT_NEAR(1.0 - 80.0 / 780.0, 0.897, 5e-4);
}

TEST(SortByPuvSum, FinerBinsNeverLoseDensity) {
  Rng rng(3);
  const auto m = random_consistent_matrix(23, rng);
  std::vector<NodeId> seq(23);
  std::iota(seq.begin(), seq.end(), NodeId{0});
  const auto truth = PartialOrder::from_sequence(23, seq);
  double last = 1.0;
  for (std::size_t c = 1; c <= 23; ++c) {
    const double d = density(sort_by_puv_sum(m, c), truth);
    EXPECT_LE(d, last + 1e-15);
    last = d;
  }
}

TEST(SortByPuvSum, TiesGoToSmallerIds) {
  const PuvMatrix m(4, 0);  // everything 0.5
  const auto po = sort_by_puv_sum(m, 1);
  EXPECT_TRUE(po.precedes(0, 1));
  EXPECT_TRUE(po.precedes(2, 3));
}

TEST(SortByScores, RankInvariance) {
  Rng rng(4);
  std::vector<double> s(15);
  for (auto& x : s) x = uniform01(rng);
  std::vector<double> shifted(s);
  for (auto& x : shifted) x = 3.0 * x + 7.0;
  EXPECT_EQ(sort_by_scores(15, s, 4), sort_by_scores(15, shifted, 4));
}

TEST(PuvThreshold, StrictInequalityAndForcedPairs) {
  PuvMatrix m(3, 0);
  m.set(0, 1, 0.5);
  m.set(0, 2, 1.0);
  m.set(1, 2, 0.95);
  const auto half = puv_threshold(m, 0.5);
  EXPECT_FALSE(half.comparable(0, 1));
  EXPECT_TRUE(half.precedes(0, 2));
  const auto one = puv_threshold(m, 1.0);
  EXPECT_EQ(one.size(), 1u);
  EXPECT_TRUE(one.precedes(0, 2));
}

TEST(PuvThreshold, MonotoneInTau) {
  Rng rng(5);
  const auto m = random_consistent_matrix(20, rng);
  for (double t1 : {0.5, 0.6, 0.8}) {
    const double t2 = t1 + 0.15;
    const auto a = puv_threshold(m, t1);
    const auto b = puv_threshold(m, t2);
    for (auto [p, q] : b.pairs())
      if (m(p, q) > t2) EXPECT_TRUE(a.precedes(p, q));
  }
}

TEST(PuvThreshold, InconsistentMatrixIsACycle) {
  PuvMatrix m(3, 0);
  m.set(0, 1, 0.9);
  m.set(1, 2, 0.9);
  m.set(2, 0, 0.9);
  EXPECT_THROW(puv_threshold(m, 0.8), CycleError);
}

TEST(SortByDegree, RegularGraphIsOneBin) {
  Graph ring(6, 0);
  for (NodeId a = 0; a < 6; ++a) ring.add_edge(a, (a + 1) % 6);
  EXPECT_EQ(sort_by_degree(ring, 1).size(), 0u);
  const auto s = sort_by_degree(star(4), 1);
  for (NodeId l = 1; l <= 4; ++l) EXPECT_TRUE(s.precedes(0, l));
  EXPECT_EQ(s.size(), 4u);
}

TEST(PeelByDegree, PathStarCompleteAndEmpty) {
  Graph path(4, 0);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  path.add_edge(2, 3);
  const auto c = to_clusters(peel_by_degree(path));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.clusters.back(), (std::vector<NodeId>{0, 3}));
  EXPECT_EQ(peel_by_degree(Graph(5, 0)).size(), 0u);
  EXPECT_EQ(peel_by_degree(complete_graph(5)).size(), 0u);
}

TEST(SortByNeighborhood, ContainmentAndTwins) {
  Graph g(5, 0);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  g.add_edge(1, 2);
  g.add_edge(1, 3);
  g.add_edge(4, 2);  // N(4) = {2} inside N(0) = N(1) = {2,3}
  const auto po = sort_by_neighborhood(g, 0.0);
  EXPECT_TRUE(po.precedes(0, 4));
  EXPECT_TRUE(po.precedes(1, 4));
  EXPECT_FALSE(po.comparable(0, 1));  // twins
  expect_valid(po);
}

TEST(SortByNeighborhood, SlackNeverBreaksInvariants) {
  Rng rng(6);
  for (int rep = 0; rep < 20; ++rep) {
    const Graph g = oracle::random_graph(25, 0, 0.2, rng);
    expect_valid(sort_by_neighborhood(g, 1.0 + static_cast<double>(rep % 3)));
  }
}

TEST(PeelByNeighborhood, StarAndEdgeless) {
  const auto c = to_clusters(peel_by_neighborhood(star(4), 0.0));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.clusters[0], std::vector<NodeId>{0});
  EXPECT_EQ(peel_by_neighborhood(Graph(6, 0), 0.0).size(), 0u);
}

TEST(PeelByNeighborhood, StopSizeLeavesOldestCluster) {
  Graph path(6, 0);
  for (NodeId a = 0; a + 1 < 6; ++a) path.add_edge(a, a + 1);
  const auto c = to_clusters(peel_by_neighborhood(path, 0.0, 4));
  EXPECT_GE(c.clusters.front().size(), 1u);
  EXPECT_LE(c.clusters.front().size(), 4u);
}

TEST(Estimators, AllOutputsAreValidPartialOrders) {
  Rng rng(7);
  const Graph g = oracle::random_graph(30, 4, 0.15, rng);
  const auto m = random_consistent_matrix(30, rng);
  std::vector<NodeId> nodes;
  for (NodeId a = 4; a < 30; ++a) nodes.push_back(a);
  for (const char* name : {"sort-by-puv-sum:1", "sort-by-puv-sum:5", "puv-threshold:0.7",
                           "sort-by-degree:1", "sort-by-degree:4", "peel-by-degree",
                           "sort-by-neighborhood:0", "sort-by-neighborhood:1",
                           "peel-by-neighborhood:0", "peel-by-neighborhood:1"}) {
    const auto cfg = EstimatorConfig::parse(name);
    EstimatorInput in;
    in.graph = &g;
    in.puv = &m;
    in.nodes = nodes;
    const auto po = run_estimator(cfg, in);
    expect_valid(po);
    for (NodeId s = 0; s < 4; ++s)
      for (NodeId b = 0; b < 30; ++b) EXPECT_FALSE(po.comparable(s, b)) << name;
    EXPECT_EQ(EstimatorConfig::parse(cfg.label()).label(), cfg.label());
  }
}

TEST(EstimatorConfig, RejectsBadArguments) {
  EXPECT_THROW(EstimatorConfig::parse("sort-by-puv-sum:0"), Error);
  EXPECT_THROW(EstimatorConfig::parse("puv-threshold:0.3"), Error);
  EXPECT_THROW(EstimatorConfig::parse("magic"), Error);
  EXPECT_THROW(EstimatorConfig::parse("sort-by-degree:x"), Error);
}
