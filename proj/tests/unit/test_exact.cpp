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

#include "oracles.hpp"
#include "tempord/exact.hpp"

using namespace tempord;

namespace {

Graph asymmetric_five() {
  Graph g(5, 3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  g.add_edge(1, 3);
  return g;
}

}  // namespace

TEST(Exact, AsymmetricGraphOrderProbabilities) {
  // brute force: P(3 then 4) = 0.06912, P(4 then 3) = 0.0512, ratio 27/47
  const auto ref = oracle::order_probs(asymmetric_five(), 0.2, 0.0);
  ASSERT_EQ(ref.size(), 2u);
  EXPECT_NEAR(ref[0].prob, 0.06912, 1e-12);
  EXPECT_NEAR(ref[1].prob, 0.0512, 1e-12);

  const auto t = enumerate_orders(asymmetric_five(), 0.2, 0.0);
  ASSERT_EQ(t.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto o = t.order(i);
    const double expect = o[0] == 3 ? 0.06912 : 0.0512;
    EXPECT_NEAR(std::exp(t.log_probability[i]), expect, 1e-12);
  }
  const auto m = exact_puv(asymmetric_five(), 0.2, 0.0);
  EXPECT_NEAR(m(3, 4), 27.0 / 47.0, 1e-12);
  EXPECT_NEAR(m(4, 3), 20.0 / 47.0, 1e-12);
}

TEST(Exact, SeedGraphAloneHasOneEmptyOrder) {
  const auto t = enumerate_orders(complete_graph(4), 0.3, 1.0);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.order_length, 0u);
  EXPECT_EQ(t.log_probability[0], 0.0);
}

TEST(Exact, IsolatedTwinsAreIndistinguishable) {
  Graph g(5, 2);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  const auto m = exact_puv(g, 0.4, 0.8);
  EXPECT_EQ(m(3, 4), 0.5);
  EXPECT_EQ(m(0, 3), 1.0);
  EXPECT_EQ(m(3, 0), 0.0);
}

TEST(Exact, MatchesBruteForceEnumeration) {
  Rng rng(31);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n0 = 2 + uniform_index(rng, 3);
    const std::size_t n = n0 + 2 + uniform_index(rng, 5);
    const Graph g = oracle::random_graph(n, n0, 0.2 + 0.4 * uniform01(rng), rng);
    const double p = 0.1 + 0.8 * uniform01(rng);
    const double r = std::min<double>(static_cast<double>(n0), 2.0 * uniform01(rng));
    const auto ref = oracle::puv(g, p, r);
    const auto m = exact_puv(g, p, r);
    const auto via_orders = puv_from_orders(g, enumerate_orders(g, p, r));
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v) {
        if (u == v) continue;
        EXPECT_NEAR(m(u, v), ref[u][v], 1e-10);
        EXPECT_NEAR(via_orders(u, v), ref[u][v], 1e-10);
      }
    // denominator: flat sum equals the recursion total
    double total = 0.0;
    for (const auto& o : oracle::order_probs(g, p, r)) total += o.prob;
    EXPECT_NEAR(subset_recursion(g, p, r).log_total(), std::log(total), 1e-10);
  }
}

TEST(Exact, OrderTableSumsToDenominator) {
  Rng rng(6);
  const Graph g = oracle::random_graph(9, 3, 0.4, rng);
  const auto t = enumerate_orders(g, 0.35, 0.9);
  EXPECT_EQ(t.size(), 720u);
  EXPECT_NEAR(t.log_total(), subset_recursion(g, 0.35, 0.9).log_total(), 1e-10);
}

TEST(Exact, InfeasibleGraphIsReported) {
  // r = 0, p = 0 forces isolated newcomers, yet node 2 has an edge
  Graph g(3, 1);
  g.add_edge(0, 2);
  try {
    exact_puv(g, 0.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::infeasible);
  }
}

TEST(Exact, GuardAboveTenFreeNodes) {
  Graph g(13, 2);
  try {
    enumerate_orders(g, 0.5, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::guard);
    EXPECT_NE(std::string(e.what()).find("10"), std::string::npos);
  }
  EXPECT_THROW(exact_puv(g, 0.5, 0.5), Error);
}
