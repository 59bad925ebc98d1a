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
#include "tempord/dd_model.hpp"

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

std::vector<int> present_without(const Graph& g, NodeId v) {
  std::vector<int> out;
  for (NodeId u : g.nodes())
    if (u != v) out.push_back(static_cast<int>(u));
  return out;
}

}  // namespace

TEST(Likelihood, IsolatedPairClosedForm) {
  Graph g(5, 1);
  const double r = 0.7;
  EXPECT_NEAR(parent_likelihood(g, 4, 3, 0.4, r), 0.25 * std::pow(1 - r / 4, 4), 1e-15);
}

TEST(Likelihood, ZeroWhenUnexplainedEdgesAndNoNoise) {
  const Graph g = asymmetric_five();
  // node 3 ~ 1; parent 2 has N = {0,1}: 3's edge to 1 is explained, missing 0 costs 1-p
  EXPECT_GT(parent_likelihood(g, 3, 2, 0.2, 0.0), 0.0);
  // parent 1 is adjacent to 3 itself, which r = 0 cannot produce
  EXPECT_EQ(parent_likelihood(g, 3, 1, 0.2, 0.0), 0.0);
  EXPECT_EQ(log_parent_likelihood(g, 3, 1, 0.2, 0.0), -std::numeric_limits<double>::infinity());
}

TEST(Likelihood, MatchesBruteForceProduct) {
  Rng rng(21);
  for (int rep = 0; rep < 40; ++rep) {
    const Graph g = oracle::random_graph(9, 2, 0.35, rng);
    const auto a = oracle::adjacency(g);
    const double p = 0.1 + 0.8 * uniform01(rng);
    const double r = 1.5 * uniform01(rng);
    for (NodeId v = 2; v < 9; ++v) {
      const double ref = oracle::step(a, present_without(g, v), static_cast<int>(v), p, r);
      EXPECT_NEAR(step_likelihood(g, v, p, r), ref, 1e-12 * std::max(1.0, ref));
    }
  }
}

TEST(Likelihood, IsolatedChildOfAsymmetricGraph) {
  const Graph g = asymmetric_five();
  const auto a = oracle::adjacency(g);
  const double ref = oracle::step(a, {0, 1, 2, 3}, 4, 0.2, 0.0);
  EXPECT_GT(ref, 0.0);
  EXPECT_NEAR(step_likelihood(g, 4, 0.2, 0.0), ref, 1e-15);
}

TEST(Likelihood, ConservationOverChildNeighbourhoods) {
  // From a fixed predecessor the child neighbourhood distribution sums to 1.
  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const Graph base = oracle::random_graph(5, 1, 0.5, rng);
    const double p = 0.15 + 0.7 * uniform01(rng);
    const double r = 0.2 + 2.0 * uniform01(rng);
    double total = 0.0;
    for (unsigned mask = 0; mask < 32; ++mask) {
      Graph h(6, 1);
      for (NodeId u : base.nodes())
        for (NodeId w : base.neighbors(u))
          if (u < w) h.add_edge(u, w);
      for (NodeId u = 0; u < 5; ++u)
        if (mask >> u & 1) h.add_edge(u, 5);
      total += step_likelihood(h, 5, p, r);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Likelihood, RejectsEdgeProbabilityAboveOne) {
  Graph g(3, 1);
  EXPECT_THROW(step_likelihood(g, 2, 0.5, 3.0), Error);
}

TEST(Removable, GenericParametersGiveAllNonSeeds) {
  Rng rng(1);
  const Graph g = oracle::random_graph(10, 3, 0.4, rng);
  EXPECT_EQ(removable_set(g, 0.5, 0.5).size(), 7u);
  EXPECT_TRUE(all_removable(10, 0.5, 0.5));
  EXPECT_FALSE(all_removable(10, 0.5, 0.0));
  EXPECT_FALSE(all_removable(10, 1.0, 0.5));
}

TEST(Removable, StarWithFullCopy) {
  Graph star(4, 1);
  star.add_edge(0, 1);
  star.add_edge(0, 2);
  star.add_edge(0, 3);
  star.set_n0(1);
  // p = 1, r = 0: a leaf copies a leaf; the centre is a seed
  EXPECT_EQ(removable_set(star, 1.0, 0.0), (std::vector<NodeId>{1, 2, 3}));
}

TEST(Removable, AsymmetricGraph) {
  EXPECT_EQ(removable_set(asymmetric_five(), 0.2, 0.0), (std::vector<NodeId>{3, 4}));
}

TEST(PeelingState, FastMatchesNaiveAlongRandomPeels) {
  Rng rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    const Graph g = oracle::random_graph(25, 4, 0.1 + 0.3 * uniform01(rng), rng);
    const double p = rep % 5 == 0 ? 1.0 : 0.05 + 0.9 * uniform01(rng);
    const double r = rep % 7 == 0 ? 0.0 : 2.0 * uniform01(rng);
    PeelingState st(g, p, r);
    while (st.alive_count() > 4) {
      std::vector<NodeId> cand;
      for (NodeId v : st.alive_nodes())
        if (!g.is_seed(v)) cand.push_back(v);
      for (NodeId v : cand) {
        const double fast = st.log_step_likelihood(v);
        const double slow = st.log_step_likelihood_naive(v);
        if (std::isinf(slow)) EXPECT_TRUE(std::isinf(fast) && fast < 0);
        else EXPECT_NEAR(fast, slow, 1e-10 * std::max(1.0, std::abs(slow)));
      }
      st.remove(cand[uniform_index(rng, cand.size())]);
    }
    st.reset();
    EXPECT_EQ(st.alive_count(), 25u);
  }
}

TEST(PeelingState, AgreesWithGraphLevelLikelihood) {
  Rng rng(5);
  const Graph g = oracle::random_graph(12, 3, 0.3, rng);
  PeelingState st(g, 0.4, 1.2);
  Graph cur = g;
  for (NodeId v = 11; v >= 3; --v) {
    EXPECT_NEAR(st.log_step_likelihood(v), log_step_likelihood(cur, v, 0.4, 1.2), 1e-10);
    st.remove(v);
    cur.remove_node(v);
  }
}

TEST(LogSum, Basics) {
  const std::vector<double> xs{std::log(1.0), std::log(2.0), std::log(3.0)};
  EXPECT_NEAR(log_sum_exp(xs), std::log(6.0), 1e-15);
  EXPECT_EQ(log_sum_exp({}), -std::numeric_limits<double>::infinity());
  EXPECT_NEAR(log_add(std::log(2.0), -std::numeric_limits<double>::infinity()), std::log(2.0), 1e-15);
}
