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

#include <fstream>
#include <numeric>
#include <sstream>

#include "tempord/experiment.hpp"

using namespace tempord;

namespace {

PartialOrder total(std::size_t n) {
  std::vector<NodeId> seq(n);
  std::iota(seq.begin(), seq.end(), NodeId{0});
  return PartialOrder::from_sequence(n, seq);
}

ExperimentSpec small_config() {
  ExperimentSpec s;
  s.model = DDParams{0.4, 1.0, 22, 6};
  s.graphs = 3;
  s.tries = 400;
  s.seed = 5;
  s.estimators = {EstimatorConfig::parse("sort-by-puv-sum:1"), EstimatorConfig::parse("sort-by-puv-sum:4"),
                  EstimatorConfig::parse("puv-threshold:0.8"), EstimatorConfig::parse("sort-by-degree:1"),
                  EstimatorConfig::parse("peel-by-neighborhood:0")};
  return s;
}

std::string table_text(const ExperimentResult& r) {
  std::ostringstream out;
  write_table_csv(out, r.table);
  write_runs_csv(out, r.runs);
  return out.str();
}

}  // namespace

TEST(Config, ParsesCommentsListsAndOverrides) {
  std::istringstream in("# header\nn = 50  # trailing\nalpha = 0.001, 0.01,0.1\n\ntries = 1e5\n");
  Config c = Config::parse(in);
  EXPECT_EQ(c.get_uint("n", 0), 50u);
  EXPECT_EQ(c.get_uint("tries", 0), 100000u);
  EXPECT_EQ(c.get_double_list("alpha"), (std::vector<double>{0.001, 0.01, 0.1}));
  c.set("n=60");
  EXPECT_EQ(c.get_uint("n", 0), 60u);
  EXPECT_THROW(c.require_string("missing"), Error);
  EXPECT_THROW(c.get_uint("alpha", 0), Error);
  std::istringstream bad("just words\n");
  EXPECT_THROW(Config::parse(bad), Error);
}

TEST(ExperimentConfig, FromConfigAndValidation) {
  std::istringstream in("n = 30\nn0 = 5\np = 0.5\nr = 0.5\nestimators = sort-by-puv-sum:5, peel-by-degree\n"
                        "scheme = high-prob\nalpha = 0, 0.1\n");
  const auto s = ExperimentSpec::from_config(Config::parse(in));
  EXPECT_EQ(s.model.n, 30u);
  EXPECT_EQ(s.scheme, Scheme::high_prob);
  ASSERT_EQ(s.estimators.size(), 2u);
  EXPECT_EQ(s.estimators[0].bin_size, 5u);
  std::istringstream bad_alpha("alpha = 1.0\n");
  EXPECT_THROW(ExperimentSpec::from_config(Config::parse(bad_alpha)), Error);
  std::istringstream bad_graphs("graphs = 0\n");
  EXPECT_THROW(ExperimentSpec::from_config(Config::parse(bad_graphs)), Error);
  std::istringstream real_needs_rates("mode = real\nedges = x.txt\n");
  EXPECT_THROW(ExperimentSpec::from_config(Config::parse(real_needs_rates)), Error);
}

TEST(Split, ZeroAlphaIsEmpty) {
  Rng rng(1);
  const auto s = split_training(total(10), 0.0, rng);
  EXPECT_TRUE(s.train.empty());
  EXPECT_EQ(s.test, total(10));
}

TEST(Split, SampleSizeBeforeClosure) {
  Rng rng(2);
  const auto truth = total(50);
  const auto s = split_training(truth, 0.01, rng);
  EXPECT_EQ(s.requested, 12u);
  EXPECT_EQ(s.sampled.size(), 12u);
  EXPECT_GE(s.train.size(), 12u);
  for (auto [a, b] : s.train.pairs()) EXPECT_TRUE(truth.precedes(a, b));
  for (auto [a, b] : s.sampled.pairs()) EXPECT_FALSE(s.test.comparable(a, b));
  EXPECT_EQ(s.test.size() + s.sampled.size(), truth.size());
}

TEST(Split, LargeAlphaUsesShuffle) {
  Rng rng(3);
  const auto truth = total(12);
  const auto s = split_training(truth, 0.9, rng);
  EXPECT_EQ(s.sampled.size(), 59u);  // floor(0.9 * 66)
  EXPECT_FALSE(s.test.empty());
  EXPECT_THROW(split_training(truth, 1.0, rng), Error);
}

TEST(Split, TiedTruthOnlySamplesComparablePairs) {
  Rng rng(4);
  OrderedClustering c{{{0, 1, 2}, {3, 4}, {5}}};
  const auto truth = PartialOrder::from_clusters(6, c);
  const auto s = split_training(truth, 0.3, rng);
  for (auto [a, b] : s.sampled.pairs()) EXPECT_TRUE(truth.precedes(a, b));
}

TEST(Evaluate, TruthScoresPerfectly) {
  Rng rng(5);
  const auto truth = total(15);
  const auto split = split_training(truth, 0.2, rng);
  const auto m = evaluate_run(truth, truth, &split, false);
  EXPECT_DOUBLE_EQ(m.density, 1.0);
  EXPECT_DOUBLE_EQ(*m.precision, 1.0);
}

TEST(Evaluate, EmptyEstimateAndEmptyTestSet) {
  const auto truth = total(6);
  const auto m = evaluate_run(PartialOrder(6), truth, nullptr, false);
  EXPECT_EQ(m.density, 0.0);
  EXPECT_FALSE(m.precision.has_value());
  TrainingSplit all{truth, truth, PartialOrder(6), 15};
  EXPECT_THROW(evaluate_run(truth, truth, &all, false), Error);
}

TEST(Evaluate, OnlyImpliedPairsEarnCredit) {
  // drawn (0,1),(1,2); closure adds (0,2); scored: (0,2),(0,3),(1,3),(2,3)
  const auto truth = total(4);
  PartialOrder drawn(4);
  drawn.add(0, 1);
  drawn.add(1, 2);
  const TrainingSplit s = make_split(truth, drawn);
  EXPECT_EQ(s.test.size(), 4u);
  const auto m = evaluate_run(s.train, truth, &s, false);
  EXPECT_DOUBLE_EQ(m.density, 0.25);
  EXPECT_DOUBLE_EQ(*m.precision, 1.0);
  const auto inclusive = evaluate_run(s.train, truth, &s, true);
  EXPECT_DOUBLE_EQ(inclusive.density, 0.5);
}

TEST(Split, TestKeepsImpliedPairs) {
  Rng rng(7);
  const auto truth = total(30);
  const auto s = split_training(truth, 0.2, rng);
  ASSERT_GT(s.train.size(), s.sampled.size());
  for (auto [a, b] : s.train.pairs())
    EXPECT_EQ(s.test.comparable(a, b), !s.sampled.comparable(a, b));
}

TEST(Ingest, ThreeNodesTwoBins) {
  std::istringstream edges("a b 1\nb c 2\n");
  const auto d = ingest_real(edges);
  ASSERT_EQ(d.truth.size(), 2u);
  EXPECT_EQ(PartialOrder::from_clusters(3, d.truth).size(), 2u);
  EXPECT_EQ(d.labels, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Ingest, DuplicatesCollapse) {
  std::istringstream edges("a b\nb a\na b\nc c\n");
  const auto d = ingest_real(edges);
  EXPECT_EQ(d.graph.num_edges(), 1u);
  EXPECT_EQ(d.stats.duplicates, 2u);
  EXPECT_EQ(d.stats.self_loops, 1u);
}

TEST(Ingest, FixtureWithTimestampFile) {
  std::ifstream edges(std::string(TEMPORD_TEST_DATA) + "/citation_edges.txt");
  std::ifstream dates(std::string(TEMPORD_TEST_DATA) + "/citation_dates.txt");
  ASSERT_TRUE(edges && dates);
  const auto d = ingest_real(edges, &dates);
  const std::vector<std::vector<NodeId>> expect{{0, 1, 2}, {3, 4}, {5}, {6, 7, 8}, {9}, {10, 11}};
  EXPECT_EQ(d.truth.clusters, expect);
  EXPECT_EQ(d.graph.capacity(), 12u);
  EXPECT_EQ(d.graph.num_edges(), 19u);
  EXPECT_EQ(d.stats.duplicates, 1u);
  EXPECT_EQ(d.labels[11], "p12");  // isolated, known only from the date file
  EXPECT_EQ(d.graph.degree(11), 0u);
  EXPECT_EQ(PartialOrder::from_clusters(12, d.truth).size(), 58u);
}

TEST(Ingest, Errors) {
  std::istringstream bad("a b 1\nc\n");
  try {
    ingest_real(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream mixed("a b 1\nb c\n");
  EXPECT_THROW(ingest_real(mixed), Error);
  std::istringstream edges("a b\nb c\n");
  std::istringstream dates("a 1\nb 2\n");
  EXPECT_THROW(ingest_real(edges, &dates), Error);  // c has no date
}

TEST(Synthetic, DeterministicAcrossRunsAndThreads) {
  auto cfg = small_config();
  cfg.alphas = {0.0, 0.1};
  const auto a = run_synthetic(cfg);
  const auto b = run_synthetic(cfg);
  EXPECT_EQ(table_text(a), table_text(b));
  cfg.threads = 3;
  EXPECT_EQ(table_text(run_synthetic(cfg)), table_text(a));
  ASSERT_EQ(a.table.size(), 10u);
  EXPECT_EQ(a.runs.size(), 30u);
  for (const auto& row : a.table) EXPECT_EQ(row.graphs, 3u);
}

TEST(Synthetic, NegligibleAlphaEqualsUnsupervised) {
  // floor(0.001 * C(16,2)) = 0 training pairs
  auto cfg = small_config();
  cfg.alphas = {0.0, 0.001};
  const auto r = run_synthetic(cfg);
  for (std::size_t i = 0; i < r.runs.size(); i += 2 * cfg.estimators.size())
    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
      const auto& u = r.runs[i + e];
      const auto& s = r.runs[i + cfg.estimators.size() + e];
      EXPECT_EQ(u.metrics.density, s.metrics.density);
      EXPECT_EQ(u.metrics.precision, s.metrics.precision);
    }
}

TEST(Synthetic, CurveFromFirstRepetition) {
  auto cfg = small_config();
  cfg.model = DDParams{0.4, 1.0, 10, 5};
  cfg.graphs = 1;
  cfg.epsilons = {0.3, 1.0};
  const auto r = run_synthetic(cfg);
  ASSERT_EQ(r.curve.size(), 2u);
  EXPECT_EQ(r.curve[0].kind, "exact-ip");
  EXPECT_GE(r.curve[0].precision, r.curve[1].precision - 1e-12);
}

TEST(Real, RunsOnFixture) {
  ExperimentSpec cfg;
  cfg.mode = ExperimentSpec::Mode::real;
  cfg.edges_path = std::string(TEMPORD_TEST_DATA) + "/citation_edges.txt";
  cfg.timestamps_path = std::string(TEMPORD_TEST_DATA) + "/citation_dates.txt";
  cfg.model = DDParams{0.6, 0.5, 0, 3};
  cfg.tries = 300;
  cfg.estimators = {EstimatorConfig::parse("sort-by-puv-sum:1"), EstimatorConfig::parse("peel-by-degree")};
  const auto r = run_real(cfg);
  ASSERT_EQ(r.table.size(), 2u);
  for (const auto& row : r.table) {
    EXPECT_GE(row.density_mean, 0.0);
    EXPECT_LE(row.density_mean, 1.0);
  }
  cfg.model.r = 5.0;
  EXPECT_THROW(run_real(cfg), Error);
}
