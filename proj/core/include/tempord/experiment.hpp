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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tempord/dd_model.hpp"
#include "tempord/estimators.hpp"
#include "tempord/graph.hpp"
#include "tempord/optimizer.hpp"
#include "tempord/partial_order.hpp"
#include "tempord/rng.hpp"
#include "tempord/sampler.hpp"

namespace tempord {

/// `key = value` lines, '#' comments. Lists are comma separated.
class Config {
 public:
  static Config parse(std::istream& in);
  static Config parse_file(const std::string& path);

  /// `key=value`; replaces any earlier value.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct ExperimentSpec {
  enum class Mode { synthetic, real };
  Mode mode = Mode::synthetic;

  DDParams model{0.3, 1.0, 50, 10};
  double p0 = 0.6;                 // seed graph edge probability
  std::string seed_graph = "er";   // "er" or "complete"
  std::size_t graphs = 1;

  Scheme scheme = Scheme::local_unif;
  std::uint64_t tries = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  std::vector<EstimatorConfig> estimators;
  std::vector<double> alphas{0.0};
  bool include_train = false;     // score training pairs as well
  std::vector<double> epsilons;   // optimal-curve points (empty: none)

  std::string edges_path;         // real mode
  std::string timestamps_path;

  std::string table_path;         // aggregated rows
  std::string runs_path;          // one row per repetition
  std::string curve_path;

  static ExperimentSpec from_config(const Config& c);
  void validate() const;
};

struct TrainingSplit {
  PartialOrder sampled;   // pairs drawn from the ground truth
  PartialOrder train;     // their closure
  PartialOrder test;      // ground truth minus sampled
  std::size_t requested = 0;
};

/// Draws floor(alpha |K(truth)|) comparable pairs without replacement,
/// closes them, and returns the remaining ground-truth pairs as the test set.
TrainingSplit split_training(const PartialOrder& truth, double alpha, Rng& rng);

/// Split from an explicit drawn set: train is its closure, test is truth
/// without the drawn pairs.
TrainingSplit make_split(const PartialOrder& truth, PartialOrder sampled);

struct Metrics {
  double density = 0.0;
  std::optional<double> precision;  // empty when no pair is jointly comparable
};

/// Scores `estimate` against the test pairs (or the full truth when
/// include_train is set or there is no training data).
Metrics evaluate_run(const PartialOrder& estimate, const PartialOrder& truth,
                     const TrainingSplit* split, bool include_train);

struct RealData {
  Graph graph;                     // ids ordered by arrival
  OrderedClustering truth;         // equal arrival times share a bin
  std::vector<std::string> labels; // id -> original token
  EdgeListStats stats;
};

/// Edge lines `u v [time]` with arbitrary tokens. Arrival of a node is the
/// time of its first incident edge (the line number when there is no time
/// column) unless a `node time` file is given, in which case every node
/// must appear there.
RealData ingest_real(std::istream& edges, std::istream* timestamps = nullptr);

struct EstimatorRow {
  double alpha = 0.0;
  std::string estimator;
  std::size_t graphs = 0;
  double density_mean = 0.0, density_sd = 0.0;
  double precision_mean = 0.0, precision_sd = 0.0;
  std::size_t precision_defined = 0;
};

struct RunRow {
  std::size_t rep = 0;
  double alpha = 0.0;
  std::string estimator;
  Metrics metrics;
};

struct ExperimentResult {
  std::vector<EstimatorRow> table;
  std::vector<RunRow> runs;
  std::vector<CurvePoint> curve;  // from the first repetition
};

ExperimentResult run_synthetic(const ExperimentSpec& cfg);
ExperimentResult run_real(const ExperimentSpec& cfg);
ExperimentResult run_experiment(const ExperimentSpec& cfg);

void write_table_csv(std::ostream& out, const std::vector<EstimatorRow>& rows);
void write_runs_csv(std::ostream& out, const std::vector<RunRow>& rows);

}  // namespace tempord
