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

#include "tempord/experiment.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "tempord/optimizer.hpp"

namespace tempord {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& key) {
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrorKind::parse, "key `" + key + "`: `" + s + "` is not a number");
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

Config Config::parse(std::istream& in) {
  Config c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
      fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected `key = value`");
    c.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open config " + path);
  return parse(in);
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || trim(assignment.substr(0, eq)).empty())
    fail(ErrorKind::parse, "override `" + assignment + "` is not `key=value`");
  values_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorKind::parse, "missing required key `" + key + "`");
  return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(values_.at(key), key) : fallback;
}

double Config::require_double(const std::string& key) const {
  return to_double(require_string(key), key);
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& s = values_.at(key);
  // accept 1e5 style counts
  const double x = to_double(s, key);
  if (x < 0.0 || x != std::floor(x) || x > 1.8e19)
    fail(ErrorKind::parse, "key `" + key + "`: `" + s + "` is not a non-negative integer");
  return static_cast<std::uint64_t>(x);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& s = values_.at(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(ErrorKind::parse, "key `" + key + "`: `" + s + "` is not a boolean");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  if (!has(key)) return out;
  std::stringstream ss(values_.at(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : get_list(key)) out.push_back(to_double(s, key));
  return out;
}

// ---------------------------------------------------------------------------
// ExperimentSpec

ExperimentSpec ExperimentSpec::from_config(const Config& c) {
  ExperimentSpec s;
  const std::string mode = c.get("mode", "synthetic");
  if (mode == "synthetic") s.mode = Mode::synthetic;
  else if (mode == "real") s.mode = Mode::real;
  else fail(ErrorKind::parse, "key `mode`: expected synthetic or real");

  if (s.mode == Mode::real) {
    // model rates for real graphs have no sensible default
    s.model.p = c.require_double("p");
    s.model.r = c.require_double("r");
    s.edges_path = c.require_string("edges");
    s.timestamps_path = c.get("timestamps", "");
  } else {
    s.model.p = c.get_double("p", s.model.p);
    s.model.r = c.get_double("r", s.model.r);
  }
  s.model.n = c.get_uint("n", s.model.n);
  s.model.n0 = c.get_uint("n0", s.model.n0);
  s.p0 = c.get_double("p0", s.p0);
  s.seed_graph = c.get("seed_graph", s.seed_graph);
  s.graphs = c.get_uint("graphs", s.graphs);
  s.scheme = parse_scheme(c.get("scheme", to_string(s.scheme)));
  s.tries = c.get_uint("tries", s.tries);
  s.seed = c.get_uint("seed", s.seed);
  s.threads = static_cast<unsigned>(c.get_uint("threads", s.threads));
  for (const auto& e : c.get_list("estimators")) s.estimators.push_back(EstimatorConfig::parse(e));
  if (s.estimators.empty()) s.estimators.push_back(EstimatorConfig::parse("sort-by-puv-sum:1"));
  if (c.has("alpha")) s.alphas = c.get_double_list("alpha");
  s.include_train = c.get_bool("include_train", s.include_train);
  s.epsilons = c.get_double_list("epsilons");
  s.table_path = c.get("table", "");
  s.runs_path = c.get("runs", "");
  s.curve_path = c.get("curve", "");
  s.validate();
  return s;
}

void ExperimentSpec::validate() const {
  require(graphs >= 1, ErrorKind::domain, "graphs must be at least 1");
  require(tries >= 1, ErrorKind::domain, "tries must be at least 1");
  require(!alphas.empty(), ErrorKind::domain, "alpha list is empty");
  for (double a : alphas) require(a >= 0.0 && a < 1.0, ErrorKind::domain, "alpha must lie in [0,1)");
  require(seed_graph == "er" || seed_graph == "complete", ErrorKind::parse,
          "seed_graph must be er or complete");
  require(p0 >= 0.0 && p0 <= 1.0, ErrorKind::domain, "p0 must lie in [0,1]");
  if (mode == Mode::synthetic) model.validate();
  for (double e : epsilons) require(e > 0.0 && e <= 1.0, ErrorKind::domain, "epsilon must lie in (0,1]");
}

// ---------------------------------------------------------------------------
// supervision and scoring

TrainingSplit split_training(const PartialOrder& truth, double alpha, Rng& rng) {
  require(alpha >= 0.0 && alpha < 1.0, ErrorKind::domain, "alpha must lie in [0,1)");
  const std::size_t n = truth.n();
  const std::size_t K = truth.size();
  TrainingSplit out{PartialOrder(n), PartialOrder(n), truth, 0};
  const auto want = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(K) + 1e-9));
  out.requested = want;
  if (want == 0) return out;

  if (2 * want <= K) {
    // rejection: uniform ordered draws accepted when comparable
    std::vector<NodeId> active;
    const auto pred = truth.predecessor_rows();
    for (NodeId u = 0; u < n; ++u)
      if (!truth.successors(u).none() || !pred[u].none()) active.push_back(u);
    std::size_t got = 0;
    while (got < want) {
      const NodeId a = active[uniform_index(rng, active.size())];
      const NodeId b = active[uniform_index(rng, active.size())];
      if (a == b || !truth.comparable(a, b) || out.sampled.comparable(a, b)) continue;
      if (truth.precedes(a, b)) out.sampled.add(a, b);
      else out.sampled.add(b, a);
      ++got;
    }
  } else {
    auto pairs = truth.pairs();
    for (std::size_t i = 0; i < want; ++i) {
      const std::size_t j = i + uniform_index(rng, pairs.size() - i);
      std::swap(pairs[i], pairs[j]);
      out.sampled.add(pairs[i].first, pairs[i].second);
    }
  }
  const std::size_t requested = out.requested;
  out = make_split(truth, std::move(out.sampled));
  out.requested = requested;
  return out;
}

TrainingSplit make_split(const PartialOrder& truth, PartialOrder sampled) {
  require(sampled.n() == truth.n(), ErrorKind::contract, "training pairs and truth differ in size");
  TrainingSplit out{std::move(sampled), PartialOrder(truth.n()), truth, 0};
  out.requested = out.sampled.size();
  out.train = out.sampled.closed();
  // implied pairs stay in the test set; only the drawn ones are withheld
  for (auto [u, v] : out.sampled.pairs()) out.test.erase(u, v);
  return out;
}

Metrics evaluate_run(const PartialOrder& estimate, const PartialOrder& truth,
                     const TrainingSplit* split, bool include_train) {
  const bool supervised = split && !split->train.empty() && !include_train;
  const PartialOrder& ref = supervised ? split->test : truth;
  Metrics m;
  m.density = density(estimate, ref);
  if (joint_comparable(estimate, ref) > 0) m.precision = precision(estimate, ref);
  return m;
}

// ---------------------------------------------------------------------------
// real data

RealData ingest_real(std::istream& edges, std::istream* timestamps) {
  std::unordered_map<std::string, NodeId> id_of;
  std::vector<std::string> labels;
  std::vector<double> first_time;
  std::vector<std::pair<NodeId, NodeId>> raw;
  auto intern = [&](const std::string& tok) {
    auto [it, inserted] = id_of.emplace(tok, static_cast<NodeId>(labels.size()));
    if (inserted) {
      labels.push_back(tok);
      first_time.push_back(std::numeric_limits<double>::infinity());
    }
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0, data_lines = 0;
  int has_time = -1;
  while (std::getline(edges, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == '%') continue;
    std::istringstream ss(t);
    std::string a, b, ts, extra;
    if (!(ss >> a >> b))
      fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected `u v [time]`");
    const bool timed = static_cast<bool>(ss >> ts);
    if (timed && (ss >> extra))
      fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": too many columns");
    if (has_time == -1) has_time = timed ? 1 : 0;
    if (has_time != (timed ? 1 : 0))
      fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": time column present on some lines only");
    double when = static_cast<double>(data_lines);
    if (timed) {
      auto res = std::from_chars(ts.data(), ts.data() + ts.size(), when);
      if (res.ec != std::errc() || res.ptr != ts.data() + ts.size())
        fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": bad time `" + ts + "`");
    }
    ++data_lines;
    const NodeId u = intern(a), v = intern(b);
    first_time[u] = std::min(first_time[u], when);
    first_time[v] = std::min(first_time[v], when);
    raw.emplace_back(u, v);
  }

  if (timestamps) {
    std::vector<double> given(labels.size(), std::numeric_limits<double>::quiet_NaN());
    std::size_t ln = 0;
    while (std::getline(*timestamps, line)) {
      ++ln;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == '%') continue;
      std::istringstream ss(t);
      std::string node, ts;
      if (!(ss >> node >> ts))
        fail(ErrorKind::parse, "timestamp line " + std::to_string(ln) + ": expected `node time`");
      double when = 0.0;
      auto res = std::from_chars(ts.data(), ts.data() + ts.size(), when);
      if (res.ec != std::errc() || res.ptr != ts.data() + ts.size())
        fail(ErrorKind::parse, "timestamp line " + std::to_string(ln) + ": bad time `" + ts + "`");
      const NodeId u = intern(node);  // isolated nodes are allowed
      if (u >= given.size()) given.resize(u + 1, std::numeric_limits<double>::quiet_NaN());
      given[u] = when;
    }
    for (std::size_t u = 0; u < labels.size(); ++u)
      if (std::isnan(given[u])) fail(ErrorKind::parse, "node `" + labels[u] + "` has no timestamp");
    first_time = std::move(given);
  }

  const std::size_t n = labels.size();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return first_time[a] < first_time[b]; });
  std::vector<NodeId> new_id(n);
  for (std::size_t i = 0; i < n; ++i) new_id[order[i]] = static_cast<NodeId>(i);

  RealData out;
  out.graph = Graph(n, 0);
  for (auto [a, b] : raw) {
    if (a == b) {
      ++out.stats.self_loops;
    } else if (!out.graph.add_edge(new_id[a], new_id[b])) {
      ++out.stats.duplicates;
    }
  }
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = labels[order[i]];
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || first_time[order[i]] != first_time[order[i - 1]]) out.truth.clusters.emplace_back();
    out.truth.clusters.back().push_back(static_cast<NodeId>(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// runs

namespace {

std::uint64_t alpha_key(double a) { return std::bit_cast<std::uint64_t>(a); }

struct Instance {
  Graph graph;
  PartialOrder truth;           // over non-seed nodes
  std::vector<NodeId> free;     // non-seed ids
};

struct RepOutput {
  std::vector<RunRow> rows;
  std::vector<CurvePoint> curve;
};

RepOutput run_instance(const ExperimentSpec& cfg, const Instance& inst, std::size_t rep) {
  RepOutput out;
  const bool need_puv = std::any_of(cfg.estimators.begin(), cfg.estimators.end(),
                                    [](const EstimatorConfig& e) { return e.needs_puv(); });
  for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
    const double alpha = cfg.alphas[ai];
    std::optional<TrainingSplit> split;
    std::optional<TrainingPairs> restriction;
    if (alpha > 0.0) {
      Rng rng(derive_seed(cfg.seed, "split", rep, alpha_key(alpha)));
      split = split_training(inst.truth, alpha, rng);
      if (!split->train.empty()) restriction.emplace(split->train, inst.graph.n0());
    }
    PuvEstimate est;
    if (need_puv) {
      SamplerOptions o;
      o.scheme = cfg.scheme;
      o.paths = cfg.tries;
      o.seed = derive_seed(cfg.seed, "paths", rep);
      o.threads = 1;
      est = estimate_puv(inst.graph, cfg.model.p, cfg.model.r, o,
                         restriction ? &*restriction : nullptr);
    }
    EstimatorInput in;
    in.graph = &inst.graph;
    in.puv = need_puv && est.dense ? &est.matrix : nullptr;
    in.scores = need_puv ? &est.scores : nullptr;
    in.nodes = inst.free;
    for (const auto& ec : cfg.estimators) {
      const PartialOrder order = run_estimator(ec, in);
      RunRow row;
      row.rep = rep;
      row.alpha = alpha;
      row.estimator = ec.label();
      row.metrics = evaluate_run(order, inst.truth, split ? &*split : nullptr, cfg.include_train);
      out.rows.push_back(std::move(row));
    }
    if (rep == 0 && ai == 0 && !cfg.epsilons.empty() && need_puv && est.dense)
      out.curve = optimal_curve(restrict_matrix(est.matrix, inst.free), cfg.epsilons);
  }
  return out;
}

ExperimentResult run_reps(const ExperimentSpec& cfg,
                          const std::function<Instance(std::size_t)>& make) {
  std::vector<RepOutput> reps(cfg.graphs);
  const unsigned threads = std::max(1U, cfg.threads);
  for (std::size_t first = 0; first < cfg.graphs; first += threads) {
    const std::size_t last = std::min<std::size_t>(cfg.graphs, first + threads);
    auto work = [&](std::size_t rep) { reps[rep] = run_instance(cfg, make(rep), rep); };
    if (last - first == 1) {
      work(first);
      continue;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(last - first);
    for (std::size_t rep = first; rep < last; ++rep)
      pool.emplace_back([&, rep] {
        try {
          work(rep);
        } catch (...) {
          errors[rep - first] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  ExperimentResult res;
  for (auto& r : reps) res.runs.insert(res.runs.end(), r.rows.begin(), r.rows.end());
  if (!reps.empty()) res.curve = reps.front().curve;
  for (double alpha : cfg.alphas)
    for (const auto& ec : cfg.estimators) {
      EstimatorRow row;
      row.alpha = alpha;
      row.estimator = ec.label();
      std::vector<double> d, p;
      for (const auto& r : res.runs) {
        if (r.alpha != alpha || r.estimator != row.estimator) continue;
        d.push_back(r.metrics.density);
        if (r.metrics.precision) p.push_back(*r.metrics.precision);
      }
      auto mean_sd = [](const std::vector<double>& xs, double& mean, double& sd) {
        mean = sd = 0.0;
        if (xs.empty()) return;
        mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        if (xs.size() < 2) return;
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
      };
      row.graphs = d.size();
      mean_sd(d, row.density_mean, row.density_sd);
      mean_sd(p, row.precision_mean, row.precision_sd);
      row.precision_defined = p.size();
      res.table.push_back(row);
    }
  return res;
}

std::vector<NodeId> non_seed(const Graph& g) {
  std::vector<NodeId> out;
  for (NodeId u : g.nodes())
    if (!g.is_seed(u)) out.push_back(u);
  return out;
}

}  // namespace

ExperimentResult run_synthetic(const ExperimentSpec& cfg) {
  cfg.validate();
  return run_reps(cfg, [&](std::size_t rep) {
    const auto& m = cfg.model;
    Rng sg(derive_seed(cfg.seed, "seed-graph", rep));
    const Graph seed_graph = cfg.seed_graph == "complete" ? complete_graph(m.n0)
                                                           : erdos_renyi_seed(m.n0, cfg.p0, sg);
    Rng gr(derive_seed(cfg.seed, "graph", rep));
    const auto gen = generate(m, seed_graph, gr);
    Rng pr(derive_seed(cfg.seed, "perm", rep));
    const auto perm = Permutation::random(m.n, m.n0, pr);
    Instance inst;
    inst.graph = apply_permutation(gen.graph, perm);
    std::vector<NodeId> seq;
    for (std::size_t i = m.n0; i < m.n; ++i) seq.push_back(perm(gen.arrival[i]));
    inst.truth = PartialOrder::from_sequence(m.n, seq);
    inst.free = non_seed(inst.graph);
    return inst;
  });
}

ExperimentResult run_real(const ExperimentSpec& cfg) {
  cfg.validate();
  std::ifstream edges(cfg.edges_path);
  if (!edges) fail(ErrorKind::io, "cannot open edge list " + cfg.edges_path);
  std::ifstream ts;
  if (!cfg.timestamps_path.empty()) {
    ts.open(cfg.timestamps_path);
    if (!ts) fail(ErrorKind::io, "cannot open timestamps " + cfg.timestamps_path);
  }
  const RealData data = ingest_real(edges, cfg.timestamps_path.empty() ? nullptr : &ts);
  const std::size_t n = data.graph.capacity();
  const std::size_t n0 = cfg.model.n0;
  require(n0 >= 1 && n0 < n, ErrorKind::domain, "n0 must lie in [1, nodes)");
  require(cfg.model.r <= static_cast<double>(n0), ErrorKind::domain,
          "r must not exceed n0 (the edge probability r/k would exceed 1)");
  require(cfg.model.p >= 0.0 && cfg.model.p <= 1.0, ErrorKind::domain, "p must lie in [0,1]");
  Graph base = data.graph;
  base.set_n0(n0);
  return run_reps(cfg, [&](std::size_t rep) {
    Rng pr(derive_seed(cfg.seed, "perm", rep));
    const auto perm = Permutation::random(n, n0, pr);
    Instance inst;
    inst.graph = apply_permutation(base, perm);
    std::vector<std::vector<NodeId>> bins;
    for (const auto& c : data.truth.clusters) {
      std::vector<NodeId> bin;
      for (NodeId u : c)
        if (u >= n0) bin.push_back(perm(u));
      if (!bin.empty()) bins.push_back(std::move(bin));
    }
    inst.truth = order_from_bins(n, bins);
    inst.free = non_seed(inst.graph);
    return inst;
  });
}

ExperimentResult run_experiment(const ExperimentSpec& cfg) {
  return cfg.mode == ExperimentSpec::Mode::real ? run_real(cfg) : run_synthetic(cfg);
}

void write_table_csv(std::ostream& out, const std::vector<EstimatorRow>& rows) {
  out << "alpha,estimator,graphs,density_mean,density_sd,precision_mean,precision_sd,precision_defined\n";
  out << std::setprecision(10);
  for (const auto& r : rows)
    out << r.alpha << ',' << r.estimator << ',' << r.graphs << ',' << r.density_mean << ','
        << r.density_sd << ',' << r.precision_mean << ',' << r.precision_sd << ','
        << r.precision_defined << '\n';
}

void write_runs_csv(std::ostream& out, const std::vector<RunRow>& rows) {
  out << "rep,alpha,estimator,density,precision\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.rep << ',' << r.alpha << ',' << r.estimator << ',' << r.metrics.density << ',';
    if (r.metrics.precision) out << *r.metrics.precision;
    out << '\n';
  }
}

}  // namespace tempord
