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

// tempord command line: generation, estimation, ordering, evaluation.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tempord/degree_theory.hpp"
#include "tempord/estimators.hpp"
#include "tempord/experiment.hpp"
#include "tempord/graph.hpp"
#include "tempord/optimizer.hpp"
#include "tempord/partial_order.hpp"
#include "tempord/puv_matrix.hpp"
#include "tempord/sampler.hpp"

using nlohmann::json;
using namespace tempord;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path);
  return in;
}

// "-" or empty means stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) fail(ErrorKind::io, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Graph load_graph(const std::string& path) {
  auto in = open_in(path);
  EdgeListStats stats;
  Graph g = read_edge_list(in, &stats);
  if (stats.duplicates || stats.self_loops)
    std::cerr << json{{"warning", "edge list cleaned"},
                      {"duplicates", stats.duplicates},
                      {"self_loops", stats.self_loops}}
                     .dump()
              << '\n';
  return g;
}

std::vector<NodeId> free_nodes(std::size_t n, std::size_t n0) {
  std::vector<NodeId> out;
  for (std::size_t u = n0; u < n; ++u) out.push_back(static_cast<NodeId>(u));
  return out;
}

int report_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arrival-order inference for duplication-divergence graphs"};
  app.require_subcommand(1);

  // generate
  DDParams gen_model{0.3, 1.0, 50, 10};
  double gen_p0 = 0.6;
  std::string gen_seed_graph = "er", gen_graph_out, gen_truth_out;
  std::uint64_t gen_seed = 1;
  bool gen_scramble = false;
  auto* gen = app.add_subcommand("generate", "grow a graph and write it with its arrival order");
  gen->add_option("--n", gen_model.n, "final node count");
  gen->add_option("--n0", gen_model.n0, "seed graph size");
  gen->add_option("--p", gen_model.p, "edge copy probability");
  gen->add_option("--r", gen_model.r, "expected extra edges per arrival");
  gen->add_option("--p0", gen_p0, "seed graph edge probability");
  gen->add_option("--seed-graph", gen_seed_graph, "er or complete");
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_flag("--scramble", gen_scramble, "relabel non-seed nodes at random");
  gen->add_option("--graph", gen_graph_out, "edge list output (default stdout)");
  gen->add_option("--truth", gen_truth_out, "true order output over non-seed nodes");

  // estimate-puv
  std::string est_graph, est_train, est_out, est_scheme = "local-unif", est_checkpoint;
  double est_p = 0.3, est_r = 1.0;
  SamplerOptions est_opts;
  est_opts.paths = 10000;
  auto* est = app.add_subcommand("estimate-puv", "importance-sampled p(u,v) matrix");
  est->add_option("--graph", est_graph, "edge list")->required();
  est->add_option("--p", est_p, "model p")->required();
  est->add_option("--r", est_r, "model r")->required();
  est->add_option("--scheme", est_scheme, "local-unif, high-prob or accept-reject");
  est->add_option("--tries", est_opts.paths, "number of sample paths");
  est->add_option("--seed", est_opts.seed, "master seed");
  est->add_option("--threads", est_opts.threads, "worker threads");
  est->add_option("--train", est_train, "known pairs `u < v` restricting the paths");
  est->add_option("--checkpoint", est_checkpoint, "checkpoint file");
  est->add_option("--checkpoint-every", est_opts.checkpoint_every, "blocks between checkpoints");
  est->add_flag("--resume", est_opts.resume, "continue from --checkpoint");
  est->add_option("--out", est_out, "matrix CSV output (default stdout)");

  // order
  std::string ord_graph, ord_puv, ord_out, ord_clusters_out, ord_estimator = "sort-by-puv-sum:1";
  std::size_t ord_n0 = 0;
  bool ord_all = false;
  auto* ord = app.add_subcommand("order", "estimate a partial order");
  ord->add_option("--estimator", ord_estimator,
                  "sort-by-puv-sum:B, puv-threshold:T, sort-by-degree:B, peel-by-degree, "
                  "sort-by-neighborhood:R, peel-by-neighborhood:R[:STOP]");
  ord->add_option("--puv", ord_puv, "matrix CSV");
  ord->add_option("--graph", ord_graph, "edge list");
  ord->add_option("--n0", ord_n0, "seed count when only --puv is given");
  ord->add_flag("--all-nodes", ord_all, "order seeds as well");
  ord->add_option("--out", ord_out, "partial order output (default stdout)");
  ord->add_option("--clusters", ord_clusters_out, "ordered clustering output");

  // curve
  std::string cur_puv, cur_out;
  std::size_t cur_n0 = 0;
  std::vector<double> cur_eps{0.2, 0.4, 0.6, 0.8, 1.0};
  auto* cur = app.add_subcommand("curve", "optimal precision against density");
  cur->add_option("--puv", cur_puv, "matrix CSV")->required();
  cur->add_option("--n0", cur_n0, "seed count; seeds are left out");
  cur->add_option("--epsilons", cur_eps, "density targets")->delimiter(',');
  cur->add_option("--out", cur_out, "curve CSV output (default stdout)");

  // eval
  std::string ev_order, ev_truth, ev_train;
  bool ev_include_train = false;
  auto* ev = app.add_subcommand("eval", "density and precision of an order");
  ev->add_option("--order", ev_order, "estimated partial order")->required();
  ev->add_option("--truth", ev_truth, "reference partial order")->required();
  ev->add_option("--train", ev_train, "training pairs left out of the reference");
  ev->add_flag("--include-train", ev_include_train, "score training pairs too");

  // experiment
  std::string ex_config;
  std::vector<std::string> ex_overrides;
  auto* ex = app.add_subcommand("experiment", "run a configured sweep");
  ex->add_option("config", ex_config, "config file")->required();
  ex->add_option("--set", ex_overrides, "key=value override")->take_all();

  // degree-check
  DDParams deg_model{0.6, 0.5, 500, 20};
  std::string deg_seed_graph = "complete", deg_out;
  double deg_p0 = 0.6;
  std::size_t deg_runs = 2000, deg_edge_from = 50;
  std::uint64_t deg_seed = 1;
  std::vector<std::size_t> deg_s{25, 50, 100}, deg_t{100, 200, 300, 400, 500};
  auto* deg = app.add_subcommand("degree-check", "expected degree growth against simulation");
  deg->add_option("--n", deg_model.n, "final node count");
  deg->add_option("--n0", deg_model.n0, "seed graph size");
  deg->add_option("--p", deg_model.p, "model p");
  deg->add_option("--r", deg_model.r, "model r");
  deg->add_option("--p0", deg_p0, "seed edge probability for er");
  deg->add_option("--seed-graph", deg_seed_graph, "er or complete");
  deg->add_option("--runs", deg_runs, "independent graphs");
  deg->add_option("--seed", deg_seed, "master seed");
  deg->add_option("--s", deg_s, "arrival times tracked (1-based)")->delimiter(',');
  deg->add_option("--t", deg_t, "graph sizes sampled")->delimiter(',');
  deg->add_option("--edge-fit-from", deg_edge_from, "first size in the edge slope fit");
  deg->add_option("--out", deg_out, "per (s,t) CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return 2;
  }

  try {
    if (*gen) {
      gen_model.validate();
      Rng sg(derive_seed(gen_seed, "seed-graph", 0));
      require(gen_seed_graph == "er" || gen_seed_graph == "complete", ErrorKind::parse,
              "seed graph must be er or complete");
      const Graph seed_graph = gen_seed_graph == "complete"
                                   ? complete_graph(gen_model.n0)
                                   : erdos_renyi_seed(gen_model.n0, gen_p0, sg);
      Rng gr(derive_seed(gen_seed, "graph", 0));
      const auto g = generate(gen_model, seed_graph, gr);
      Permutation perm = Permutation::identity(gen_model.n, gen_model.n0);
      if (gen_scramble) {
        Rng pr(derive_seed(gen_seed, "perm", 0));
        perm = Permutation::random(gen_model.n, gen_model.n0, pr);
      }
      Output graph_out(gen_graph_out);
      write_edge_list(graph_out.stream(), apply_permutation(g.graph, perm));
      if (!gen_truth_out.empty()) {
        std::vector<NodeId> seq;
        for (std::size_t i = gen_model.n0; i < gen_model.n; ++i) seq.push_back(perm(g.arrival[i]));
        Output truth_out(gen_truth_out);
        write_partial_order(truth_out.stream(), PartialOrder::from_sequence(gen_model.n, seq));
      }
    } else if (*est) {
      const Graph h = load_graph(est_graph);
      est_opts.scheme = parse_scheme(est_scheme);
      est_opts.checkpoint_path = est_checkpoint;
      std::optional<TrainingPairs> train;
      if (!est_train.empty()) {
        auto in = open_in(est_train);
        train.emplace(read_partial_order(in, h.capacity()), h.n0());
      }
      const auto res = estimate_puv(h, est_p, est_r, est_opts, train ? &*train : nullptr);
      if (!res.complete) {
        std::cerr << json{{"status", "interrupted"}}.dump() << '\n';
        return 3;
      }
      require(res.dense, ErrorKind::guard, "graph too large for a dense matrix");
      Output out(est_out);
      write_puv_csv(out.stream(), res.matrix);
      std::cerr << json{{"paths", res.weights.paths},
                        {"zero_paths", res.weights.zero_paths},
                        {"log_mean_weight", res.weights.log_mean()},
                        {"effective_sample_size", res.weights.effective_sample_size()}}
                       .dump()
                << '\n';
    } else if (*ord) {
      const auto cfg = EstimatorConfig::parse(ord_estimator);
      std::optional<Graph> h;
      std::optional<PuvMatrix> m;
      if (!ord_graph.empty()) h = load_graph(ord_graph);
      if (!ord_puv.empty()) {
        const std::size_t n0 = h ? h->n0() : ord_n0;
        auto in = open_in(ord_puv);
        m = read_puv_csv(in, n0);
      }
      require(!cfg.needs_puv() || m, ErrorKind::contract, cfg.label() + " needs --puv");
      require(cfg.needs_puv() || h, ErrorKind::contract, cfg.label() + " needs --graph");
      const std::size_t n = h ? h->capacity() : m->n();
      const std::size_t n0 = h ? h->n0() : ord_n0;
      const auto nodes = ord_all ? free_nodes(n, 0) : free_nodes(n, n0);
      EstimatorInput in;
      in.graph = h ? &*h : nullptr;
      in.puv = m ? &*m : nullptr;
      in.nodes = nodes;
      const PartialOrder po = run_estimator(cfg, in);
      Output out(ord_out);
      write_partial_order(out.stream(), po);
      if (!ord_clusters_out.empty()) {
        Output cl(ord_clusters_out);
        write_clustering(cl.stream(), to_clusters(po));
      }
    } else if (*cur) {
      auto in = open_in(cur_puv);
      const PuvMatrix m = read_puv_csv(in, cur_n0);
      const auto nodes = free_nodes(m.n(), cur_n0);
      Output out(cur_out);
      write_curve_csv(out.stream(), optimal_curve(restrict_matrix(m, nodes), cur_eps));
    } else if (*ev) {
      auto in_o = open_in(ev_order);
      auto in_t = open_in(ev_truth);
      // the reference fixes the node range
      const PartialOrder truth = read_partial_order(in_t).closed();
      const PartialOrder est_po = read_partial_order(in_o, truth.n());
      std::optional<TrainingSplit> split;
      if (!ev_train.empty()) {
        auto in_tr = open_in(ev_train);
        split = make_split(truth, read_partial_order(in_tr, truth.n()));
      }
      const Metrics mt = evaluate_run(est_po.closed(), truth, split ? &*split : nullptr, ev_include_train);
      json j{{"density", mt.density}};
      j["precision"] = mt.precision ? json(*mt.precision) : json(nullptr);
      std::cout << j.dump() << '\n';
    } else if (*ex) {
      Config c = Config::parse_file(ex_config);
      for (const auto& kv : ex_overrides) c.set(kv);
      const auto cfg = ExperimentSpec::from_config(c);
      const auto res = run_experiment(cfg);
      Output table(cfg.table_path);
      write_table_csv(table.stream(), res.table);
      if (!cfg.runs_path.empty()) {
        Output runs(cfg.runs_path);
        write_runs_csv(runs.stream(), res.runs);
      }
      if (!cfg.curve_path.empty()) {
        Output curve(cfg.curve_path);
        write_curve_csv(curve.stream(), res.curve);
      }
    } else if (*deg) {
      deg_model.validate();
      Rng sg(derive_seed(deg_seed, "seed-graph", 0));
      const Graph seed_graph = deg_seed_graph == "complete" ? complete_graph(deg_model.n0)
                                                            : erdos_renyi_seed(deg_model.n0, deg_p0, sg);
      const auto sim = simulate_degrees(deg_model, seed_graph, deg_s, deg_t, deg_runs, deg_seed);
      const auto rep = scaling_check(deg_model, sim, deg_edge_from);
      if (!deg_out.empty()) {
        Output out(deg_out);
        write_degree_report(out.stream(), rep);
      }
      std::cout << json{{"p", deg_model.p},
                        {"r", deg_model.r},
                        {"t_exponent", rep.t_exponent},
                        {"s_exponent", rep.s_exponent},
                        {"edge_slope", rep.edge_slope},
                        {"residual_rms", rep.residual_rms}}
                       .dump()
                << '\n';
    }
  } catch (const Error& e) {
    return report_error(to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
  return 0;
}
