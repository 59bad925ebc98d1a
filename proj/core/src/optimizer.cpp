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

#include "tempord/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <ostream>

namespace tempord {

namespace {

std::vector<SmallPoset> extend(const std::vector<SmallPoset>& smaller, std::size_t n) {
  // new node x = n-1: a down-set D precedes x, x precedes an up-set U, and
  // every d in D already precedes every u in U. Each poset arises once.
  std::vector<SmallPoset> out;
  if (n == 0 || n > poset_max_nodes) return out;
  const std::size_t m = n - 1;
  const unsigned full = (1U << m) - 1;
  for (const auto& P : smaller) {
    std::array<unsigned, poset_max_nodes> pred{};
    for (std::size_t u = 0; u < m; ++u)
      for (std::size_t v = 0; v < m; ++v)
        if (P[u] >> v & 1) pred[v] |= 1U << u;
    for (unsigned D = 0; D <= full; ++D) {
      bool down_closed = true;
      for (std::size_t a = 0; a < m && down_closed; ++a)
        if ((D >> a & 1) && (pred[a] & ~D)) down_closed = false;
      if (!down_closed) continue;
      for (unsigned U = 0; U <= full; ++U) {
        if (U & D) continue;
        bool ok = true;
        for (std::size_t a = 0; a < m && ok; ++a) {
          if ((U >> a & 1) && (P[a] & ~U)) ok = false;          // up-closed
          if ((D >> a & 1) && (U & ~P[a])) ok = false;          // d < u for all
        }
        if (!ok) continue;
        SmallPoset Q = P;
        for (std::size_t a = 0; a < m; ++a)
          if (D >> a & 1) Q[a] |= static_cast<std::uint8_t>(1U << m);
        Q[m] = static_cast<std::uint8_t>(U);
        out.push_back(Q);
      }
    }
  }
  return out;
}

std::size_t poset_pairs(const SmallPoset& P, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t u = 0; u < n; ++u) c += static_cast<std::size_t>(std::popcount(P[u]));
  return c;
}

}  // namespace

const std::vector<SmallPoset>& enumerate_posets(std::size_t n) {
  require(n <= poset_max_nodes, ErrorKind::guard,
          "poset enumeration is limited to " + std::to_string(poset_max_nodes) + " nodes");
  static std::mutex mu;
  static std::array<std::vector<SmallPoset>, poset_max_nodes + 1> cache;
  static std::size_t built = 0;
  std::lock_guard<std::mutex> lock(mu);
  if (built == 0) {
    cache[0] = {SmallPoset{}};
    built = 1;
  }
  while (built <= n) {
    cache[built] = extend(cache[built - 1], built);
    ++built;
  }
  return cache[n];
}

std::size_t PrecisionProgram::min_pairs() const {
  require(puv != nullptr, ErrorKind::contract, "program without p(u,v)");
  require(epsilon > 0.0 && epsilon <= 1.0, ErrorKind::domain, "epsilon must lie in (0,1]");
  const double need = epsilon * static_cast<double>(pair_count(puv->n()));
  if (need < 1.0 - 1e-9) fail(ErrorKind::domain, "epsilon * C(n,2) must be at least 1");
  return static_cast<std::size_t>(std::ceil(need - 1e-9));
}

double PrecisionProgram::cap() const {
  min_pairs();
  return 1.0 / (epsilon * static_cast<double>(pair_count(puv->n())));
}

IpSolution solve_ip_bruteforce(const PrecisionProgram& prog) {
  const std::size_t need = prog.min_pairs();
  const PuvMatrix& m = *prog.puv;
  const std::size_t n = m.n();
  const auto& posets = enumerate_posets(n);
  double best = -1.0;
  std::size_t best_pairs = 0;
  std::vector<std::pair<NodeId, NodeId>> best_list;
  const SmallPoset* best_poset = nullptr;
  std::vector<std::pair<NodeId, NodeId>> list;
  for (const auto& P : posets) {
    const std::size_t k = poset_pairs(P, n);
    if (k < need) continue;
    double s = 0.0;
    list.clear();
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v)
        if (P[u] >> v & 1) {
          s += m(u, v);
          list.emplace_back(u, v);
        }
    const double j = s / static_cast<double>(k);
    bool better = j > best + 1e-12;
    if (!better && std::abs(j - best) <= 1e-12)
      better = k > best_pairs || (k == best_pairs && list < best_list);
    if (better) {
      best = j;
      best_pairs = k;
      best_list = list;
      best_poset = &P;
    }
  }
  if (!best_poset) fail(ErrorKind::infeasible, "no partial order meets the density constraint");
  IpSolution out{PartialOrder(n), best, best_pairs};
  for (auto [u, v] : best_list) out.order.add(u, v);
  return out;
}

double lp_violation(const PuvMatrix& m, double epsilon, const std::vector<double>& y) {
  const std::size_t n = m.n();
  const double s = 1.0 / (epsilon * static_cast<double>(pair_count(n)));
  double worst = 0.0, total = 0.0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      const double x = y[u * n + v];
      total += x;
      worst = std::max({worst, -x, x - s});
      if (u < v) worst = std::max(worst, x + y[v * n + u] - s);
    }
  worst = std::max(worst, std::abs(total - 1.0));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t w = 0; w < n; ++w) {
        if (u == v || v == w || u == w) continue;
        worst = std::max(worst, y[u * n + v] + y[v * n + w] - y[u * n + w] - s);
      }
  return worst;
}

LpRelaxation solve_lp(const PrecisionProgram& prog, const LpOptions& options) {
  const PuvMatrix& m = *prog.puv;
  const std::size_t n = m.n();
  require(n <= options.max_nodes, ErrorKind::guard,
          "linear relaxation is limited to " + std::to_string(options.max_nodes) + " nodes");
  require(n >= 2, ErrorKind::contract, "need at least two nodes");
  const double s = prog.cap();

  // variable index of ordered pair (u,v)
  std::vector<std::size_t> var(n * n, 0);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v) {
        var[u * n + v] = pairs.size();
        pairs.emplace_back(u, v);
      }

  LinearProgram lp;
  lp.num_vars = pairs.size();
  lp.objective.resize(pairs.size());
  lp.upper.assign(pairs.size(), s);
  for (std::size_t k = 0; k < pairs.size(); ++k) lp.objective[k] = m(pairs[k].first, pairs[k].second);
  {
    std::vector<std::pair<std::size_t, double>> all;
    for (std::size_t k = 0; k < pairs.size(); ++k) all.emplace_back(k, 1.0);
    lp.add_eq(std::move(all), 1.0);
  }
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) lp.add_le({{var[u * n + v], 1.0}, {var[v * n + u], 1.0}}, s);

  auto add_triple = [&](std::size_t u, std::size_t v, std::size_t w) {
    lp.add_le({{var[u * n + v], 1.0}, {var[v * n + w], 1.0}, {var[u * n + w], -1.0}}, s);
  };
  std::size_t trans = 0;
  if (!options.lazy) {
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w)
          if (u != v && v != w && u != w) {
            add_triple(u, v, w);
            ++trans;
          }
  }

  LpRelaxation out;
  std::vector<double> y(n * n, 0.0);
  for (std::size_t round = 0;; ++round) {
    const LpSolution sol = solve_simplex(lp, options.simplex);
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t k = 0; k < pairs.size(); ++k)
      y[pairs[k].first * n + pairs[k].second] = sol.x[k];
    out.objective = sol.objective;
    out.rounds = round + 1;
    if (!options.lazy) break;
    struct Cut {
      double viol;
      std::size_t u, v, w;
    };
    std::vector<Cut> cuts;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) {
        if (u == v || y[u * n + v] <= 1e-12) continue;
        for (std::size_t w = 0; w < n; ++w) {
          if (w == u || w == v) continue;
          const double viol = y[u * n + v] + y[v * n + w] - y[u * n + w] - s;
          if (viol > 1e-9) cuts.push_back({viol, u, v, w});
        }
      }
    if (cuts.empty()) break;
    if (round + 1 >= options.max_rounds)
      throw SolverError(out.objective, "transitivity cut rounds exhausted");
    std::stable_sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.viol > b.viol; });
    if (cuts.size() > options.cuts_per_round) cuts.resize(options.cuts_per_round);
    for (const auto& c : cuts) add_triple(c.u, c.v, c.w);
    trans += cuts.size();
  }
  out.y = std::move(y);
  out.transitivity_rows = trans;
  return out;
}

std::vector<CurvePoint> optimal_curve(const PuvMatrix& m, const std::vector<double>& epsilons,
                                      const LpOptions& options) {
  std::vector<CurvePoint> out;
  const double total = static_cast<double>(pair_count(m.n()));
  for (double eps : epsilons) {
    PrecisionProgram prog{&m, eps};
    CurvePoint pt;
    pt.epsilon = eps;
    if (m.n() <= poset_max_nodes) {
      const auto ip = solve_ip_bruteforce(prog);
      pt.density = static_cast<double>(ip.pairs) / total;
      pt.precision = ip.objective;
      pt.kind = "exact-ip";
    } else {
      const auto lp = solve_lp(prog, options);
      pt.density = eps;
      pt.precision = lp.objective;
      pt.kind = "lp-bound";
    }
    out.push_back(pt);
  }
  return out;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "epsilon,density,precision,kind\n";
  for (const auto& p : curve) out << p.epsilon << ',' << p.density << ',' << p.precision << ',' << p.kind << '\n';
}

PuvMatrix restrict_matrix(const PuvMatrix& m, const std::vector<NodeId>& nodes) {
  PuvMatrix out(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      out.set(static_cast<NodeId>(i), static_cast<NodeId>(j), m(nodes[i], nodes[j]));
  out.provenance = m.provenance;
  return out;
}

Lemma1Report lemma1_bound_check(const PuvMatrix& m, double epsilon, double lambda,
                                std::size_t trials, Rng& rng) {
  require(lambda >= 0.0, ErrorKind::domain, "lambda must be non-negative");
  Lemma1Report rep;
  rep.trials = trials;
  rep.lambda = lambda;
  rep.bound = 3.0 * lambda;
  const double exact = solve_ip_bruteforce({&m, epsilon}).objective;
  for (std::size_t t = 0; t < trials; ++t) {
    PuvMatrix noisy = m;
    for (NodeId u = 0; u < m.n(); ++u)
      for (NodeId v = u + 1; v < m.n(); ++v) {
        const double noise = lambda * (2.0 * uniform01(rng) - 1.0);
        noisy.set(u, v, std::clamp(m(u, v) + noise, 0.0, 1.0));
      }
    const double approx = solve_ip_bruteforce({&noisy, epsilon}).objective;
    const double gap = std::abs(approx - exact);
    if (gap > rep.bound + 1e-12) ++rep.violations;
    if (gap >= rep.max_gap) {
      rep.max_gap = gap;
      rep.witness = noisy;
    }
  }
  return rep;
}

}  // namespace tempord
