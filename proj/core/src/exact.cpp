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

#include "tempord/exact.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tempord/bitrow.hpp"
#include "tempord/dd_model.hpp"

namespace tempord {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

std::vector<NodeId> free_nodes_of(const Graph& h) {
  std::vector<NodeId> out;
  for (NodeId u : h.nodes())
    if (!h.is_seed(u)) out.push_back(u);
  if (out.size() > exact_max_free_nodes)
    fail(ErrorKind::guard, "exact enumeration is limited to " +
                               std::to_string(exact_max_free_nodes) + " non-seed nodes, got " +
                               std::to_string(out.size()));
  for (NodeId u = 0; u < h.n0(); ++u)
    require(h.contains(u), ErrorKind::contract, "seed node missing");
  return out;
}

// log w(S - v, S) for every mask S and member v; indexed [S * k + i].
std::vector<double> step_table(const Graph& h, const std::vector<NodeId>& free, double p,
                               double r) {
  const std::size_t k = free.size();
  const std::size_t n = h.capacity();
  std::vector<BitRow> adj(n, BitRow(n));
  for (NodeId u : h.nodes())
    for (NodeId x : h.neighbors(u)) adj[u].set(x);
  const double lp = std::log(p), lq = std::log1p(-p);
  auto term = [](std::size_t c, double l) { return c == 0 ? 0.0 : static_cast<double>(c) * l; };

  std::vector<double> table((std::size_t{1} << k) * k, neg_inf);
  BitRow alive(n);
  std::vector<double> terms;
  for (std::size_t S = 1; S < (std::size_t{1} << k); ++S) {
    alive.clear();
    for (NodeId u = 0; u < h.n0(); ++u) alive.set(u);
    for (std::size_t i = 0; i < k; ++i)
      if (S >> i & 1) alive.set(free[i]);
    const std::size_t m = alive.count() - 1;
    if (m == 0) continue;
    const double q = r / static_cast<double>(m);
    if (q > 1.0) fail(ErrorKind::domain, "r/(t-1) exceeds 1");
    const double lr = std::log(q), ls = std::log1p(-q), lm = std::log(static_cast<double>(m));
    for (std::size_t i = 0; i < k; ++i) {
      if (!(S >> i & 1)) continue;
      const NodeId v = free[i];
      BitRow nv = adj[v];
      nv &= alive;
      const std::size_t dv = nv.count();
      terms.clear();
      alive.for_each([&](std::size_t u) {
        if (u == v) return;
        BitRow nu = adj[u];
        nu &= alive;
        const std::size_t a = nu.test(v) ? 1 : 0;
        const std::size_t both = count_and(nu, nv);
        const std::size_t ou = nu.count() - a - both;
        const std::size_t ov = dv - both;
        const std::size_t rest = m - both - ou - ov;
        terms.push_back(-lm + term(both, lp) + term(ou, lq) + term(ov, lr) + term(rest, ls));
      });
      table[S * k + i] = log_sum_exp(terms);
    }
  }
  return table;
}

}  // namespace

double OrderProbabilityTable::log_total() const { return log_sum_exp(log_probability); }

OrderProbabilityTable enumerate_orders(const Graph& h, double p, double r) {
  const auto free = free_nodes_of(h);
  const std::size_t k = free.size();
  const auto steps = step_table(h, free, p, r);
  OrderProbabilityTable out;
  out.order_length = k;
  if (k == 0) {
    out.log_probability.push_back(0.0);
    return out;
  }
  // removal[depth] = index of the node removed at that depth (youngest first)
  std::vector<std::size_t> removal(k);
  std::vector<double> acc(k + 1, 0.0);
  auto dfs = [&](auto&& self, std::size_t S, std::size_t depth) -> void {
    if (S == 0) {
      for (std::size_t d = k; d-- > 0;) out.orders.push_back(free[removal[d]]);
      out.log_probability.push_back(acc[depth]);
      return;
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (!(S >> i & 1)) continue;
      const double lw = steps[S * k + i];
      if (lw == neg_inf) continue;
      removal[depth] = i;
      acc[depth + 1] = acc[depth] + lw;
      self(self, S & ~(std::size_t{1} << i), depth + 1);
    }
  };
  dfs(dfs, (std::size_t{1} << k) - 1, 0);
  return out;
}

SubsetRecursion subset_recursion(const Graph& h, double p, double r) {
  SubsetRecursion out;
  out.free_nodes = free_nodes_of(h);
  const std::size_t k = out.free_nodes.size();
  const std::size_t full = (std::size_t{1} << k) - 1;
  const auto steps = step_table(h, out.free_nodes, p, r);
  out.log_down.assign(full + 1, neg_inf);
  out.log_up.assign(full + 1, neg_inf);
  out.log_down[0] = 0.0;
  std::vector<double> terms;
  for (std::size_t S = 1; S <= full; ++S) {
    terms.clear();
    for (std::size_t i = 0; i < k; ++i)
      if (S >> i & 1) terms.push_back(steps[S * k + i] + out.log_down[S & ~(std::size_t{1} << i)]);
    out.log_down[S] = log_sum_exp(terms);
  }
  out.log_up[full] = 0.0;
  for (std::size_t S = full + 1; S-- > 1;) {
    if (out.log_up[S] == neg_inf) continue;
    for (std::size_t i = 0; i < k; ++i) {
      if (!(S >> i & 1)) continue;
      const std::size_t T = S & ~(std::size_t{1} << i);
      out.log_up[T] = log_add(out.log_up[T], out.log_up[S] + steps[S * k + i]);
    }
  }
  return out;
}

PuvMatrix exact_puv(const Graph& h, double p, double r) {
  const auto rec = subset_recursion(h, p, r);
  const std::size_t k = rec.free_nodes.size();
  const double total = rec.log_total();
  if (total == neg_inf) fail(ErrorKind::infeasible, "no arrival order can produce this graph");
  const auto steps = step_table(h, rec.free_nodes, p, r);
  const std::size_t full = (std::size_t{1} << k) - 1;
  // num[i*k+j]: mass of orders where free[j] is removed while free[i] is present,
  // i.e. free[i] arrived before free[j]
  std::vector<double> num(k * k, neg_inf);
  for (std::size_t S = 1; S <= full; ++S) {
    if (rec.log_up[S] == neg_inf) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (!(S >> j & 1)) continue;
      const double x = rec.log_up[S] + steps[S * k + j] + rec.log_down[S & ~(std::size_t{1} << j)];
      if (x == neg_inf) continue;
      for (std::size_t i = 0; i < k; ++i)
        if (i != j && (S >> i & 1)) num[i * k + j] = log_add(num[i * k + j], x);
    }
  }
  PuvMatrix m(h.capacity(), h.n0());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double a = std::exp(num[i * k + j] - total);
      const double b = std::exp(num[j * k + i] - total);
      m.set(rec.free_nodes[i], rec.free_nodes[j], a / (a + b));
    }
  m.provenance = "exact";
  return m;
}

PuvMatrix puv_from_orders(const Graph& h, const OrderProbabilityTable& table) {
  const double total = table.log_total();
  if (total == neg_inf) fail(ErrorKind::infeasible, "no arrival order can produce this graph");
  const std::size_t n = h.capacity();
  const std::size_t L = table.order_length;
  std::vector<double> before(n * n, 0.0);
  for (std::size_t o = 0; o < table.size(); ++o) {
    const double w = std::exp(table.log_probability[o] - total);
    const NodeId* seq = table.orders.data() + o * L;
    for (std::size_t a = 0; a < L; ++a)
      for (std::size_t b = a + 1; b < L; ++b) before[seq[a] * n + seq[b]] += w;
  }
  PuvMatrix m(n, h.n0());
  for (NodeId u = static_cast<NodeId>(h.n0()); u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) {
      if (!h.contains(u) || !h.contains(v)) continue;
      const double a = before[u * n + v], b = before[v * n + u];
      m.set(u, v, a / (a + b));
    }
  m.provenance = "exact";
  return m;
}

}  // namespace tempord
