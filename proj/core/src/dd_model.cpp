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

#include "tempord/dd_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tempord {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// c * log(base) with 0 * log(0) = 0.
inline double term(std::size_t c, double log_base) noexcept {
  return c == 0 ? 0.0 : static_cast<double>(c) * log_base;
}

struct Logs {
  double lp, lq, lr, ls, lm;
};

Logs make_logs(double p, double r, std::size_t m) {
  const double q = r / static_cast<double>(m);
  if (q > 1.0) fail(ErrorKind::domain, "r/(t-1) exceeds 1");
  return {std::log(p), std::log1p(-p), std::log(q), std::log1p(-q),
          std::log(static_cast<double>(m))};
}

// log-likelihood from the four set sizes; m = |nodes| - 1.
inline double parent_term(const Logs& L, std::size_t m, std::size_t both, std::size_t ou,
                          std::size_t ov) noexcept {
  const std::size_t rest = m - both - ou - ov;
  return -L.lm + term(both, L.lp) + term(ou, L.lq) + term(ov, L.lr) + term(rest, L.ls);
}

}  // namespace

double log_sum_exp(std::span<const double> xs) noexcept {
  double mx = neg_inf;
  for (double x : xs) mx = std::max(mx, x);
  if (mx == neg_inf) return neg_inf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - mx);
  return mx + std::log(s);
}

double log_add(double a, double b) noexcept {
  if (a < b) std::swap(a, b);
  if (b == neg_inf) return a;
  return a + std::log1p(std::exp(b - a));
}

void DDParams::validate() const {
  require(p >= 0.0 && p <= 1.0, ErrorKind::domain, "p must lie in [0,1]");
  require(r >= 0.0 && std::isfinite(r), ErrorKind::domain, "r must be non-negative");
  require(n0 >= 1, ErrorKind::domain, "seed size must be at least 1");
  require(n >= n0, ErrorKind::domain, "n must be at least n0");
  // r/k is largest at k = n0
  require(n == n0 || r <= static_cast<double>(n0), ErrorKind::domain,
          "r/k exceeds 1 at the first growth step");
}

GeneratedGraph generate(const DDParams& params, const Graph& seed_graph, Rng& rng,
                        const GrowthObserver& observer) {
  params.validate();
  require(seed_graph.capacity() == params.n0 && seed_graph.num_nodes() == params.n0,
          ErrorKind::contract, "seed graph must have exactly n0 nodes");
  Graph g = seed_graph;
  g.set_n0(params.n0);
  std::vector<char> in_parent;
  std::vector<NodeId> nb;
  for (std::size_t k = params.n0; k < params.n; ++k) {
    const auto parent = static_cast<NodeId>(uniform_index(rng, k));
    nb.clear();
    const auto pn = g.neighbors(parent);
    for (NodeId x : pn)
      if (bernoulli(rng, params.p)) nb.push_back(x);
    const double q = params.r / static_cast<double>(k);
    if (q > 0.0) {
      in_parent.assign(k, 0);
      for (NodeId x : pn) in_parent[x] = 1;
      const double log1mq = std::log1p(-q);
      const std::size_t before = nb.size();
      // Bernoulli(q) on every position by geometric skips; neighbours of the
      // parent are skipped over
      std::uint64_t pos = geometric_skip(rng, log1mq);
      while (pos < k) {
        if (!in_parent[pos]) nb.push_back(static_cast<NodeId>(pos));
        const std::uint64_t step = geometric_skip(rng, log1mq);
        if (step >= k) break;
        pos += step + 1;
      }
      std::inplace_merge(nb.begin(), nb.begin() + static_cast<std::ptrdiff_t>(before), nb.end());
    }
    g.append_node(nb);
    if (observer) observer(g);
  }
  GeneratedGraph out{std::move(g), {}};
  out.arrival.resize(params.n);
  for (std::size_t i = 0; i < params.n; ++i) out.arrival[i] = static_cast<NodeId>(i);
  return out;
}

double log_parent_likelihood(const Graph& h, NodeId v, NodeId u, double p, double r) {
  require(u != v && h.contains(u) && h.contains(v), ErrorKind::contract,
          "parent and child must be distinct present nodes");
  const std::size_t m = h.num_nodes() - 1;
  const Logs L = make_logs(p, r, m);
  const std::size_t both = h.common_neighbors(u, v);
  const std::size_t adj = h.has_edge(u, v) ? 1 : 0;
  const std::size_t ou = h.degree(u) - adj - both;
  const std::size_t ov = h.degree(v) - both;
  return parent_term(L, m, both, ou, ov);
}

double parent_likelihood(const Graph& h, NodeId v, NodeId u, double p, double r) {
  return std::exp(log_parent_likelihood(h, v, u, p, r));
}

double log_step_likelihood(const Graph& h, NodeId v, double p, double r) {
  require(h.contains(v), ErrorKind::contract, "node is not present");
  require(h.num_nodes() > h.n0(), ErrorKind::contract,
          "step likelihood needs more nodes than the seed");
  std::vector<double> terms;
  for (NodeId u : h.nodes())
    if (u != v) terms.push_back(log_parent_likelihood(h, v, u, p, r));
  return log_sum_exp(terms);
}

double step_likelihood(const Graph& h, NodeId v, double p, double r) {
  return std::exp(log_step_likelihood(h, v, p, r));
}

bool all_removable(std::size_t alive, double p, double r) noexcept {
  if (alive < 2) return false;
  const double m = static_cast<double>(alive - 1);
  return p > 0.0 && p < 1.0 && r > 0.0 && r < m;
}

std::vector<NodeId> removable_set(const Graph& h, double p, double r) {
  std::vector<NodeId> out;
  if (h.num_nodes() <= h.n0()) return out;
  const bool every = all_removable(h.num_nodes(), p, r);
  for (NodeId v : h.nodes()) {
    if (h.is_seed(v)) continue;
    if (every || log_step_likelihood(h, v, p, r) > neg_inf) out.push_back(v);
  }
  return out;
}

PeelingState::PeelingState(const Graph& h, double p, double r)
    : h_(&h), p_(p), r_(r), lp_(std::log(p)), lq_(std::log1p(-p)) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::domain, "p must lie in [0,1]");
  require(r >= 0.0, ErrorKind::domain, "r must be non-negative");
  const std::size_t n = h.capacity();
  alive_.resize(n);
  pos_.resize(n);
  deg_.resize(n);
  common_.assign(n, 0);
  adj_v_.assign(n, 0);
  std::size_t md = 0;
  for (NodeId u = 0; u < n; ++u) md = std::max(md, h.degree(u));
  hist_.assign(md + 2, 0);
  sub_.assign(md + 2, 0);
  reset();
}

void PeelingState::reset() {
  const Graph& h = *h_;
  alive_list_.clear();
  std::fill(hist_.begin(), hist_.end(), 0);
  max_deg_ = 0;
  for (NodeId u = 0; u < h.capacity(); ++u) {
    alive_[u] = h.contains(u) ? 1 : 0;
    if (!alive_[u]) continue;
    pos_[u] = static_cast<std::uint32_t>(alive_list_.size());
    alive_list_.push_back(u);
    deg_[u] = static_cast<std::uint32_t>(h.degree(u));
    ++hist_[deg_[u]];
    max_deg_ = std::max<std::size_t>(max_deg_, deg_[u]);
  }
}

void PeelingState::remove(NodeId v) {
  require(alive(v), ErrorKind::contract, "cannot delete an absent node");
  require(!h_->is_seed(v), ErrorKind::contract, "cannot delete a seed node");
  alive_[v] = 0;
  const std::uint32_t i = pos_[v];
  const NodeId last = alive_list_.back();
  alive_list_[i] = last;
  pos_[last] = i;
  alive_list_.pop_back();
  --hist_[deg_[v]];
  for (NodeId x : h_->neighbors(v)) {
    if (!alive_[x]) continue;
    --hist_[deg_[x]];
    --deg_[x];
    ++hist_[deg_[x]];
  }
  while (max_deg_ > 0 && hist_[max_deg_] == 0) --max_deg_;
}

double PeelingState::log_step_likelihood(NodeId v) {
  require(alive(v), ErrorKind::contract, "node is not present");
  require(alive_count() > h_->n0(), ErrorKind::contract,
          "step likelihood needs more nodes than the seed");
  const std::size_t m = alive_count() - 1;
  if (m == 0) return neg_inf;
  const Logs L = make_logs(p_, r_, m);
  const std::size_t dv = deg_[v];

  touched_.clear();
  for (NodeId x : h_->neighbors(v)) {
    if (!alive_[x]) continue;
    adj_v_[x] = 1;
    touched_.push_back(x);
  }
  const std::size_t adjacent = touched_.size();
  for (std::size_t i = 0; i < adjacent; ++i) {
    for (NodeId y : h_->neighbors(touched_[i])) {
      if (!alive_[y] || y == v) continue;
      if (common_[y]++ == 0 && !adj_v_[y]) touched_.push_back(y);
    }
  }

  terms_.clear();
  ++sub_[dv];
  for (NodeId u : touched_) {
    const std::size_t both = common_[u];
    const std::size_t a = adj_v_[u];
    const std::size_t ou = deg_[u] - a - both;
    const std::size_t ov = dv - both;
    terms_.push_back(parent_term(L, m, both, ou, ov));
    ++sub_[deg_[u]];
  }
  for (std::size_t d = 0; d <= max_deg_; ++d) {
    const std::size_t c = hist_[d] - sub_[d];
    if (c == 0) continue;
    const double t = parent_term(L, m, 0, d, dv);
    if (t == neg_inf) continue;
    terms_.push_back(std::log(static_cast<double>(c)) + t);
  }
  --sub_[dv];
  for (NodeId u : touched_) {
    --sub_[deg_[u]];
    common_[u] = 0;
    adj_v_[u] = 0;
  }
  return log_sum_exp(terms_);
}

double PeelingState::log_step_likelihood_naive(NodeId v) const {
  require(alive(v), ErrorKind::contract, "node is not present");
  const std::size_t m = alive_count() - 1;
  if (m == 0) return neg_inf;
  const Logs L = make_logs(p_, r_, m);
  std::vector<double> terms;
  for (NodeId u : alive_list_) {
    if (u == v) continue;
    std::size_t both = 0, a = 0;
    for (NodeId x : h_->neighbors(u)) {
      if (!alive_[x]) continue;
      if (x == v) {
        a = 1;
        continue;
      }
      const auto nv = h_->neighbors(v);
      if (std::binary_search(nv.begin(), nv.end(), x)) ++both;
    }
    terms.push_back(parent_term(L, m, both, deg_[u] - a - both, deg_[v] - both));
  }
  return log_sum_exp(terms);
}

}  // namespace tempord
