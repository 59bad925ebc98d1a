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

#include "tempord/estimators.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace tempord {

namespace {

std::vector<NodeId> subset_or_all(std::size_t n, std::span<const NodeId> nodes) {
  if (!nodes.empty()) {
    for (NodeId u : nodes) require(u < n, ErrorKind::contract, "node outside the graph");
    return {nodes.begin(), nodes.end()};
  }
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), NodeId{0});
  return all;
}

std::vector<NodeId> present_subset(const Graph& h, std::span<const NodeId> nodes) {
  auto out = subset_or_all(h.capacity(), nodes);
  std::erase_if(out, [&](NodeId u) { return !h.contains(u); });
  return out;
}

PartialOrder from_youngest_first(std::size_t n, std::vector<std::vector<NodeId>> layers) {
  std::reverse(layers.begin(), layers.end());
  return order_from_bins(n, layers);
}

}  // namespace

PartialOrder order_from_bins(std::size_t n, const std::vector<std::vector<NodeId>>& bins) {
  PartialOrder po(n);
  BitRow later(n);
  for (auto it = bins.rbegin(); it != bins.rend(); ++it) {
    for (NodeId u : *it) {
      require(u < n && !later.test(u), ErrorKind::contract, "bins overlap");
      later.for_each([&](std::size_t v) { po.add(u, static_cast<NodeId>(v)); });
    }
    for (NodeId u : *it) later.set(u);
  }
  return po;
}

PartialOrder sort_by_scores(std::size_t n, std::span<const double> scores, std::size_t bin_size,
                            std::span<const NodeId> nodes) {
  require(bin_size >= 1, ErrorKind::contract, "bin size must be at least 1");
  require(scores.size() >= n, ErrorKind::contract, "missing scores");
  auto order = subset_or_all(n, nodes);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  std::vector<std::vector<NodeId>> bins;
  for (std::size_t i = 0; i < order.size(); i += bin_size)
    bins.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                      order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), i + bin_size)));
  return order_from_bins(n, bins);
}

PartialOrder sort_by_puv_sum(const PuvMatrix& m, std::size_t bin_size,
                             std::span<const NodeId> nodes) {
  const auto subset = subset_or_all(m.n(), nodes);
  std::vector<double> scores(m.n(), 0.0);
  for (NodeId u : subset) scores[u] = m.row_sum(u, subset);
  return sort_by_scores(m.n(), scores, bin_size, subset);
}

PartialOrder puv_threshold(const PuvMatrix& m, double tau, std::span<const NodeId> nodes) {
  require(tau >= 0.5 && tau <= 1.0, ErrorKind::domain, "threshold must lie in [0.5, 1]");
  const auto subset = subset_or_all(m.n(), nodes);
  PartialOrder po(m.n());
  for (NodeId u : subset)
    for (NodeId v : subset) {
      if (u == v) continue;
      const double x = m(u, v);
      if (x > tau || (tau == 1.0 && x == 1.0)) po.add(u, v);
    }
  return po.closed();
}

PartialOrder sort_by_degree(const Graph& h, std::size_t bin_size, std::span<const NodeId> nodes) {
  require(bin_size >= 1, ErrorKind::contract, "bin size must be at least 1");
  auto order = present_subset(h, nodes);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (h.degree(a) != h.degree(b)) return h.degree(a) > h.degree(b);
    return a < b;
  });
  std::vector<std::vector<NodeId>> bins;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (bins.empty() ||
        (bins.back().size() >= bin_size && h.degree(order[i]) != h.degree(bins.back().back())))
      bins.emplace_back();
    bins.back().push_back(order[i]);
  }
  return order_from_bins(h.capacity(), bins);
}

PartialOrder peel_by_degree(const Graph& h, std::span<const NodeId> nodes) {
  auto present = present_subset(h, nodes);
  std::vector<char> alive(h.capacity(), 0);
  for (NodeId u : h.nodes()) alive[u] = 1;
  std::vector<std::size_t> deg(h.capacity(), 0);
  for (NodeId u : h.nodes()) deg[u] = h.degree(u);
  std::vector<std::vector<NodeId>> layers;
  while (!present.empty()) {
    std::size_t lo = deg[present.front()];
    for (NodeId u : present) lo = std::min(lo, deg[u]);
    std::vector<NodeId> layer, rest;
    for (NodeId u : present) (deg[u] == lo ? layer : rest).push_back(u);
    for (NodeId u : layer) {
      alive[u] = 0;
      for (NodeId x : h.neighbors(u))
        if (alive[x]) --deg[x];
    }
    layers.push_back(std::move(layer));
    present = std::move(rest);
  }
  return from_youngest_first(h.capacity(), std::move(layers));
}

PartialOrder sort_by_neighborhood(const Graph& h, double r_slack, std::span<const NodeId> nodes) {
  require(r_slack >= 0.0, ErrorKind::domain, "slack must be non-negative");
  const std::size_t n = h.capacity();
  const auto subset = present_subset(h, nodes);
  std::vector<char> in_subset(n, 0);
  for (NodeId u : subset) in_subset[u] = 1;

  // |N(v) \ N(u)| = deg v - common(u,v); common counts come from 2-hop walks
  std::vector<std::uint32_t> common(n, 0);
  struct Cand {
    NodeId u, v;
  };
  std::vector<Cand> cands;
  auto qualifies = [&](std::size_t deg_small, std::size_t shared, double slack) {
    return static_cast<double>(deg_small - shared) <= slack;
  };
  for (NodeId v : subset) {
    for (NodeId x : h.neighbors(v))
      for (NodeId y : h.neighbors(x)) ++common[y];
    for (NodeId u : subset) {
      if (u == v) continue;
      const std::size_t dv = h.degree(v), du = h.degree(u);
      // (u older than v): N(v) nearly inside N(u)
      if (du < dv || !qualifies(dv, common[u], r_slack)) continue;
      // mutual: (v older than u) would qualify as well
      if (dv >= du && qualifies(du, common[u], r_slack)) continue;
      cands.push_back({u, v});
    }
    for (NodeId x : h.neighbors(v))
      for (NodeId y : h.neighbors(x)) common[y] = 0;
  }
  std::stable_sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
    if (h.degree(a.u) != h.degree(b.u)) return h.degree(a.u) > h.degree(b.u);
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });

  // incremental closure with successor and predecessor rows
  std::vector<BitRow> succ(n, BitRow(n)), pred(n, BitRow(n));
  for (const auto& c : cands) {
    if (c.u == c.v || succ[c.u].test(c.v)) continue;
    if (succ[c.v].test(c.u)) continue;  // would close a cycle
    BitRow down = succ[c.v];
    down.set(c.v);
    BitRow up = pred[c.u];
    up.set(c.u);
    up.for_each([&](std::size_t a) { succ[a] |= down; });
    down.for_each([&](std::size_t b) { pred[b] |= up; });
  }
  PartialOrder po(n);
  for (NodeId u = 0; u < n; ++u)
    succ[u].for_each([&](std::size_t v) { po.add(u, static_cast<NodeId>(v)); });
  return po;
}

PartialOrder peel_by_neighborhood(const Graph& h, double r_slack, std::size_t stop_size,
                                  std::span<const NodeId> nodes) {
  require(r_slack >= 0.0, ErrorKind::domain, "slack must be non-negative");
  const std::size_t n = h.capacity();
  auto present = present_subset(h, nodes);
  std::vector<char> alive(n, 0);
  std::size_t alive_count = 0;
  for (NodeId u : h.nodes()) {
    alive[u] = 1;
    ++alive_count;
  }
  std::vector<std::size_t> deg(n, 0);
  for (NodeId u : h.nodes()) deg[u] = h.degree(u);
  std::vector<std::uint32_t> common(n, 0);
  std::vector<NodeId> touched;
  std::vector<std::vector<NodeId>> layers;
  while (!present.empty() && present.size() > stop_size) {
    std::vector<NodeId> layer, rest;
    for (NodeId u : present) {
      bool covered = false;
      if (alive_count >= 2 && static_cast<double>(deg[u]) <= r_slack) {
        covered = true;
      } else {
        touched.clear();
        for (NodeId x : h.neighbors(u)) {
          if (!alive[x]) continue;
          for (NodeId y : h.neighbors(x)) {
            if (!alive[y] || y == u) continue;
            if (common[y]++ == 0) touched.push_back(y);
          }
        }
        for (NodeId y : touched) {
          if (static_cast<double>(deg[u] - common[y]) <= r_slack) covered = true;
          common[y] = 0;
        }
      }
      (covered ? layer : rest).push_back(u);
    }
    if (layer.empty()) break;  // fixpoint
    for (NodeId u : layer) {
      alive[u] = 0;
      --alive_count;
      for (NodeId x : h.neighbors(u))
        if (alive[x]) --deg[x];
    }
    layers.push_back(std::move(layer));
    present = std::move(rest);
  }
  if (!present.empty()) layers.push_back(std::move(present));
  return from_youngest_first(n, std::move(layers));
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
T parse_number(std::string_view s, const char* what) {
  T x{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrorKind::parse, std::string("bad ") + what + " `" + std::string(s) + "`");
  return x;
}

}  // namespace

EstimatorConfig EstimatorConfig::parse(std::string_view text) {
  EstimatorConfig c;
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (name == "sort-by-puv-sum") {
    c.kind = EstimatorKind::sort_by_puv_sum;
    if (!arg.empty()) c.bin_size = parse_number<std::size_t>(arg, "bin size");
  } else if (name == "puv-threshold") {
    c.kind = EstimatorKind::puv_threshold;
    if (!arg.empty()) c.tau = parse_number<double>(arg, "threshold");
  } else if (name == "sort-by-degree") {
    c.kind = EstimatorKind::sort_by_degree;
    if (!arg.empty()) c.bin_size = parse_number<std::size_t>(arg, "bin size");
  } else if (name == "peel-by-degree") {
    c.kind = EstimatorKind::peel_by_degree;
  } else if (name == "sort-by-neighborhood") {
    c.kind = EstimatorKind::sort_by_neighborhood;
    if (!arg.empty()) c.r_slack = parse_number<double>(arg, "slack");
  } else if (name == "peel-by-neighborhood") {
    c.kind = EstimatorKind::peel_by_neighborhood;
    if (!arg.empty()) c.r_slack = parse_number<double>(arg, "slack");
  } else {
    fail(ErrorKind::parse, "unknown estimator `" + std::string(name) + "`");
  }
  if (c.bin_size == 0) fail(ErrorKind::domain, "bin size must be at least 1");
  if (c.tau < 0.5 || c.tau > 1.0) fail(ErrorKind::domain, "threshold must lie in [0.5, 1]");
  if (c.r_slack < 0.0) fail(ErrorKind::domain, "slack must be non-negative");
  return c;
}

std::string EstimatorConfig::label() const {
  std::ostringstream s;
  switch (kind) {
    case EstimatorKind::sort_by_puv_sum: s << "sort-by-puv-sum:" << bin_size; break;
    case EstimatorKind::puv_threshold: s << "puv-threshold:" << tau; break;
    case EstimatorKind::sort_by_degree: s << "sort-by-degree:" << bin_size; break;
    case EstimatorKind::peel_by_degree: s << "peel-by-degree"; break;
    case EstimatorKind::sort_by_neighborhood: s << "sort-by-neighborhood:" << r_slack; break;
    case EstimatorKind::peel_by_neighborhood: s << "peel-by-neighborhood:" << r_slack; break;
  }
  return s.str();
}

PartialOrder run_estimator(const EstimatorConfig& c, const EstimatorInput& in) {
  if (c.needs_puv()) {
    if (c.kind == EstimatorKind::sort_by_puv_sum && !in.puv && in.scores) {
      require(in.graph != nullptr, ErrorKind::contract, "score ordering needs the graph size");
      return sort_by_scores(in.graph->capacity(), *in.scores, c.bin_size, in.nodes);
    }
    require(in.puv != nullptr, ErrorKind::contract, "estimator needs a p(u,v) matrix");
    if (c.kind == EstimatorKind::sort_by_puv_sum) return sort_by_puv_sum(*in.puv, c.bin_size, in.nodes);
    return puv_threshold(*in.puv, c.tau, in.nodes);
  }
  require(in.graph != nullptr, ErrorKind::contract, "estimator needs the graph");
  switch (c.kind) {
    case EstimatorKind::sort_by_degree: return sort_by_degree(*in.graph, c.bin_size, in.nodes);
    case EstimatorKind::peel_by_degree: return peel_by_degree(*in.graph, in.nodes);
    case EstimatorKind::sort_by_neighborhood: return sort_by_neighborhood(*in.graph, c.r_slack, in.nodes);
    case EstimatorKind::peel_by_neighborhood:
      return peel_by_neighborhood(*in.graph, c.r_slack, c.stop_size, in.nodes);
    default: break;
  }
  fail(ErrorKind::contract, "unhandled estimator");
}

}  // namespace tempord
