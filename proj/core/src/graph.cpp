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

#include "tempord/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace tempord {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::contract: return "contract";
    case ErrorKind::domain: return "domain";
    case ErrorKind::cycle: return "cycle";
    case ErrorKind::guard: return "guard";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::parse: return "parse";
    case ErrorKind::solver: return "solver";
    case ErrorKind::io: return "io";
    case ErrorKind::empty_reference: return "empty-reference";
    case ErrorKind::no_common_pairs: return "no-common-pairs";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

Graph::Graph(std::size_t n, std::size_t n0)
    : adj_(n), alive_(n, 1), alive_count_(n), n0_(n0) {
  require(n0 <= n, ErrorKind::contract, "seed count exceeds node count");
}

void Graph::set_n0(std::size_t n0) {
  require(n0 <= capacity(), ErrorKind::contract, "seed count exceeds node count");
  for (std::size_t u = 0; u < n0; ++u)
    require(alive_[u] != 0, ErrorKind::contract, "seed id refers to a deleted node");
  n0_ = n0;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (!contains(u) || !contains(v)) return false;
  const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  const NodeId x = adj_[u].size() <= adj_[v].size() ? v : u;
  return std::binary_search(a.begin(), a.end(), x);
}

std::vector<NodeId> Graph::nodes() const {
  std::vector<NodeId> out;
  out.reserve(alive_count_);
  for (std::size_t u = 0; u < adj_.size(); ++u)
    if (alive_[u]) out.push_back(static_cast<NodeId>(u));
  return out;
}

bool Graph::add_edge(NodeId u, NodeId v) {
  require(contains(u) && contains(v), ErrorKind::contract, "edge endpoint is not a node");
  if (u == v) return false;
  auto& au = adj_[u];
  auto it = std::lower_bound(au.begin(), au.end(), v);
  if (it != au.end() && *it == v) return false;
  au.insert(it, v);
  auto& av = adj_[v];
  av.insert(std::lower_bound(av.begin(), av.end(), u), u);
  ++edge_count_;
  return true;
}

NodeId Graph::append_node(std::span<const NodeId> sorted_neighbors) {
  const auto id = static_cast<NodeId>(adj_.size());
  for (std::size_t i = 0; i < sorted_neighbors.size(); ++i) {
    const NodeId x = sorted_neighbors[i];
    require(contains(x), ErrorKind::contract, "neighbour is not a node");
    require(i == 0 || sorted_neighbors[i - 1] < x, ErrorKind::contract,
            "neighbour list must be sorted and distinct");
  }
  adj_.emplace_back(sorted_neighbors.begin(), sorted_neighbors.end());
  alive_.push_back(1);
  ++alive_count_;
  // the new id is the largest, so pushing back keeps every list sorted
  for (NodeId x : sorted_neighbors) adj_[x].push_back(id);
  edge_count_ += sorted_neighbors.size();
  return id;
}

void Graph::remove_node(NodeId v) {
  require(contains(v), ErrorKind::contract, "cannot delete an absent node");
  require(!is_seed(v), ErrorKind::contract, "cannot delete a seed node");
  for (NodeId x : adj_[v]) {
    auto& ax = adj_[x];
    ax.erase(std::lower_bound(ax.begin(), ax.end(), v));
  }
  edge_count_ -= adj_[v].size();
  adj_[v].clear();
  alive_[v] = 0;
  --alive_count_;
}

std::size_t Graph::common_neighbors(NodeId u, NodeId v) const {
  const auto& a = adj_[u];
  const auto& b = adj_[v];
  std::size_t i = 0, j = 0, c = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++c;
      ++i;
      ++j;
    }
  }
  return c;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.n0_ == b.n0_ && a.alive_ == b.alive_ && a.adj_ == b.adj_;
}

Graph delete_node(const Graph& g, NodeId v) {
  Graph out = g;
  out.remove_node(v);
  return out;
}

Permutation::Permutation(std::vector<NodeId> mapping, std::size_t n0)
    : map_(std::move(mapping)), n0_(n0) {
  require(n0 <= map_.size(), ErrorKind::contract, "permutation seed count exceeds size");
  std::vector<char> hit(map_.size(), 0);
  for (NodeId x : map_) {
    require(x < map_.size() && !hit[x], ErrorKind::contract, "mapping is not a bijection");
    hit[x] = 1;
  }
  for (std::size_t i = 0; i < n0; ++i)
    require(map_[i] == i, ErrorKind::contract, "permutation must fix seed ids");
}

Permutation Permutation::identity(std::size_t n, std::size_t n0) {
  std::vector<NodeId> m(n);
  std::iota(m.begin(), m.end(), NodeId{0});
  return Permutation(std::move(m), n0);
}

Permutation Permutation::random(std::size_t n, std::size_t n0, Rng& rng) {
  std::vector<NodeId> m(n);
  std::iota(m.begin(), m.end(), NodeId{0});
  // Fisher-Yates on the non-seed tail
  for (std::size_t i = n; i > n0 + 1; --i) {
    const std::size_t j = n0 + uniform_index(rng, i - n0);
    std::swap(m[i - 1], m[j]);
  }
  return Permutation(std::move(m), n0);
}

Permutation Permutation::inverse() const {
  std::vector<NodeId> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = static_cast<NodeId>(i);
  Permutation out;
  out.map_ = std::move(inv);
  out.n0_ = n0_;
  return out;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  require(outer.size() == inner.size(), ErrorKind::contract, "permutation sizes differ");
  std::vector<NodeId> m(inner.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = outer(inner(static_cast<NodeId>(i)));
  return Permutation(std::move(m), std::min(outer.n0(), inner.n0()));
}

Graph apply_permutation(const Graph& g, const Permutation& s) {
  require(s.size() == g.capacity(), ErrorKind::contract,
          "permutation size differs from graph id space");
  require(s.n0() >= g.n0(), ErrorKind::contract, "permutation must fix seed ids");
  Graph out(g.capacity(), 0);
  for (NodeId u = 0; u < g.capacity(); ++u) {
    if (!g.contains(u)) continue;
    for (NodeId v : g.neighbors(u))
      if (u < v) out.add_edge(s(u), s(v));
  }
  for (NodeId u = 0; u < g.capacity(); ++u)
    if (!g.contains(u)) out.remove_node(s(u));
  out.set_n0(g.n0());
  return out;
}

Graph erdos_renyi_seed(std::size_t n0, double p0, Rng& rng) {
  require(p0 >= 0.0 && p0 <= 1.0, ErrorKind::domain, "p0 must lie in [0,1]");
  Graph g(n0, n0);
  for (NodeId u = 0; u < n0; ++u)
    for (NodeId v = u + 1; v < n0; ++v)
      if (bernoulli(rng, p0)) g.add_edge(u, v);
  return g;
}

Graph complete_graph(std::size_t n) {
  Graph g(n, n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

namespace {

bool parse_header(const std::string& line, const char* key, std::size_t& value) {
  std::istringstream ss(line.substr(1));
  std::string word;
  if (!(ss >> word) || word != key) return false;
  long long x = -1;
  if (!(ss >> x) || x < 0) return false;
  value = static_cast<std::size_t>(x);
  return true;
}

}  // namespace

Graph read_edge_list(std::istream& in, EdgeListStats* stats) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t declared_n = 0, n0 = 0;
  bool have_n = false;
  std::size_t max_id = 0;
  bool any = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const std::string rest = line.substr(first);
      if (parse_header(rest, "nodes", declared_n)) have_n = true;
      else parse_header(rest, "n0", n0);
      continue;
    }
    std::istringstream ss(line);
    long long a = -1, b = -1;
    std::string extra;
    if (!(ss >> a >> b) || a < 0 || b < 0 || a > 0xfffffffeLL || b > 0xfffffffeLL)
      fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected two node ids");
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    max_id = std::max<std::size_t>(max_id, static_cast<std::size_t>(std::max(a, b)));
    any = true;
  }
  std::size_t n = any ? max_id + 1 : 0;
  if (have_n) {
    if (any && max_id >= declared_n)
      fail(ErrorKind::parse, "node id exceeds declared node count");
    n = declared_n;
  }
  if (n0 > n) fail(ErrorKind::parse, "declared n0 exceeds node count");
  Graph g(n, n0);
  EdgeListStats local;
  for (auto [a, b] : edges) {
    if (a == b) {
      ++local.self_loops;
    } else if (!g.add_edge(a, b)) {
      ++local.duplicates;
    }
  }
  if (stats) *stats = local;
  return g;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.capacity() << "\n# n0 " << g.n0() << "\n";
  for (NodeId u = 0; u < g.capacity(); ++u) {
    if (!g.contains(u)) continue;
    for (NodeId v : g.neighbors(u))
      if (u < v) out << u << ' ' << v << '\n';
  }
}

}  // namespace tempord
