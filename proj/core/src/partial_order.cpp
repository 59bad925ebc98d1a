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

#include "tempord/partial_order.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace tempord {

std::vector<std::size_t> OrderedClustering::index_of(std::size_t n) const {
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> idx(n, unset);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    require(!clusters[i].empty(), ErrorKind::contract, "empty cluster");
    for (NodeId u : clusters[i]) {
      require(u < n && idx[u] == unset, ErrorKind::contract,
              "clusters are not a partition of the node set");
      idx[u] = i;
    }
  }
  for (auto x : idx)
    require(x != unset, ErrorKind::contract, "clusters do not cover the node set");
  return idx;
}

PartialOrder::PartialOrder(std::size_t n) : succ_(n, BitRow(n)) {}

PartialOrder PartialOrder::from_sequence(std::size_t n,
                                         const std::vector<NodeId>& oldest_first) {
  PartialOrder po(n);
  BitRow later(n);
  for (auto it = oldest_first.rbegin(); it != oldest_first.rend(); ++it) {
    require(*it < n && !later.test(*it), ErrorKind::contract,
            "sequence repeats a node or is out of range");
    po.succ_[*it] = later;
    later.set(*it);
  }
  return po;
}

PartialOrder PartialOrder::from_clusters(std::size_t n, const OrderedClustering& c) {
  c.index_of(n);  // validates
  PartialOrder po(n);
  BitRow later(n);
  for (auto it = c.clusters.rbegin(); it != c.clusters.rend(); ++it) {
    for (NodeId u : *it) po.succ_[u] = later;
    for (NodeId u : *it) later.set(u);
  }
  return po;
}

void PartialOrder::add(NodeId u, NodeId v) {
  require(u < n() && v < n(), ErrorKind::contract, "pair outside node range");
  require(u != v, ErrorKind::contract, "relation must be irreflexive");
  require(!succ_[v].test(u), ErrorKind::contract, "relation must be antisymmetric");
  succ_[u].set(v);
}

std::size_t PartialOrder::size() const {
  std::size_t c = 0;
  for (const auto& r : succ_) c += r.count();
  return c;
}

std::vector<std::pair<NodeId, NodeId>> PartialOrder::pairs() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (std::size_t u = 0; u < n(); ++u)
    succ_[u].for_each([&](std::size_t v) {
      out.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    });
  return out;
}

std::vector<BitRow> PartialOrder::predecessor_rows() const {
  std::vector<BitRow> pred(n(), BitRow(n()));
  for (std::size_t u = 0; u < n(); ++u) succ_[u].for_each([&](std::size_t v) { pred[v].set(u); });
  return pred;
}

bool PartialOrder::is_transitively_closed() const {
  for (std::size_t u = 0; u < n(); ++u) {
    bool ok = true;
    succ_[u].for_each([&](std::size_t v) {
      if (ok && !succ_[v].subset_of(succ_[u])) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

std::vector<NodeId> topological_order(const PartialOrder& po) {
  const std::size_t n = po.n();
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t u = 0; u < n; ++u) po.successors(static_cast<NodeId>(u)).for_each([&](std::size_t v) { ++indeg[v]; });
  // min-heap on id keeps the result deterministic
  std::vector<NodeId> heap;
  for (std::size_t u = 0; u < n; ++u)
    if (indeg[u] == 0) heap.push_back(static_cast<NodeId>(u));
  std::make_heap(heap.begin(), heap.end(), std::greater<>());
  std::vector<NodeId> order;
  order.reserve(n);
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), std::greater<>());
    const NodeId u = heap.back();
    heap.pop_back();
    order.push_back(u);
    po.successors(u).for_each([&](std::size_t v) {
      if (--indeg[v] == 0) {
        heap.push_back(static_cast<NodeId>(v));
        std::push_heap(heap.begin(), heap.end(), std::greater<>());
      }
    });
  }
  if (order.size() == n) return order;

  // Every leftover node has a leftover predecessor; walk backwards to a repeat.
  const auto pred = po.predecessor_rows();
  NodeId cur = 0;
  while (indeg[cur] == 0) ++cur;
  std::vector<std::size_t> seen_at(n, static_cast<std::size_t>(-1));
  std::vector<NodeId> walk;
  while (seen_at[cur] == static_cast<std::size_t>(-1)) {
    seen_at[cur] = walk.size();
    walk.push_back(cur);
    NodeId next = cur;
    bool found = false;
    pred[cur].for_each([&](std::size_t p) {
      if (!found && indeg[p] > 0) {
        next = static_cast<NodeId>(p);
        found = true;
      }
    });
    cur = next;
  }
  std::vector<NodeId> cycle(walk.begin() + static_cast<std::ptrdiff_t>(seen_at[cur]), walk.end());
  std::reverse(cycle.begin(), cycle.end());  // now each node is older than the next
  std::ostringstream msg;
  msg << "relation has a cycle:";
  for (NodeId x : cycle) msg << ' ' << x << " <";
  msg << ' ' << cycle.front();
  throw CycleError(std::move(cycle), msg.str());
}

PartialOrder PartialOrder::closed() const {
  const auto order = topological_order(*this);
  PartialOrder out = *this;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId u = *it;
    succ_[u].for_each([&](std::size_t v) { out.succ_[u] |= out.succ_[v]; });
  }
  return out;
}

OrderedClustering to_clusters(const PartialOrder& po) {
  const std::size_t n = po.n();
  OrderedClustering out;
  if (n == 0) return out;
  // height of u = longest chain of younger nodes below it
  const auto order = topological_order(po);
  std::vector<std::size_t> height(n, 0);
  std::size_t top = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t h = 0;
    po.successors(*it).for_each([&](std::size_t v) { h = std::max(h, height[v] + 1); });
    height[*it] = h;
    top = std::max(top, h);
  }
  out.clusters.resize(top + 1);
  for (NodeId u = 0; u < n; ++u) out.clusters[top - height[u]].push_back(u);
  return out;
}

std::size_t joint_comparable(const PartialOrder& sigma, const PartialOrder& ref) {
  require(sigma.n() == ref.n(), ErrorKind::contract, "orders have different node counts");
  const auto sp = sigma.predecessor_rows();
  const auto rp = ref.predecessor_rows();
  std::size_t twice = 0;
  for (NodeId u = 0; u < sigma.n(); ++u) {
    BitRow a = sigma.successors(u);
    a |= sp[u];
    BitRow b = ref.successors(u);
    b |= rp[u];
    twice += count_and(a, b);
  }
  return twice / 2;
}

double density(const PartialOrder& sigma, const PartialOrder& ref) {
  require(sigma.n() == ref.n(), ErrorKind::contract, "orders have different node counts");
  const std::size_t k_ref = ref.size();
  if (k_ref == 0) fail(ErrorKind::empty_reference, "ground truth has no comparable pair");
  return static_cast<double>(joint_comparable(sigma, ref)) / static_cast<double>(k_ref);
}

double precision(const PartialOrder& sigma, const PartialOrder& ref) {
  const std::size_t joint = joint_comparable(sigma, ref);
  if (joint == 0)
    fail(ErrorKind::no_common_pairs, "no pair is comparable in both orders");
  std::size_t agree = 0;
  for (NodeId u = 0; u < sigma.n(); ++u) agree += count_and(sigma.successors(u), ref.successors(u));
  return static_cast<double>(agree) / static_cast<double>(joint);
}

void write_partial_order(std::ostream& out, const PartialOrder& po) {
  out << "# nodes " << po.n() << '\n';
  for (auto [u, v] : po.pairs()) out << u << " < " << v << '\n';
}

PartialOrder read_partial_order(std::istream& in, std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> rel;
  std::size_t max_id = 0;
  std::string line;
  std::size_t line_no = 0;
  std::size_t header_n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream hs(line.substr(first + 1));
      std::string key;
      long long x = 0;
      if (hs >> key >> x && key == "nodes" && x >= 0) header_n = static_cast<std::size_t>(x);
      continue;
    }
    std::istringstream ss(line);
    long long u = -1, v = -1;
    std::string lt;
    if (!(ss >> u >> lt >> v) || lt != "<" || u < 0 || v < 0)
      fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected `u < v`");
    rel.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    max_id = std::max<std::size_t>(max_id, static_cast<std::size_t>(std::max(u, v)));
  }
  if (n == 0) n = std::max(header_n, rel.empty() ? 0 : max_id + 1);
  PartialOrder po(n);
  for (auto [u, v] : rel) {
    if (u >= n || v >= n) fail(ErrorKind::parse, "node id outside the declared range");
    po.add(u, v);
  }
  return po;
}

void write_clustering(std::ostream& out, const OrderedClustering& c) {
  std::vector<std::pair<NodeId, std::size_t>> rows;
  for (std::size_t i = 0; i < c.clusters.size(); ++i)
    for (NodeId u : c.clusters[i]) rows.emplace_back(u, i + 1);
  std::sort(rows.begin(), rows.end());
  for (auto [u, i] : rows) out << u << ' ' << i << '\n';
}

OrderedClustering read_clustering(std::istream& in) {
  std::map<std::size_t, std::vector<NodeId>> by_index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    long long u = -1, i = 0;
    if (!(ss >> u >> i) || u < 0 || i < 1)
      fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected `node cluster`");
    by_index[static_cast<std::size_t>(i)].push_back(static_cast<NodeId>(u));
  }
  OrderedClustering c;
  for (auto& [i, nodes] : by_index) {
    std::sort(nodes.begin(), nodes.end());
    c.clusters.push_back(std::move(nodes));
  }
  return c;
}

}  // namespace tempord
