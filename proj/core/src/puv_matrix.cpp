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

#include "tempord/puv_matrix.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace tempord {

PuvMatrix::PuvMatrix(std::size_t n, std::size_t n0)
    : n_(n), n0_(n0), data_(pair_count(n), 0.5) {
  require(n0 <= n, ErrorKind::contract, "seed count exceeds node count");
  for (std::size_t u = 0; u < n0; ++u)
    for (std::size_t v = n0; v < n; ++v) data_[index(u, v)] = 1.0;
}

void PuvMatrix::set(NodeId u, NodeId v, double x) {
  require(u < n_ && v < n_ && u != v, ErrorKind::contract, "pair outside the matrix");
  require(x >= 0.0 && x <= 1.0, ErrorKind::domain, "probability outside [0,1]");
  if (u > v) {
    std::swap(u, v);
    x = 1.0 - x;
  }
  data_[index(u, v)] = x >= 0.5 ? x : -(1.0 - x);
}

double PuvMatrix::row_sum(NodeId u, std::span<const NodeId> nodes) const {
  double s = 0.0;
  for (NodeId v : nodes)
    if (v != u) s += (*this)(u, v);
  return s;
}

std::vector<double> PuvMatrix::row_sums() const {
  std::vector<double> out(n_, 0.0);
  for (NodeId u = 0; u < n_; ++u)
    for (NodeId v = 0; v < n_; ++v) out[u] += (*this)(u, v);
  return out;
}

namespace {

void put_double(std::ostream& out, double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_puv_csv(std::ostream& out, const PuvMatrix& m) {
  out << "node";
  for (std::size_t v = 0; v < m.n(); ++v) out << ',' << v;
  out << '\n';
  for (NodeId u = 0; u < m.n(); ++u) {
    out << u;
    for (NodeId v = 0; v < m.n(); ++v) {
      out << ',';
      if (u != v) put_double(out, m(u, v));
    }
    out << '\n';
  }
}

PuvMatrix read_puv_csv(std::istream& in, std::size_t n0) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::parse, "empty matrix file");
  std::size_t n = 0;
  for (char c : line)
    if (c == ',') ++n;
  if (line.rfind("node", 0) != 0) fail(ErrorKind::parse, "line 1: expected header `node,...`");
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t u = 0; u < n; ++u) {
    if (!std::getline(in, line))
      fail(ErrorKind::parse, "line " + std::to_string(u + 2) + ": missing row");
    std::istringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    for (std::size_t v = 0; v < n; ++v) {
      if (!std::getline(ss, cell, ','))
        cell.clear();
      if (u == v) continue;
      double x = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (res.ec != std::errc() || cell.empty())
        fail(ErrorKind::parse, "line " + std::to_string(u + 2) + ": bad probability");
      rows[u][v] = x;
    }
  }
  PuvMatrix m(n, n0);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) {
      if (std::abs(rows[u][v] + rows[v][u] - 1.0) > 1e-9)
        fail(ErrorKind::parse, "entries (" + std::to_string(u) + "," + std::to_string(v) +
                                   ") are not complementary");
      m.set(u, v, rows[u][v]);
    }
  m.provenance = "file";
  return m;
}

}  // namespace tempord
