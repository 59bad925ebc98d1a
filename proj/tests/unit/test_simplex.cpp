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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "tempord/rng.hpp"
#include "tempord/simplex.hpp"

using namespace tempord;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Solves A x = b (square) by Gaussian elimination with partial pivoting.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-12) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

// Best vertex of a bounded LP by trying every choice of n tight constraints.
double vertex_optimum(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<bool> eq;
  for (const auto& row : lp.rows) {
    std::vector<double> a(n, 0.0);
    for (auto [j, c] : row.coeffs) a[j] += c;
    A.push_back(a);
    b.push_back(row.rhs);
    eq.push_back(row.equality);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> a(n, 0.0);
    a[j] = -1.0;
    A.push_back(a);
    b.push_back(0.0);
    eq.push_back(false);
    if (std::isfinite(lp.upper[j])) {
      a[j] = 1.0;
      A.push_back(a);
      b.push_back(lp.upper[j]);
      eq.push_back(false);
    }
  }
  const std::size_t m = A.size();
  double best = -inf;
  std::vector<std::size_t> pick(n);
  // iterate over n-subsets of constraints
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == n) {
      std::vector<std::vector<double>> S;
      std::vector<double> t;
      for (std::size_t i : pick) {
        S.push_back(A[i]);
        t.push_back(b[i]);
      }
      // equality rows must be among the tight ones
      for (std::size_t i = 0; i < m; ++i)
        if (eq[i] && std::find(pick.begin(), pick.end(), i) == pick.end()) return;
      std::vector<double> x;
      if (!solve_square(S, t, x)) return;
      for (std::size_t i = 0; i < m; ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < n; ++j) lhs += A[i][j] * x[j];
        if (lhs > b[i] + 1e-9) return;
        if (eq[i] && lhs < b[i] - 1e-9) return;
      }
      double obj = 0.0;
      for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
      best = std::max(best, obj);
      return;
    }
    for (std::size_t i = start; i < m; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST(Simplex, TextbookProblem) {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  -> 36 at (2, 6)
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {3, 5};
  lp.upper = {inf, inf};
  lp.add_le({{0, 1.0}}, 4);
  lp.add_le({{1, 2.0}}, 12);
  lp.add_le({{0, 3.0}, {1, 2.0}}, 18);
  const auto sol = solve_simplex(lp);
  EXPECT_NEAR(sol.objective, 36.0, 1e-9);
  EXPECT_NEAR(sol.x[0], 2.0, 1e-9);
  EXPECT_NEAR(sol.x[1], 6.0, 1e-9);
}

TEST(Simplex, EqualityAndNegativeRightHandSide) {
  // max x - y with x + y = 1, -x <= -0.25 (x >= 0.25), x <= 0.6
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {1, -1};
  lp.upper = {0.6, inf};
  lp.add_eq({{0, 1.0}, {1, 1.0}}, 1.0);
  lp.add_le({{0, -1.0}}, -0.25);
  const auto sol = solve_simplex(lp);
  EXPECT_NEAR(sol.objective, 0.2, 1e-9);
}

TEST(Simplex, InfeasibleIsReported) {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {1, 1};
  lp.upper = {1, 1};
  lp.add_eq({{0, 1.0}, {1, 1.0}}, 5.0);
  try {
    solve_simplex(lp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::infeasible);
  }
}

TEST(Simplex, IterationCapCarriesBound) {
  LinearProgram lp;
  lp.num_vars = 3;
  lp.objective = {1, 2, 3};
  lp.upper = {1, 1, 1};
  lp.add_le({{0, 1.0}, {1, 1.0}, {2, 1.0}}, 2.0);
  SimplexOptions o;
  o.max_iterations = 1;
  try {
    solve_simplex(lp, o);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::solver);
    EXPECT_LE(e.best_bound(), 5.0 + 1e-9);
  }
}

TEST(Simplex, MatchesVertexEnumeration) {
  Rng rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    LinearProgram lp;
    lp.num_vars = 2 + uniform_index(rng, 3);
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
      lp.objective.push_back(2.0 * uniform01(rng) - 0.5);
      lp.upper.push_back(uniform01(rng) < 0.3 ? inf : 0.5 + 2.0 * uniform01(rng));
    }
    const std::size_t rows = 2 + uniform_index(rng, 3);
    for (std::size_t i = 0; i < rows; ++i) {
      std::vector<std::pair<std::size_t, double>> c;
      for (std::size_t j = 0; j < lp.num_vars; ++j) c.emplace_back(j, uniform01(rng) + 0.05);
      lp.add_le(c, 1.0 + 3.0 * uniform01(rng));
    }
    if (rep % 4 == 0) {
      std::vector<std::pair<std::size_t, double>> c;
      for (std::size_t j = 0; j < lp.num_vars; ++j) c.emplace_back(j, 1.0);
      lp.add_eq(c, 0.5);
    }
    if (rep % 5 == 1) lp.add_le({{0, -1.0}}, -0.1);  // x0 >= 0.1
    const double ref = vertex_optimum(lp);
    if (!std::isfinite(ref)) {
      EXPECT_THROW(solve_simplex(lp), Error);
      continue;
    }
    const auto sol = solve_simplex(lp);
    EXPECT_NEAR(sol.objective, ref, 1e-8) << "rep " << rep;
  }
}

TEST(Simplex, DegenerateProblemTerminates) {
  // many redundant tight rows at the optimum
  LinearProgram lp;
  lp.num_vars = 3;
  lp.objective = {1, 1, 1};
  lp.upper = {inf, inf, inf};
  for (int k = 0; k < 12; ++k) lp.add_le({{0, 1.0}, {1, 1.0}, {2, 1.0}}, 1.0);
  lp.add_le({{0, 1.0}, {1, 1.0}}, 1.0);
  lp.add_le({{1, 1.0}, {2, 1.0}}, 1.0);
  const auto sol = solve_simplex(lp);
  EXPECT_NEAR(sol.objective, 1.0, 1e-9);
}
