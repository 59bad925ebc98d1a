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

#include "tempord/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace tempord {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Tableau T = B^-1 [A | I_slack | I_art], one row per constraint, plus the
// values of the basic variables. Non-basic variables sit at 0 or at upper.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& opt) : opt_(opt) {
    m_ = lp.rows.size();
    nv_ = lp.num_vars;
    // columns: structural, one slack per inequality, one artificial per row
    // whose starting slack cannot be basic
    std::size_t slacks = 0;
    for (const auto& r : lp.rows)
      if (!r.equality) ++slacks;
    std::vector<char> need_art(m_, 0);
    std::size_t arts = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (lp.rows[i].equality || lp.rows[i].rhs < 0.0) {
        need_art[i] = 1;
        ++arts;
      }
    ncols_ = nv_ + slacks + arts;
    first_art_ = nv_ + slacks;
    T_.assign(m_ * ncols_, 0.0);
    upper_.assign(ncols_, inf);
    for (std::size_t j = 0; j < nv_; ++j) upper_[j] = lp.upper.empty() ? inf : lp.upper[j];
    at_upper_.assign(ncols_, 0);
    basis_.assign(m_, 0);
    is_basic_.assign(ncols_, -1);
    beta_.assign(m_, 0.0);

    std::size_t s = nv_, a = first_art_;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& r = lp.rows[i];
      // flip rows with negative rhs so the starting basic value is >= 0
      const double sign = r.rhs < 0.0 ? -1.0 : 1.0;
      for (auto [j, c] : r.coeffs) {
        require(j < nv_, ErrorKind::contract, "constraint refers to an unknown variable");
        at(i, j) += sign * c;
      }
      beta_[i] = sign * r.rhs;
      std::size_t basic;
      if (!r.equality) {
        at(i, s) = sign;
        if (!need_art[i]) basic = s;
        ++s;
      }
      if (need_art[i]) {
        at(i, a) = 1.0;
        basic = a++;
      }
      basis_[i] = basic;
      is_basic_[basic] = static_cast<long>(i);
    }
  }

  double& at(std::size_t i, std::size_t j) { return T_[i * ncols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return T_[i * ncols_ + j]; }

  // Runs the simplex on cost vector c (maximise). Returns false if unbounded.
  bool optimise(const std::vector<double>& c, std::size_t& iterations, bool phase_one) {
    std::vector<double> d(ncols_);
    auto objective = [&] {
      double z = 0.0;
      for (std::size_t i = 0; i < m_; ++i) z += c[basis_[i]] * beta_[i];
      for (std::size_t j = 0; j < ncols_; ++j)
        if (at_upper_[j]) z += c[j] * upper_[j];
      return z;
    };
    // reduced costs d_j = c_j - c_B B^-1 A_j
    for (std::size_t j = 0; j < ncols_; ++j) d[j] = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &T_[i * ncols_];
      for (std::size_t j = 0; j < ncols_; ++j) d[j] -= cb * row[j];
    }
    double best = objective();
    std::size_t stall = 0;
    while (true) {
      if (iterations >= opt_.max_iterations)
        throw SolverError(phase_one ? -inf : objective(), "simplex iteration limit reached");
      const bool bland = stall >= opt_.stall_limit;
      std::size_t enter = ncols_;
      double best_score = 0.0;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (is_basic_[j] >= 0 || locked(j)) continue;
        const double score = at_upper_[j] ? -d[j] : d[j];
        if (score <= opt_.optimality_tol) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (score > best_score) {
          best_score = score;
          enter = j;
        }
      }
      if (enter == ncols_) return true;
      ++iterations;

      // increasing x_enter (dir = +1) or decreasing from its upper bound
      const double dir = at_upper_[enter] ? -1.0 : 1.0;
      double t = upper_[enter];  // bound flip distance
      std::size_t leave_row = m_;
      bool leave_to_upper = false;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter) * dir;
        if (std::abs(a) <= 1e-12) continue;
        const std::size_t b = basis_[i];
        double lim;
        bool to_upper;
        if (a > 0.0) {
          lim = beta_[i] / a;
          to_upper = false;
        } else {
          if (upper_[b] == inf) continue;
          lim = (upper_[b] - beta_[i]) / -a;
          to_upper = true;
        }
        lim = std::max(lim, 0.0);
        if (lim < t - 1e-12 || (leave_row < m_ && std::abs(lim - t) <= 1e-12 && basis_[i] < basis_[leave_row])) {
          t = lim;
          leave_row = i;
          leave_to_upper = to_upper;
        }
      }
      if (t == inf) return false;

      // move
      for (std::size_t i = 0; i < m_; ++i) beta_[i] -= at(i, enter) * dir * t;
      if (leave_row == m_) {
        at_upper_[enter] = at_upper_[enter] ? 0 : 1;
      } else {
        const std::size_t out = basis_[leave_row];
        const double entering_value = (at_upper_[enter] ? upper_[enter] : 0.0) + dir * t;
        at_upper_[enter] = 0;
        pivot(leave_row, enter, d);
        beta_[leave_row] = entering_value;
        is_basic_[out] = -1;
        at_upper_[out] = leave_to_upper ? 1 : 0;
        basis_[leave_row] = enter;
        is_basic_[enter] = static_cast<long>(leave_row);
      }
      const double z = objective();
      if (z > best + 1e-12) {
        best = z;
        stall = 0;
      } else {
        ++stall;
      }
    }
  }

  void pivot(std::size_t r, std::size_t e, std::vector<double>& d) {
    double* prow = &T_[r * ncols_];
    const double inv = 1.0 / prow[e];
    for (std::size_t j = 0; j < ncols_; ++j) prow[j] *= inv;
    prow[e] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &T_[i * ncols_];
      const double f = row[e];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < ncols_; ++j) row[j] -= f * prow[j];
      row[e] = 0.0;
    }
    const double f = d[e];
    if (f != 0.0) {
      for (std::size_t j = 0; j < ncols_; ++j) d[j] -= f * prow[j];
      d[e] = 0.0;
    }
  }

  bool locked(std::size_t j) const { return artificial_locked_ && j >= first_art_; }

  double artificial_sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= first_art_) s += beta_[i];
    return s;
  }

  // Drives zero-valued artificials out of the basis where possible and
  // forbids artificials from re-entering.
  void finish_phase_one() {
    std::vector<double> dummy(ncols_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < first_art_) continue;
      for (std::size_t j = 0; j < first_art_; ++j) {
        if (is_basic_[j] >= 0 || at_upper_[j] || std::abs(at(i, j)) <= 1e-9) continue;
        const std::size_t out = basis_[i];
        pivot(i, j, dummy);
        // basic value unchanged: the artificial was at 0 and x_j enters at 0
        is_basic_[out] = -1;
        basis_[i] = j;
        is_basic_[j] = static_cast<long>(i);
        break;
      }
    }
    artificial_locked_ = true;
    for (std::size_t j = first_art_; j < ncols_; ++j) upper_[j] = 0.0;
  }

  std::vector<double> solution() const {
    std::vector<double> x(nv_, 0.0);
    for (std::size_t j = 0; j < nv_; ++j) {
      if (is_basic_[j] >= 0) x[j] = beta_[static_cast<std::size_t>(is_basic_[j])];
      else if (at_upper_[j]) x[j] = upper_[j];
    }
    return x;
  }

  std::size_t ncols() const { return ncols_; }
  std::size_t first_artificial() const { return first_art_; }

 private:
  const SimplexOptions& opt_;
  std::size_t m_ = 0, nv_ = 0, ncols_ = 0, first_art_ = 0;
  std::vector<double> T_;
  std::vector<double> upper_;
  std::vector<char> at_upper_;
  std::vector<std::size_t> basis_;
  std::vector<long> is_basic_;
  std::vector<double> beta_;
  bool artificial_locked_ = false;
};

}  // namespace

LpSolution solve_simplex(const LinearProgram& lp, const SimplexOptions& options) {
  require(lp.objective.size() == lp.num_vars, ErrorKind::contract, "objective size mismatch");
  require(lp.upper.empty() || lp.upper.size() == lp.num_vars, ErrorKind::contract,
          "bound size mismatch");
  for (double u : lp.upper) require(u >= 0.0, ErrorKind::infeasible, "negative upper bound");
  Tableau tab(lp, options);
  LpSolution out;
  if (tab.first_artificial() < tab.ncols()) {
    std::vector<double> c1(tab.ncols(), 0.0);
    for (std::size_t j = tab.first_artificial(); j < tab.ncols(); ++j) c1[j] = -1.0;
    tab.optimise(c1, out.iterations, true);
    if (tab.artificial_sum() > options.feasibility_tol * 10.0)
      fail(ErrorKind::infeasible, "linear program has no feasible point");
    tab.finish_phase_one();
  }
  std::vector<double> c(tab.ncols(), 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), c.begin());
  if (!tab.optimise(c, out.iterations, false))
    fail(ErrorKind::numerical, "linear program is unbounded");
  out.x = tab.solution();
  out.objective = 0.0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) out.objective += lp.objective[j] * out.x[j];
  return out;
}

}  // namespace tempord
