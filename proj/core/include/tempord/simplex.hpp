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

#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tempord/common.hpp"

namespace tempord {

/// max c'x subject to rows (<= or =) and 0 <= x <= upper.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<std::size_t, double>> coeffs;
    double rhs = 0.0;
    bool equality = false;
  };

  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<double> upper;  // +inf for unbounded above
  std::vector<Row> rows;

  void add_le(std::vector<std::pair<std::size_t, double>> coeffs, double rhs) {
    rows.push_back({std::move(coeffs), rhs, false});
  }
  void add_eq(std::vector<std::pair<std::size_t, double>> coeffs, double rhs) {
    rows.push_back({std::move(coeffs), rhs, true});
  }
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  std::size_t max_iterations = 200000;
  /// Switch from Dantzig pricing to Bland's rule after this many pivots
  /// without objective progress.
  std::size_t stall_limit = 50;
};

struct LpSolution {
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Raised when the iteration cap is hit; carries the objective of the last
/// feasible basis (-inf if phase one did not finish).
class SolverError : public Error {
 public:
  SolverError(double best, const std::string& message)
      : Error(ErrorKind::solver, message), best_(best) {}
  double best_bound() const noexcept { return best_; }

 private:
  double best_;
};

/// Dense bounded-variable primal simplex with a phase one on artificials.
/// Throws ErrorKind::infeasible, ErrorKind::numerical (unbounded) or
/// SolverError.
LpSolution solve_simplex(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace tempord
