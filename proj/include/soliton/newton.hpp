#pragma once

#include "soliton/discretization.hpp"

#include <vector>

namespace soliton {

struct SolveConfig {
  double tol = 1e-10;        // sup-norm of the residual
  int max_iterations = 80;
  double backtrack = 0.5;    // step reduction ratio, in (0, 1)
  double min_step = 1e-6;
  double armijo = 1e-4;      // sufficient decrease on the sup-norm
  double linear_tol = 1e-8;  // relative residual accepted from the linear solve

  void validate() const;
};

struct NewtonResult {
  Eigen::VectorXd unknowns;
  double residual = 0;
  int iterations = 0;
  std::vector<double> history;
};

/// Damped Newton with backtracking on the residual sup-norm. Throws
/// SolverFailure (carrying the residual history) on non-convergence.
NewtonResult newton_solve(const StencilSystem& system, Eigen::VectorXd initial,
                          const SolveConfig& cfg);

}  // namespace soliton
