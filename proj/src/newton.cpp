#include "soliton/newton.hpp"

#include "soliton/errors.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>

namespace soliton {

void SolveConfig::validate() const {
  if (!(tol > 0) || max_iterations <= 0 || !(backtrack > 0 && backtrack < 1) || !(min_step > 0) ||
      !(armijo > 0 && armijo < 1) || !(linear_tol > 0)) {
    throw std::invalid_argument("invalid solver configuration");
  }
}

namespace {

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

}  // namespace

NewtonResult newton_solve(const StencilSystem& system, Eigen::VectorXd U, const SolveConfig& cfg) {
  cfg.validate();
  if (U.size() != system.size()) throw std::invalid_argument("initial guess has wrong size");
  if (!U.allFinite()) throw SolverFailure("initial guess is not finite", {});

  NewtonResult res;
  Eigen::VectorXd F;
  Eigen::SparseMatrix<double> J;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analysed = false;

  system.linearize(U, F, J);
  double norm = sup_norm(F);
  res.history.push_back(norm);

  for (int it = 0; it < cfg.max_iterations && norm > cfg.tol; ++it) {
    if (!std::isfinite(norm)) throw SolverFailure("residual became non-finite", res.history);
    if (!analysed) {
      lu.analyzePattern(J);
      analysed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw SolverFailure("Jacobian factorization failed", res.history);
    const Eigen::VectorXd step = lu.solve(-F);
    if (!step.allFinite()) throw SolverFailure("NaN in linear solve", res.history);
    const double lin = (J * step + F).norm() / std::max(F.norm(), 1e-300);
    if (lin > cfg.linear_tol) {
      std::ostringstream msg;
      msg << "linear solve relative residual " << lin << " above " << cfg.linear_tol;
      throw SolverFailure(msg.str(), res.history);
    }

    double lambda = 1.0;
    double best_lambda = 0.0, best_norm = norm;
    Eigen::VectorXd trial;
    bool accepted = false;
    while (lambda >= cfg.min_step) {
      trial = U + lambda * step;
      const double trial_norm = sup_norm(system.residual(trial));
      if (std::isfinite(trial_norm) && trial_norm <= (1.0 - cfg.armijo * lambda) * norm) {
        accepted = true;
        break;
      }
      if (std::isfinite(trial_norm) && trial_norm < best_norm) {
        best_norm = trial_norm;
        best_lambda = lambda;
      }
      lambda *= cfg.backtrack;
    }
    if (!accepted) {
      if (best_lambda == 0.0) throw SolverFailure("line search found no decrease", res.history);
      trial = U + best_lambda * step;
    }
    U = std::move(trial);
    system.linearize(U, F, J);
    norm = sup_norm(F);
    res.history.push_back(norm);
    res.iterations = it + 1;
  }
  if (!(norm <= cfg.tol)) {
    std::ostringstream msg;
    msg << "Newton did not converge in " << cfg.max_iterations << " iterations (residual " << norm << ")";
    throw SolverFailure(msg.str(), res.history);
  }
  res.unknowns = std::move(U);
  res.residual = norm;
  return res;
}

}  // namespace soliton
