#pragma once

#include "soliton/barriers.hpp"
#include "soliton/grid.hpp"
#include "soliton/newton.hpp"
#include "soliton/pde_solver.hpp"

#include <string>
#include <utility>
#include <vector>

namespace soliton {

/// Outcome of one property check. `worst_violation` is max(0, excess); when
/// the check passes, `location` is the node with the smallest slack.
struct PropertyReport {
  std::string name;
  bool pass = false;
  bool inconclusive = false;
  double worst_violation = 0;
  double slack = 0;  // smallest margin, negative when violated
  Eigen::Vector2d location = Eigen::Vector2d::Zero();
  std::vector<std::pair<std::string, double>> tolerances;
  std::string note;
};

/// b_min + min data - eps <= u <= max data + eps, where b_min = -b(R) for the
/// bowl over a disk of radius R circumscribing the field's domain. Fields of
/// the minimal operator (alpha = 0) use b_min = 0.
PropertyReport check_bounds(const SolutionField& u);

/// max |Du| over interior nodes <= max over boundary nodes + 10 h scale.
/// Disk fields have no boundary gradient, so the cut-arm (irregular) nodes
/// next to the circle stand in for the boundary.
PropertyReport check_gradient_boundary(const SolutionField& u);

/// u1 <= u2 + eps nodewise. Throws std::invalid_argument if the fields do not
/// share their nodes or the boundary data are not ordered.
PropertyReport check_comparison(const SolutionField& u1, const SolutionField& u2);

/// Solves the strip problem from every guess (boundary entries are replaced by
/// the data) and compares the limits against 1e-6 * scale.
PropertyReport check_uniqueness(const ConvexBoundaryFunction& f, Alpha alpha, const RectGrid& grid,
                                const SolveConfig& cfg, const std::vector<Eigen::VectorXd>& guesses);

/// envelope - eps <= u <= v0 + eps.
PropertyReport check_sandwich(const StripSolution& s);

}  // namespace soliton
