#pragma once

#include "soliton/barriers.hpp"
#include "soliton/discretization.hpp"
#include "soliton/grid.hpp"
#include "soliton/newton.hpp"
#include "soliton/profiles.hpp"

namespace soliton {

/// Nodal residual of the discrete operator on a rectangle field; zero on
/// boundary nodes.
Eigen::VectorXd residual(const RectGrid& grid, const Eigen::VectorXd& u, const Equation& eq);

/// Harmonic extension of the boundary values of `field` (interior ignored).
Eigen::VectorXd harmonic_extension(const RectGrid& grid, const Eigen::VectorXd& field);

/// |Du| at every node: centered differences inside, one-sided second order on
/// the boundary.
Eigen::VectorXd gradient_field(const RectGrid& grid, const Eigen::VectorXd& u);

/// Wraps nodal values on a rectangle into a SolutionField (kinds, gradient,
/// boundary data range, enclosing disk).
SolutionField make_rect_field(const RectGrid& grid, Eigen::VectorXd values, const Equation& eq);

/// Dirichlet solve on a rectangle. `initial` carries the boundary data on
/// boundary nodes and the starting guess inside.
SolutionField solve_dirichlet(const RectGrid& grid, const Eigen::VectorXd& initial, const Equation& eq,
                              const SolveConfig& cfg);

/// Dirichlet solve on a disk; the initial guess is the harmonic extension of
/// the data unless `initial` is given.
SolutionField solve_dirichlet(const DiskDomain& disk, const BoundaryData& data, const Equation& eq,
                              const SolveConfig& cfg, const BoundaryData& initial = {});

/// Data on the boundary of the truncated strip: f(x) on y = +-m and the
/// constant f(+-L) on the truncation edges x = +-L. Interior entries are 0.
Eigen::VectorXd strip_boundary_values(const RectGrid& grid, const ConvexBoundaryFunction& f);

/// Throws WidthError unless barriers exist for half-width m (m < d(alpha)).
void check_strip_width(Alpha alpha, double m);

struct StripOptions {
  int barrier_count = 33;
  double profile_tol = 1e-12;
};

struct StripSolution {
  SolutionField field;
  SolutionField minimal;      // v0, the upper function
  Eigen::VectorXd envelope;   // touching-barrier lower envelope on the grid
  double epsilon = 0;         // 10 h^2 scale
  double lower_violation = 0; // max(envelope - u), positive when violated
  double upper_violation = 0; // max(u - v0)
  bool sandwich_ok = false;
};

StripSolution solve_strip(const ConvexBoundaryFunction& f, Alpha alpha, const RectGrid& grid,
                          const SolveConfig& cfg, const StripOptions& opt = {});

/// Scale used by the value tolerances: max(1, max |boundary data|).
double value_scale(const SolutionField& field);
/// 10 h^2 * value_scale.
double value_tolerance(const SolutionField& field);

}  // namespace soliton
