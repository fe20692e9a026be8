#include "soliton/minimal_graph.hpp"

#include "soliton/pde_solver.hpp"

namespace soliton {

MinimalField solve_minimal(const ConvexBoundaryFunction& f, const RectGrid& grid, const SolveConfig& cfg) {
  const Eigen::VectorXd init = harmonic_extension(grid, strip_boundary_values(grid, f));
  return solve_dirichlet(grid, init, Equation::minimal(), cfg);
}

}  // namespace soliton
