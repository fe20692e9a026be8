#include "soliton/verify.hpp"

#include "soliton/errors.hpp"
#include "soliton/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace soliton {

namespace {

bool is_boundary(const SolutionField& u, Eigen::Index k) {
  return u.kind[static_cast<std::size_t>(k)] == NodeKind::boundary;
}

// Tracks the smallest slack over nodes and turns it into a report.
struct SlackTracker {
  double slack = std::numeric_limits<double>::infinity();
  Eigen::Vector2d where = Eigen::Vector2d::Zero();

  void add(double s, const Eigen::Vector2d& p) {
    if (s < slack) slack = s, where = p;
  }

  void fill(PropertyReport& r) const {
    r.slack = slack;
    r.worst_violation = std::max(0.0, -slack);
    r.location = where;
    r.pass = slack >= 0;
  }
};

}  // namespace

PropertyReport check_bounds(const SolutionField& u) {
  PropertyReport r;
  r.name = "bounds";
  const double eps = value_tolerance(u);
  double bmin = 0;
  if (u.alpha > 0) {
    const RadialProfile bowl = integrate_bowl(Alpha(u.alpha), u.enclosing_radius);
    bmin = -bowl.value(u.enclosing_radius);
  }
  const double lower = bmin + u.data_min, upper = u.data_max;
  SlackTracker t;
  for (Eigen::Index k = 0; k < u.values.size(); ++k) {
    t.add(u.values[k] - (lower - eps), u.points.col(k));
    t.add(upper + eps - u.values[k], u.points.col(k));
  }
  t.fill(r);
  r.tolerances = {{"epsilon", eps}, {"bowl_min", bmin}, {"lower", lower}, {"upper", upper},
                  {"enclosing_radius", u.enclosing_radius}};
  return r;
}

PropertyReport check_gradient_boundary(const SolutionField& u) {
  PropertyReport r;
  r.name = "gradient_boundary";
  const bool disk = !u.grid.has_value();
  const NodeKind edge = disk ? NodeKind::irregular : NodeKind::boundary;
  double edge_max = 0;
  for (Eigen::Index k = 0; k < u.values.size(); ++k)
    if (u.kind[static_cast<std::size_t>(k)] == edge && std::isfinite(u.gradient[k]))
      edge_max = std::max(edge_max, u.gradient[k]);
  const double tol = 10.0 * u.spacing * std::max(1.0, edge_max);
  SlackTracker t;
  for (Eigen::Index k = 0; k < u.values.size(); ++k)
    if (u.kind[static_cast<std::size_t>(k)] == NodeKind::interior && std::isfinite(u.gradient[k]))
      t.add(edge_max + tol - u.gradient[k], u.points.col(k));
  t.fill(r);
  r.tolerances = {{"tolerance", tol}, {"boundary_max", edge_max}};
  if (disk) r.note = "disk field: nodes with cut arms stand in for the boundary";
  return r;
}

PropertyReport check_comparison(const SolutionField& u1, const SolutionField& u2) {
  if (u1.values.size() != u2.values.size() || u1.points.cols() != u2.points.cols() ||
      !u1.points.isApprox(u2.points, 1e-12))
    throw std::invalid_argument("comparison requires fields on the same nodes");
  for (Eigen::Index k = 0; k < u1.values.size(); ++k) {
    if (is_boundary(u1, k) && u1.values[k] > u2.values[k]) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "boundary data not ordered at (" << u1.points(0, k) << ", " << u1.points(1, k) << "): " << u1.values[k]
          << " > " << u2.values[k];
      throw std::invalid_argument(msg.str());
    }
  }
  PropertyReport r;
  r.name = "comparison";
  const double eps = std::max(value_tolerance(u1), value_tolerance(u2));
  SlackTracker t;
  for (Eigen::Index k = 0; k < u1.values.size(); ++k) t.add(u2.values[k] + eps - u1.values[k], u1.points.col(k));
  t.fill(r);
  r.tolerances = {{"epsilon", eps}};
  return r;
}

PropertyReport check_uniqueness(const ConvexBoundaryFunction& f, Alpha alpha, const RectGrid& grid,
                                const SolveConfig& cfg, const std::vector<Eigen::VectorXd>& guesses) {
  if (guesses.size() < 2) throw std::invalid_argument("uniqueness check needs at least two guesses");
  PropertyReport r;
  r.name = "uniqueness";
  const Eigen::VectorXd data = strip_boundary_values(grid, f);
  std::vector<Eigen::VectorXd> limits;
  for (std::size_t g = 0; g < guesses.size(); ++g) {
    Eigen::VectorXd init = guesses[g];
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        if (grid.on_boundary(i, j)) init[grid.index(i, j)] = data[grid.index(i, j)];
    try {
      limits.push_back(solve_dirichlet(grid, init, Equation::soliton(alpha.value()), cfg).values);
    } catch (const SolverFailure& e) {
      r.inconclusive = true;
      r.note += "guess " + std::to_string(g) + " failed: " + e.what() + "; ";
    }
  }
  double scale = 1.0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.on_boundary(i, j)) scale = std::max(scale, std::abs(data[grid.index(i, j)]));
  const double tol = 1e-6 * scale;
  r.tolerances = {{"tolerance", tol}, {"guesses", static_cast<double>(guesses.size())}};
  if (limits.size() < 2) {
    r.inconclusive = true;
    r.pass = false;
    return r;
  }
  double worst = 0;
  Eigen::Index at = 0;
  for (std::size_t g = 1; g < limits.size(); ++g) {
    Eigen::Index k;
    const double d = (limits[g] - limits[0]).cwiseAbs().maxCoeff(&k);
    if (d > worst) worst = d, at = k;
  }
  r.slack = tol - worst;
  r.worst_violation = std::max(0.0, worst - tol);
  r.location = {grid.x(static_cast<int>(at % grid.nx)), grid.y(static_cast<int>(at / grid.nx))};
  r.pass = !r.inconclusive && worst <= tol;
  r.tolerances.emplace_back("max_difference", worst);
  return r;
}

PropertyReport check_sandwich(const StripSolution& s) {
  PropertyReport r;
  r.name = "sandwich";
  const SolutionField& u = s.field;
  SlackTracker t;
  for (Eigen::Index k = 0; k < u.values.size(); ++k) {
    t.add(u.values[k] - (s.envelope[k] - s.epsilon), u.points.col(k));
    t.add(s.minimal.values[k] + s.epsilon - u.values[k], u.points.col(k));
  }
  t.fill(r);
  r.tolerances = {{"epsilon", s.epsilon}};
  return r;
}

}  // namespace soliton
