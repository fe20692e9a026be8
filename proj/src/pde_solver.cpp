#include "soliton/pde_solver.hpp"

#include "soliton/errors.hpp"
#include "soliton/minimal_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace soliton {

namespace {

double boundary_min(const RectGrid& grid, const Eigen::VectorXd& u) {
  double v = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.on_boundary(i, j)) v = std::min(v, u[grid.index(i, j)]);
  return v;
}

double boundary_max(const RectGrid& grid, const Eigen::VectorXd& u) {
  double v = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.on_boundary(i, j)) v = std::max(v, u[grid.index(i, j)]);
  return v;
}

void require_finite_boundary(const RectGrid& grid, const Eigen::VectorXd& u) {
  if (u.size() != grid.size()) throw std::invalid_argument("field size does not match grid");
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.on_boundary(i, j) && !std::isfinite(u[grid.index(i, j)]))
        throw std::invalid_argument("non-finite boundary data");
}

}  // namespace

Eigen::VectorXd residual(const RectGrid& grid, const Eigen::VectorXd& u, const Equation& eq) {
  const GridSubsystem sub = make_rect_system(grid, u, eq);
  Eigen::VectorXd unknowns(sub.system.size());
  for (Eigen::Index k = 0; k < unknowns.size(); ++k) unknowns[k] = u[sub.grid_nodes[k]];
  const Eigen::VectorXd r = sub.system.residual(unknowns);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.size());
  for (Eigen::Index k = 0; k < r.size(); ++k) out[sub.grid_nodes[k]] = r[k];
  return out;
}

Eigen::VectorXd harmonic_extension(const RectGrid& grid, const Eigen::VectorXd& field) {
  require_finite_boundary(grid, field);
  Eigen::VectorXd guess = field;
  const double fill = 0.5 * (boundary_min(grid, field) + boundary_max(grid, field));
  for (int j = 1; j < grid.ny - 1; ++j)
    for (int i = 1; i < grid.nx - 1; ++i) guess[grid.index(i, j)] = fill;
  SolveConfig cfg;
  cfg.tol = 1e-9 * std::max(1.0, std::abs(fill)) / (grid.hx * grid.hy);
  const GridSubsystem sub = make_rect_system(grid, guess, Equation::laplace());
  Eigen::VectorXd unknowns(sub.system.size());
  for (Eigen::Index k = 0; k < unknowns.size(); ++k) unknowns[k] = guess[sub.grid_nodes[k]];
  const NewtonResult res = newton_solve(sub.system, unknowns, cfg);
  for (Eigen::Index k = 0; k < unknowns.size(); ++k) guess[sub.grid_nodes[k]] = res.unknowns[k];
  return guess;
}

Eigen::VectorXd gradient_field(const RectGrid& grid, const Eigen::VectorXd& u) {
  Eigen::VectorXd g(grid.size());
  auto at = [&](int i, int j) { return u[grid.index(i, j)]; };
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      double ux, uy;
      if (i == 0) ux = (-3.0 * at(0, j) + 4.0 * at(1, j) - at(2, j)) / (2.0 * grid.hx);
      else if (i == grid.nx - 1) ux = (3.0 * at(i, j) - 4.0 * at(i - 1, j) + at(i - 2, j)) / (2.0 * grid.hx);
      else ux = (at(i + 1, j) - at(i - 1, j)) / (2.0 * grid.hx);
      if (j == 0) uy = (-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) / (2.0 * grid.hy);
      else if (j == grid.ny - 1) uy = (3.0 * at(i, j) - 4.0 * at(i, j - 1) + at(i, j - 2)) / (2.0 * grid.hy);
      else uy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * grid.hy);
      g[grid.index(i, j)] = std::hypot(ux, uy);
    }
  }
  return g;
}

SolutionField make_rect_field(const RectGrid& grid, Eigen::VectorXd values, const Equation& eq) {
  SolutionField f;
  f.points.resize(2, grid.size());
  f.kind.resize(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const Eigen::Index idx = grid.index(i, j);
      f.points.col(idx) << grid.x(i), grid.y(j);
      f.kind[static_cast<std::size_t>(idx)] = grid.on_boundary(i, j) ? NodeKind::boundary : NodeKind::interior;
    }
  }
  f.gradient = gradient_field(grid, values);
  f.values = std::move(values);
  f.alpha = eq.op == Operator::soliton ? eq.alpha : 0.0;
  f.spacing = grid.spacing();
  f.data_min = boundary_min(grid, f.values);
  f.data_max = boundary_max(grid, f.values);
  f.enclosing_center.setZero();
  f.enclosing_radius = std::hypot(grid.L, grid.m);
  f.grid = grid;
  return f;
}

SolutionField solve_dirichlet(const RectGrid& grid, const Eigen::VectorXd& initial, const Equation& eq,
                              const SolveConfig& cfg) {
  require_finite_boundary(grid, initial);
  const GridSubsystem sub = make_rect_system(grid, initial, eq);
  Eigen::VectorXd unknowns(sub.system.size());
  for (Eigen::Index k = 0; k < unknowns.size(); ++k) unknowns[k] = initial[sub.grid_nodes[k]];
  const NewtonResult res = newton_solve(sub.system, unknowns, cfg);
  Eigen::VectorXd values = initial;
  for (Eigen::Index k = 0; k < unknowns.size(); ++k) values[sub.grid_nodes[k]] = res.unknowns[k];
  SolutionField f = make_rect_field(grid, std::move(values), eq);
  f.residual = res.residual;
  f.iterations = res.iterations;
  return f;
}

SolutionField solve_dirichlet(const DiskDomain& disk, const BoundaryData& data, const Equation& eq,
                              const SolveConfig& cfg, const BoundaryData& initial) {
  const DiskSystem ds = make_disk_system(disk, data, eq);
  const Eigen::Index n = ds.system.size();
  Eigen::VectorXd guess(n);
  if (initial) {
    for (Eigen::Index k = 0; k < n; ++k) guess[k] = initial(ds.unknown_points(0, k), ds.unknown_points(1, k));
  } else {
    const DiskSystem lap = make_disk_system(disk, data, Equation::laplace());
    SolveConfig lcfg = cfg;
    lcfg.tol = 1e-9 * std::max({1.0, std::abs(ds.data_min), std::abs(ds.data_max)}) /
               (disk.hx * disk.hy);
    guess = newton_solve(lap.system, Eigen::VectorXd::Constant(n, 0.5 * (ds.data_min + ds.data_max)), lcfg)
                .unknowns;
  }
  const NewtonResult res = newton_solve(ds.system, guess, cfg);

  const Eigen::Index nb = ds.boundary_points.cols();
  SolutionField f;
  f.points.resize(2, n + nb);
  f.points.leftCols(n) = ds.unknown_points;
  f.points.rightCols(nb) = ds.boundary_points;
  f.values.resize(n + nb);
  f.values.head(n) = res.unknowns;
  f.values.tail(nb) = ds.boundary_values;
  f.kind = ds.unknown_kind;
  f.kind.resize(static_cast<std::size_t>(n + nb), NodeKind::boundary);
  f.gradient = Eigen::VectorXd::Constant(n + nb, std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index k = 0; k < n; ++k) f.gradient[k] = ds.system.gradient(res.unknowns, k).norm();
  f.alpha = eq.op == Operator::soliton ? eq.alpha : 0.0;
  f.residual = res.residual;
  f.iterations = res.iterations;
  f.spacing = std::max(disk.hx, disk.hy);
  f.data_min = ds.data_min;
  f.data_max = ds.data_max;
  f.enclosing_center = disk.center;
  f.enclosing_radius = disk.radius;
  return f;
}

Eigen::VectorXd strip_boundary_values(const RectGrid& grid, const ConvexBoundaryFunction& f) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(grid.size());
  for (int i = 0; i < grid.nx; ++i) {
    const double v = f(grid.x(i));
    u[grid.index(i, 0)] = v;
    u[grid.index(i, grid.ny - 1)] = v;
  }
  const double left = f(-grid.L), right = f(grid.L);
  for (int j = 1; j < grid.ny - 1; ++j) {
    u[grid.index(0, j)] = left;
    u[grid.index(grid.nx - 1, j)] = right;
  }
  return u;
}

void check_strip_width(Alpha alpha, double m) {
  const double d = halfwidth(alpha);
  if (!(m < d)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "strip half-width m = " << m << " is not below d(" << alpha.value() << ") = " << d
        << "; the grim-reaper barriers require m < d(alpha)";
    throw WidthError(msg.str(), d);
  }
}

double value_scale(const SolutionField& field) {
  return std::max({1.0, std::abs(field.data_min), std::abs(field.data_max)});
}

double value_tolerance(const SolutionField& field) {
  return 10.0 * field.spacing * field.spacing * value_scale(field);
}

StripSolution solve_strip(const ConvexBoundaryFunction& f, Alpha alpha, const RectGrid& grid,
                          const SolveConfig& cfg, const StripOptions& opt) {
  check_strip_width(alpha, grid.m);
  const auto profile = barrier_profile(alpha, grid.m, opt.profile_tol);
  const BarrierEnvelope envelope(f, profile, grid.m, chebyshev_abscissae(grid.L, opt.barrier_count));

  StripSolution out;
  out.minimal = solve_minimal(f, grid, cfg);
  out.envelope = envelope.on_grid(grid);

  Eigen::VectorXd init = out.envelope;
  const Eigen::VectorXd data = strip_boundary_values(grid, f);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.on_boundary(i, j)) init[grid.index(i, j)] = data[grid.index(i, j)];

  out.field = solve_dirichlet(grid, init, Equation::soliton(alpha.value()), cfg);
  out.epsilon = value_tolerance(out.field);
  out.lower_violation = (out.envelope - out.field.values).maxCoeff();
  out.upper_violation = (out.field.values - out.minimal.values).maxCoeff();
  out.sandwich_ok = out.lower_violation <= out.epsilon && out.upper_violation <= out.epsilon;
  return out;
}

}  // namespace soliton
