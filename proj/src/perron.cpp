#include "soliton/perron.hpp"

#include "soliton/minimal_graph.hpp"
#include "soliton/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace soliton {

namespace {

double margin(const RectGrid& grid) { return 0.25 * std::min(grid.hx, grid.hy); }

Disk clamped_disk(const RectGrid& grid, const Eigen::Vector2d& p, double r) {
  const double mu = margin(grid);
  const double xmax = grid.L - r - mu, ymax = grid.m - r - mu;
  Disk d;
  d.radius = r;
  d.center.x() = xmax > 0 ? std::clamp(p.x(), -xmax, xmax) : 0.0;
  d.center.y() = ymax > 0 ? std::clamp(p.y(), -ymax, ymax) : 0.0;
  return d;
}

bool inside(const Disk& d, const Eigen::Vector2d& p) { return (p - d.center).norm() < d.radius; }

std::vector<bool> mask_of(const RectGrid& grid, const Disk& disk) {
  std::vector<bool> active(static_cast<std::size_t>(grid.size()), false);
  for (int j = 1; j < grid.ny - 1; ++j)
    for (int i = 1; i < grid.nx - 1; ++i)
      active[static_cast<std::size_t>(grid.index(i, j))] = inside(disk, {grid.x(i), grid.y(j)});
  return active;
}

double data_scale(const RectGrid& grid, const Eigen::VectorXd& data) {
  double s = 1.0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.on_boundary(i, j)) s = std::max(s, std::abs(data[grid.index(i, j)]));
  return s;
}

}  // namespace

DiskSchedule make_schedule(const RectGrid& grid, double radius_fraction) {
  if (!(radius_fraction > 0 && radius_fraction < 1))
    throw std::invalid_argument("radius_fraction must lie in (0, 1)");
  const double mu = margin(grid);
  const double R = std::min(radius_fraction * grid.m, radius_fraction * grid.L);
  DiskSchedule s;

  const double ylim = grid.m - R - mu, xlim = grid.L - R - mu;
  const int rows = ylim > 0 ? static_cast<int>(std::ceil(2.0 * ylim / R)) + 1 : 1;
  const int cols = xlim > 0 ? static_cast<int>(std::ceil(2.0 * xlim / R)) + 1 : 1;
  for (int r = 0; r < rows; ++r) {
    const double y = rows == 1 ? 0.0 : -ylim + 2.0 * ylim * r / (rows - 1);
    const double shift = (r % 2) ? 0.5 * R : 0.0;
    for (int c = 0; c < cols + (r % 2 ? 1 : 0); ++c) {
      const double x = cols == 1 ? 0.0 : -xlim + 2.0 * xlim * c / (cols - 1) - shift;
      s.disks.push_back(clamped_disk(grid, {x, y}, R));
    }
  }

  // fill what the lattice misses
  for (int j = 1; j < grid.ny - 1; ++j) {
    for (int i = 1; i < grid.nx - 1; ++i) {
      const Eigen::Vector2d p(grid.x(i), grid.y(j));
      if (std::any_of(s.disks.begin(), s.disks.end(), [&](const Disk& d) { return inside(d, p); })) continue;
      double r = R;
      Disk d = clamped_disk(grid, p, r);
      while ((p - d.center).norm() >= 0.98 * r) {
        r *= 0.9;
        d = clamped_disk(grid, p, r);
      }
      s.disks.push_back(d);
    }
  }
  return s;
}

bool covers_grid(const RectGrid& grid, const DiskSchedule& schedule) {
  for (int j = 1; j < grid.ny - 1; ++j)
    for (int i = 1; i < grid.nx - 1; ++i) {
      const Eigen::Vector2d p(grid.x(i), grid.y(j));
      if (std::none_of(schedule.disks.begin(), schedule.disks.end(), [&](const Disk& d) { return inside(d, p); }))
        return false;
    }
  return true;
}

void validate_schedule(const RectGrid& grid, const DiskSchedule& schedule, bool require_coverage) {
  for (std::size_t k = 0; k < schedule.disks.size(); ++k) {
    const Disk& d = schedule.disks[k];
    if (!(d.radius > 0) || std::abs(d.center.x()) + d.radius >= grid.L ||
        std::abs(d.center.y()) + d.radius >= grid.m) {
      std::ostringstream msg;
      msg << "disk " << k << " (centre " << d.center.x() << ", " << d.center.y() << ", radius " << d.radius
          << ") does not have its closure inside the domain";
      throw std::invalid_argument(msg.str());
    }
  }
  if (!require_coverage) return;
  for (int j = 1; j < grid.ny - 1; ++j) {
    for (int i = 1; i < grid.nx - 1; ++i) {
      const Eigen::Vector2d p(grid.x(i), grid.y(j));
      if (std::none_of(schedule.disks.begin(), schedule.disks.end(),
                       [&](const Disk& d) { return inside(d, p); })) {
        std::ostringstream msg;
        msg << "node (" << p.x() << ", " << p.y() << ") is not covered by any disk";
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

DiskSchedule shuffled(const DiskSchedule& schedule, std::uint64_t seed) {
  DiskSchedule out = schedule;
  std::mt19937_64 rng(seed);
  // Fisher-Yates with our own index draw so the order is the same on every standard library
  for (std::size_t k = out.disks.size(); k > 1; --k) {
    const std::size_t j = static_cast<std::size_t>(rng() % k);
    std::swap(out.disks[k - 1], out.disks[j]);
  }
  return out;
}

double bilinear(const RectGrid& grid, const Eigen::VectorXd& u, double x, double y) {
  const double sx = std::clamp((x + grid.L) / grid.hx, 0.0, static_cast<double>(grid.nx - 1));
  const double sy = std::clamp((y + grid.m) / grid.hy, 0.0, static_cast<double>(grid.ny - 1));
  const int i = std::min(static_cast<int>(sx), grid.nx - 2);
  const int j = std::min(static_cast<int>(sy), grid.ny - 2);
  const double tx = sx - i, ty = sy - j;
  return (1 - tx) * (1 - ty) * u[grid.index(i, j)] + tx * (1 - ty) * u[grid.index(i + 1, j)] +
         (1 - tx) * ty * u[grid.index(i, j + 1)] + tx * ty * u[grid.index(i + 1, j + 1)];
}

Eigen::VectorXd lift_disk(const RectGrid& grid, const Eigen::VectorXd& u, const Disk& disk, const Equation& eq,
                          const SolveConfig& cfg, LiftMode mode) {
  Eigen::VectorXd out = u;
  if (mode == LiftMode::grid) {
    const GridSubsystem sub = make_grid_system(grid, u, mask_of(grid, disk), eq);
    if (sub.system.size() == 0) return out;
    Eigen::VectorXd x0(sub.system.size());
    for (Eigen::Index k = 0; k < x0.size(); ++k) x0[k] = u[sub.grid_nodes[k]];
    const NewtonResult res = newton_solve(sub.system, x0, cfg);
    for (Eigen::Index k = 0; k < x0.size(); ++k) out[sub.grid_nodes[k]] = res.unknowns[k];
    return out;
  }

  const DiskDomain dom = DiskDomain::on_grid(grid, disk.center, disk.radius);
  const BoundaryData trace = [&](double x, double y) { return bilinear(grid, u, x, y); };
  const SolutionField f = solve_dirichlet(dom, trace, eq, cfg, trace);
  for (Eigen::Index k = 0; k < f.points.cols(); ++k) {
    if (f.kind[static_cast<std::size_t>(k)] == NodeKind::boundary) continue;
    const int i = static_cast<int>(std::lround((f.points(0, k) + grid.L) / grid.hx));
    const int j = static_cast<int>(std::lround((f.points(1, k) + grid.m) / grid.hy));
    if (grid.on_boundary(i, j)) continue;
    out[grid.index(i, j)] = f.values[k];
  }
  return out;
}

SuperfunctionCertificate is_superfunction(const RectGrid& grid, const Eigen::VectorXd& u,
                                          const ConvexBoundaryFunction& f, const DiskSchedule& schedule,
                                          const Equation& eq, const SolveConfig& cfg, double tolerance) {
  SuperfunctionCertificate c;
  c.tolerance = tolerance;
  const Eigen::VectorXd data = strip_boundary_values(grid, f);
  double worst = -std::numeric_limits<double>::infinity();
  Eigen::Vector2d where = Eigen::Vector2d::Zero();
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.on_boundary(i, j)) {
        const double v = data[grid.index(i, j)] - u[grid.index(i, j)];
        if (v > worst) worst = v, where = {grid.x(i), grid.y(j)};
      }
  c.boundary_violation = worst;
  c.boundary_ok = worst <= tolerance;
  if (!c.boundary_ok) c.witness_point = where;

  c.lift_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < schedule.disks.size(); ++k) {
    const Eigen::VectorXd lifted = lift_disk(grid, u, schedule.disks[k], eq, cfg);
    Eigen::Index idx;
    const double e = (lifted - u).maxCoeff(&idx);
    if (e > c.lift_excess) {
      c.lift_excess = e;
      if (e > tolerance) {
        c.witness_disk = k;
        if (c.boundary_ok) c.witness_point = {grid.x(static_cast<int>(idx % grid.nx)), grid.y(static_cast<int>(idx / grid.nx))};
      }
    }
  }
  c.pass = c.boundary_ok && c.lift_excess <= tolerance;
  return c;
}

PerronResult perron_iterate(const ConvexBoundaryFunction& f, Alpha alpha, const RectGrid& grid,
                            const DiskSchedule& schedule, const SolveConfig& cfg, const PerronOptions& opt) {
  check_strip_width(alpha, grid.m);
  validate_schedule(grid, schedule, false);
  const Equation eq = Equation::soliton(alpha.value());

  PerronResult out;
  out.minimal = solve_minimal(f, grid, cfg).values;
  const auto profile = barrier_profile(alpha, grid.m);
  out.envelope = BarrierEnvelope(f, profile, grid.m, chebyshev_abscissae(grid.L, opt.barrier_count)).on_grid(grid);

  const double scale = data_scale(grid, out.minimal);
  const double h = grid.spacing();
  out.eps_num = 1e-12 * scale;
  out.epsilon = 10.0 * h * h * scale;
  out.covered = covers_grid(grid, schedule);

  Eigen::VectorXd u = out.minimal;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    const Eigen::VectorXd before = u;
    double worst_increase = 0;
    for (const Disk& d : schedule.disks) {
      const Eigen::VectorXd next = lift_disk(grid, u, d, eq, cfg, opt.mode);
      worst_increase = std::max(worst_increase, (next - u).maxCoeff());
      u = next;
    }
    const Eigen::VectorXd drop = before - u;
    out.trace.max_decrease.push_back(drop.maxCoeff());
    out.trace.min_decrease.push_back(std::min(drop.minCoeff(), -worst_increase));
    out.trace.residual.push_back(residual(grid, u, eq).cwiseAbs().maxCoeff());
    out.trace.sandwich_violation.push_back(
        std::max((out.envelope - u).maxCoeff(), (u - out.minimal).maxCoeff()));

    if (worst_increase > 10.0 * out.eps_num) {
      std::ostringstream msg;
      msg.precision(3);
      msg << "lift increased the iterate by " << std::scientific << worst_increase << " in sweep " << sweep + 1
          << " (limit " << 10.0 * out.eps_num << ")";
      throw MonotonicityViolation(msg.str(), out.trace);
    }
    if (out.trace.max_decrease.back() < opt.sweep_tol * scale && out.trace.residual.back() < opt.residual_tol) {
      out.trace.converged = true;
      break;
    }
  }
  out.field = std::move(u);
  return out;
}

}  // namespace soliton
