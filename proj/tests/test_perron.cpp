#include "soliton/minimal_graph.hpp"
#include "soliton/pde_solver.hpp"
#include "soliton/perron.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace soliton;

TEST_CASE("schedule covers the grid and respects the domain") {
  const auto g = RectGrid::make(2.0, 1.0, 41, 21);
  const DiskSchedule s = make_schedule(g);
  CHECK(covers_grid(g, s));
  CHECK_NOTHROW(validate_schedule(g, s));
  for (const Disk& d : s.disks) {
    CHECK(std::abs(d.center.x()) + d.radius < g.L);
    CHECK(std::abs(d.center.y()) + d.radius < g.m);
  }
  CHECK_THROWS_AS(make_schedule(g, 1.2), std::invalid_argument);

  DiskSchedule bad = s;
  bad.disks.push_back({{1.5, 0.0}, 0.6});
  CHECK_THROWS_AS(validate_schedule(g, bad), std::invalid_argument);
  DiskSchedule one{{Disk{{0, 0}, 0.5}}};
  CHECK_FALSE(covers_grid(g, one));
  CHECK_THROWS_AS(validate_schedule(g, one), std::invalid_argument);
  CHECK_NOTHROW(validate_schedule(g, one, false));
}

TEST_CASE("shuffle is a deterministic permutation") {
  const auto g = RectGrid::make(2.0, 1.0, 41, 21);
  const DiskSchedule s = make_schedule(g);
  const DiskSchedule a = shuffled(s, 7), b = shuffled(s, 7), c = shuffled(s, 8);
  REQUIRE(a.disks.size() == s.disks.size());
  bool same_as_c = true;
  for (std::size_t k = 0; k < a.disks.size(); ++k) {
    CHECK(a.disks[k].center == b.disks[k].center);
    same_as_c = same_as_c && a.disks[k].center == c.disks[k].center;
  }
  CHECK_FALSE(same_as_c);
  auto key = [](const Disk& d) { return std::make_tuple(d.center.x(), d.center.y(), d.radius); };
  std::vector<std::tuple<double, double, double>> ks, ka;
  for (const Disk& d : s.disks) ks.push_back(key(d));
  for (const Disk& d : a.disks) ka.push_back(key(d));
  std::sort(ks.begin(), ks.end());
  std::sort(ka.begin(), ka.end());
  CHECK(ks == ka);
}

TEST_CASE("bilinear interpolation is exact on bilinear functions") {
  const auto g = RectGrid::make(1.0, 1.0, 11, 11);
  Eigen::VectorXd u(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) u[g.index(i, j)] = 1 + 2 * g.x(i) - g.y(j) + 0.5 * g.x(i) * g.y(j);
  for (auto [x, y] : {std::pair{0.13, -0.71}, std::pair{-0.99, 0.05}, std::pair{1.0, 1.0}})
    CHECK(std::abs(bilinear(g, u, x, y) - (1 + 2 * x - y + 0.5 * x * y)) < 1e-14);
}

TEST_CASE("lifting zero over the unit disk gives the negative bowl") {
  const double h = 1.0 / 20;
  const auto g = RectGrid::make(1.5, 1.5, 61, 61);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.size());
  const Disk d{{0, 0}, 1.0};
  const Equation eq = Equation::soliton(1.0);
  const RadialProfile bowl = integrate_bowl(Alpha(1), 1.0);

  const Eigen::VectorXd lifted = lift_disk(g, zero, d, eq, SolveConfig{}, LiftMode::interpolated);
  CHECK(std::abs(lifted[g.index(30, 30)] + bowl.value(1.0)) <= 5 * h * h);
  CHECK(lifted.maxCoeff() <= 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (std::hypot(g.x(i), g.y(j)) >= 1.0) CHECK(lifted[g.index(i, j)] == 0.0);

  // the grid-consistent lift sees a staircase boundary, still below zero
  const Eigen::VectorXd grid_lift = lift_disk(g, zero, d, eq, SolveConfig{});
  CHECK(grid_lift.maxCoeff() <= 0.0);
  CHECK(std::abs(grid_lift[g.index(30, 30)] + bowl.value(1.0)) < 0.05);
}

TEST_CASE("a discrete solution is a fixed point of every lift") {
  const auto g = RectGrid::make(2.0, 1.0, 41, 21);
  const auto f = ConvexBoundaryFunction::polynomial({0, 0, 1});
  const StripSolution s = solve_strip(f, Alpha(1), g, SolveConfig{});
  const Equation eq = Equation::soliton(1.0);
  for (const Disk& d : make_schedule(g).disks) {
    const Eigen::VectorXd l = lift_disk(g, s.field.values, d, eq, SolveConfig{});
    CHECK((l - s.field.values).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("superfunction certificates") {
  const auto g = RectGrid::make(2.0, 1.0, 41, 21);
  const auto f = ConvexBoundaryFunction::polynomial({0, 0, 1});
  const Equation eq = Equation::soliton(1.0);
  const DiskSchedule sched = make_schedule(g);
  const double tol = 1e-10;

  const MinimalField v0 = solve_minimal(f, g, SolveConfig{});
  CHECK(is_superfunction(g, v0.values, f, sched, eq, SolveConfig{}, tol).pass);

  const StripSolution s = solve_strip(f, Alpha(1), g, SolveConfig{});
  const Eigen::VectorXd below = s.envelope.array() - 1.0;
  const SuperfunctionCertificate c = is_superfunction(g, below, f, sched, eq, SolveConfig{}, tol);
  CHECK_FALSE(c.pass);
  CHECK_FALSE(c.boundary_ok);
  CHECK(c.boundary_violation >= 1.0 - 1e-9);

  // the minimum of two superfunctions
  const Eigen::VectorXd raised = s.field.values.array() + 0.05;
  const Eigen::VectorXd lo = v0.values.cwiseMin(raised);
  CHECK(is_superfunction(g, lo, f, sched, eq, SolveConfig{}, tol).pass);
}

TEST_CASE("one lift never raises the minimal graph") {
  const auto g = RectGrid::make(2.0, 1.0, 41, 21);
  const auto f = ConvexBoundaryFunction::cosh(1.0);
  const MinimalField v0 = solve_minimal(f, g, SolveConfig{});
  const Eigen::VectorXd l = lift_disk(g, v0.values, Disk{{0.3, 0.1}, 0.6}, Equation::soliton(2.0), SolveConfig{});
  const Eigen::VectorXd drop = v0.values - l;
  CHECK(drop.minCoeff() >= -1e-12);
  CHECK(drop.maxCoeff() > 1e-3);
}

TEST_CASE("perron iteration converges to the direct solution") {
  const auto g = RectGrid::make(2.0, 1.0, 41, 21);
  const auto f = ConvexBoundaryFunction::polynomial({0, 0, 1});
  const PerronResult r = perron_iterate(f, Alpha(1), g, make_schedule(g), SolveConfig{});
  CHECK(r.trace.converged);
  CHECK(r.covered);
  for (double d : r.trace.min_decrease) CHECK(d >= -10 * r.eps_num);
  for (double v : r.trace.sandwich_violation) CHECK(v <= r.epsilon);
  const StripSolution s = solve_strip(f, Alpha(1), g, SolveConfig{});
  CHECK((r.field - s.field.values).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("perron rejects schedules leaving the domain and too-wide strips") {
  const auto g = RectGrid::make(2.0, 1.0, 41, 21);
  const auto f = ConvexBoundaryFunction::constant(0);
  DiskSchedule bad{{Disk{{0, 0.5}, 0.6}}};
  CHECK_THROWS_AS(perron_iterate(f, Alpha(1), g, bad, SolveConfig{}), std::invalid_argument);
  const auto wide = RectGrid::make(2.0, 1.6, 41, 21);
  CHECK_THROWS(perron_iterate(f, Alpha(1), wide, make_schedule(wide), SolveConfig{}));
}
