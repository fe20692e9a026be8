#include "soliton/pde_solver.hpp"
#include "soliton/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace soliton;

namespace {

const RectGrid& grid() {
  static const RectGrid g = RectGrid::make(3.0, 1.0, 61, 21);
  return g;
}

const StripSolution& square() {
  static const StripSolution s =
      solve_strip(ConvexBoundaryFunction::polynomial({0, 0, 1}), Alpha(1), grid(), SolveConfig{});
  return s;
}

}  // namespace

TEST_CASE("property battery passes on a strip solution") {
  const StripSolution& s = square();
  for (const PropertyReport& r : {check_bounds(s.field), check_gradient_boundary(s.field), check_sandwich(s),
                                  check_comparison(s.field, s.minimal)}) {
    CAPTURE(r.name);
    CHECK(r.pass);
    CHECK(r.worst_violation == 0);
    CHECK(r.slack >= 0);
    CHECK_FALSE(r.tolerances.empty());
  }
}

TEST_CASE("bounds use the circumscribing bowl") {
  const StripSolution& s = square();
  const PropertyReport r = check_bounds(s.field);
  const double R = std::hypot(3.0, 1.0);
  const double bmin = r.tolerances[1].second;
  CHECK(bmin == doctest::Approx(-integrate_bowl(Alpha(1), R).value(R)));
  CHECK(s.field.enclosing_radius == doctest::Approx(R));
}

TEST_CASE("a perturbed field fails the sandwich at the perturbation") {
  StripSolution s = square();
  const Eigen::Index k = grid().index(30, 10);
  s.field.values[k] = s.minimal.values[k] + 2.0;  // epsilon is 0.9 here
  const PropertyReport r = check_sandwich(s);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_violation == doctest::Approx(2.0 - s.epsilon));
  CHECK(r.location.x() == doctest::Approx(0.0));
  CHECK(r.location.y() == doctest::Approx(0.0));
}

TEST_CASE("comparison needs ordered data on shared nodes") {
  const StripSolution& s = square();
  const SolutionField& u = s.field;
  SolutionField bumped = u;
  bumped.values[grid().index(30, 10)] += 2.0;
  CHECK_FALSE(check_comparison(bumped, u).pass);
  SolutionField higher = u;
  higher.values = u.values.array() + 1.0;
  CHECK_NOTHROW(check_comparison(u, higher));
  CHECK_THROWS_AS(check_comparison(higher, u), std::invalid_argument);

  const auto other = RectGrid::make(3.0, 1.0, 31, 21);
  const StripSolution t =
      solve_strip(ConvexBoundaryFunction::polynomial({0, 0, 1}), Alpha(1), other, SolveConfig{});
  CHECK_THROWS_AS(check_comparison(t.field, u), std::invalid_argument);
}

TEST_CASE("uniqueness from different guesses") {
  const StripSolution& s = square();
  const auto f = ConvexBoundaryFunction::polynomial({0, 0, 1});
  const PropertyReport r =
      check_uniqueness(f, Alpha(1), grid(), SolveConfig{}, {s.envelope, s.minimal.values, s.field.values});
  CHECK(r.pass);
  CHECK_FALSE(r.inconclusive);

  // identical guesses give bit-identical limits
  const PropertyReport same = check_uniqueness(f, Alpha(1), grid(), SolveConfig{}, {s.envelope, s.envelope});
  CHECK(same.pass);
  CHECK(same.slack == same.tolerances[0].second);

  CHECK_THROWS_AS(check_uniqueness(f, Alpha(1), grid(), SolveConfig{}, {s.envelope}), std::invalid_argument);

  SolveConfig starved;
  starved.max_iterations = 1;
  const PropertyReport bad = check_uniqueness(f, Alpha(1), grid(), starved, {s.envelope, s.minimal.values});
  CHECK(bad.inconclusive);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("gradient check on a disk uses the cut-arm nodes") {
  const RadialProfile bowl = integrate_bowl(Alpha(1), 1.0);
  const SolutionField u = solve_dirichlet(
      DiskDomain::centered({0, 0}, 1.0, 0.05), [&](double x, double y) { return bowl.value(std::min(1.0, std::hypot(x, y))); },
      Equation::soliton(1.0), SolveConfig{});
  const PropertyReport r = check_gradient_boundary(u);
  CHECK(r.pass);
  CHECK_FALSE(r.note.empty());
  CHECK(check_bounds(u).pass);
}
