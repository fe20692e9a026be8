#pragma once

#include "soliton/barriers.hpp"
#include "soliton/discretization.hpp"
#include "soliton/grid.hpp"
#include "soliton/newton.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace soliton {

struct Disk {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0;
};

/// Ordered disks covering every interior node of a grid, each closure inside
/// the open truncated strip.
struct DiskSchedule {
  std::vector<Disk> disks;
};

/// Staggered lattice of radius radius_fraction * m with centre spacing equal
/// to the radius, then shrunken disks for any node the lattice misses.
DiskSchedule make_schedule(const RectGrid& grid, double radius_fraction = 0.4);

/// Throws std::invalid_argument naming the first disk whose closure leaves the
/// domain, or (with require_coverage) the first interior node no disk covers.
void validate_schedule(const RectGrid& grid, const DiskSchedule& schedule, bool require_coverage = true);
bool covers_grid(const RectGrid& grid, const DiskSchedule& schedule);

/// Deterministic permutation of the disk order.
DiskSchedule shuffled(const DiskSchedule& schedule, std::uint64_t seed);

enum class LiftMode {
  grid,          // grid stencil on nodes inside D, outside nodes as data
  interpolated,  // Shortley-Weller disk with bilinear circle data
};

/// M_D[u]: solves Q = 0 in D with the trace of u, keeps u outside D.
Eigen::VectorXd lift_disk(const RectGrid& grid, const Eigen::VectorXd& u, const Disk& disk,
                          const Equation& eq, const SolveConfig& cfg, LiftMode mode = LiftMode::grid);

/// Bilinear interpolation of a grid function.
double bilinear(const RectGrid& grid, const Eigen::VectorXd& u, double x, double y);

struct SuperfunctionCertificate {
  bool pass = false;
  bool boundary_ok = false;
  double boundary_violation = 0;  // max(data - u) over boundary nodes
  double lift_excess = 0;         // max over disks and nodes of M_D[u] - u
  std::optional<std::size_t> witness_disk;
  Eigen::Vector2d witness_point = Eigen::Vector2d::Zero();
  double tolerance = 0;
};

SuperfunctionCertificate is_superfunction(const RectGrid& grid, const Eigen::VectorXd& u,
                                          const ConvexBoundaryFunction& f, const DiskSchedule& schedule,
                                          const Equation& eq, const SolveConfig& cfg, double tolerance);

struct PerronTrace {
  std::vector<double> max_decrease;  // sup over nodes of (previous - current)
  std::vector<double> min_decrease;  // inf over nodes; negative means an increase
  std::vector<double> residual;      // sup-norm global residual after the sweep
  std::vector<double> sandwich_violation;
  bool converged = false;
};

class MonotonicityViolation : public std::runtime_error {
 public:
  MonotonicityViolation(const std::string& what, PerronTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const PerronTrace& trace() const { return trace_; }

 private:
  PerronTrace trace_;
};

struct PerronOptions {
  int max_sweeps = 500;
  double sweep_tol = 1e-9;       // stop when the sweep decrease falls below this (relative to scale)
  double residual_tol = 1e-6;    // global residual required at the stop
  int barrier_count = 33;
  LiftMode mode = LiftMode::grid;
};

struct PerronResult {
  Eigen::VectorXd field;
  Eigen::VectorXd minimal;   // v0, the starting superfunction
  Eigen::VectorXd envelope;  // barrier lower bound
  PerronTrace trace;
  double eps_num = 0;        // 1e-12 * scale
  double epsilon = 0;        // 10 h^2 scale sandwich tolerance
  bool covered = false;      // schedule covers every interior node
};

/// Monotone disk-lifting iteration starting from v0. Schedules that leave
/// nodes uncovered are accepted (those nodes keep v0) and flagged.
PerronResult perron_iterate(const ConvexBoundaryFunction& f, Alpha alpha, const RectGrid& grid,
                            const DiskSchedule& schedule, const SolveConfig& cfg,
                            const PerronOptions& opt = {});

}  // namespace soliton
