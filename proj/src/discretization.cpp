#include "soliton/discretization.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace soliton {

RectGrid RectGrid::make(double L, double m, int nx, int ny) {
  if (nx < 5 || ny < 5) throw std::invalid_argument("grid needs at least 5 nodes per direction");
  if (!(L > 0.0) || !(m > 0.0) || !std::isfinite(L) || !std::isfinite(m)) {
    throw std::invalid_argument("grid extents must be finite and positive");
  }
  RectGrid g;
  g.L = L;
  g.m = m;
  g.nx = nx;
  g.ny = ny;
  g.hx = 2.0 * L / (nx - 1);
  g.hy = 2.0 * m / (ny - 1);
  return g;
}

DiskDomain DiskDomain::centered(const Eigen::Vector2d& center, double radius, double h) {
  if (!(radius > 0.0) || !(h > 0.0)) throw std::invalid_argument("disk radius and spacing must be positive");
  DiskDomain d;
  d.center = center;
  d.radius = radius;
  d.origin = center;
  d.hx = h;
  d.hy = h;
  return d;
}

DiskDomain DiskDomain::on_grid(const RectGrid& grid, const Eigen::Vector2d& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
  DiskDomain d;
  d.center = center;
  d.radius = radius;
  d.origin = Eigen::Vector2d(-grid.L, -grid.m);
  d.hx = grid.hx;
  d.hy = grid.hy;
  return d;
}

// ---------------------------------------------------------------------------

namespace {

using Derivative = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 16, 1>;
using AD = Eigen::AutoDiffScalar<Derivative>;

void collect(const ValueRef& r, std::vector<Eigen::Index>& ids) {
  if (!r.fixed() && std::find(ids.begin(), ids.end(), r.unknown) == ids.end()) ids.push_back(r.unknown);
}

}  // namespace

Eigen::VectorXd StencilSystem::residual(const Eigen::VectorXd& U) const {
  Eigen::VectorXd F(size());
  auto get = [&U](const ValueRef& r) { return r.fixed() ? r.value : U[r.unknown]; };
  for (Eigen::Index k = 0; k < size(); ++k) {
    F[k] = node_residual<double>(nodes_[k], U[k], get, eq_);
  }
  return F;
}

void StencilSystem::linearize(const Eigen::VectorXd& U, Eigen::VectorXd& F,
                              Eigen::SparseMatrix<double>& J) const {
  F.resize(size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(size()) * 9);
  std::vector<Eigen::Index> ids;
  for (Eigen::Index k = 0; k < size(); ++k) {
    const NodeStencil& st = nodes_[k];
    ids.clear();
    ids.push_back(k);
    for (int d = 0; d < 4; ++d) {
      collect(st.arm[d].ref, ids);
      if (st.far[d].valid) {
        collect(st.far[d].plus.ref, ids);
        collect(st.far[d].minus.ref, ids);
      }
    }
    const int n = static_cast<int>(ids.size());
    if (n > 16) throw std::logic_error("stencil touches more than 16 unknowns");
    auto get = [&](const ValueRef& r) -> AD {
      if (r.fixed()) return AD(r.value, Derivative::Zero(n));
      const auto pos = std::find(ids.begin(), ids.end(), r.unknown) - ids.begin();
      return AD(U[r.unknown], n, static_cast<int>(pos));
    };
    const AD u(U[k], n, 0);
    const AD r = node_residual<AD>(st, u, get, eq_);
    F[k] = r.value();
    for (int i = 0; i < n; ++i) {
      const double v = r.derivatives().size() ? r.derivatives()[i] : 0.0;
      if (v != 0.0) triplets.emplace_back(k, ids[i], v);
    }
  }
  J.resize(size(), size());
  J.setFromTriplets(triplets.begin(), triplets.end());
}

Eigen::Vector2d StencilSystem::gradient(const Eigen::VectorXd& U, Eigen::Index k) const {
  const NodeStencil& st = nodes_[k];
  auto get = [&U](const ValueRef& r) { return r.fixed() ? r.value : U[r.unknown]; };
  return {centered_derivative(get(st.arm[kEast].ref), U[k], get(st.arm[kWest].ref),
                              st.arm[kEast].length, st.arm[kWest].length),
          centered_derivative(get(st.arm[kNorth].ref), U[k], get(st.arm[kSouth].ref),
                              st.arm[kNorth].length, st.arm[kSouth].length)};
}

// ---------------------------------------------------------------------------
// Rectangle grids

GridSubsystem make_grid_system(const RectGrid& grid, const Eigen::VectorXd& field,
                               const std::vector<bool>& active, Equation eq) {
  if (field.size() != grid.size() || static_cast<Eigen::Index>(active.size()) != grid.size()) {
    throw std::invalid_argument("field/mask size does not match grid");
  }
  GridSubsystem out;
  std::vector<Eigen::Index> unknown_of(static_cast<std::size_t>(grid.size()), -1);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const Eigen::Index idx = grid.index(i, j);
      if (!active[idx]) continue;
      if (grid.on_boundary(i, j)) throw std::invalid_argument("boundary nodes cannot be unknowns");
      unknown_of[idx] = static_cast<Eigen::Index>(out.grid_nodes.size());
      out.grid_nodes.push_back(idx);
    }
  }

  auto ref = [&](int i, int j) {
    const Eigen::Index idx = grid.index(i, j);
    return unknown_of[idx] >= 0 ? ValueRef{unknown_of[idx], 0.0} : ValueRef{-1, field[idx]};
  };
  static constexpr int di[4] = {1, -1, 0, 0};
  static constexpr int dj[4] = {0, 0, 1, -1};

  std::vector<NodeStencil> nodes;
  nodes.reserve(out.grid_nodes.size());
  for (const Eigen::Index idx : out.grid_nodes) {
    const int i = static_cast<int>(idx % grid.nx), j = static_cast<int>(idx / grid.nx);
    NodeStencil st;
    st.position = {grid.x(i), grid.y(j)};
    st.grid_node = idx;
    for (int d = 0; d < 4; ++d) {
      const int qi = i + di[d], qj = j + dj[d];
      const double h = d < 2 ? grid.hx : grid.hy;
      st.arm[d] = {ref(qi, qj), h};
      // Far end tangential arms: y-arms for east/west faces, x-arms for north/south.
      FarArms& f = st.far[d];
      if (d < 2) {
        f.plus = {ref(qi, qj + 1), grid.hy};
        f.minus = {ref(qi, qj - 1), grid.hy};
      } else {
        f.plus = {ref(qi + 1, qj), grid.hx};
        f.minus = {ref(qi - 1, qj), grid.hx};
      }
      f.valid = true;
    }
    nodes.push_back(st);
  }
  out.system = StencilSystem(eq, std::move(nodes));
  return out;
}

GridSubsystem make_rect_system(const RectGrid& grid, const Eigen::VectorXd& field, Equation eq) {
  std::vector<bool> active(static_cast<std::size_t>(grid.size()), false);
  for (int j = 1; j < grid.ny - 1; ++j) {
    for (int i = 1; i < grid.nx - 1; ++i) active[grid.index(i, j)] = true;
  }
  return make_grid_system(grid, field, active, eq);
}

// ---------------------------------------------------------------------------
// Disks (Shortley-Weller)

namespace {

struct LatticeKey {
  long i, j;
  bool operator==(const LatticeKey& o) const { return i == o.i && j == o.j; }
};
struct LatticeHash {
  std::size_t operator()(const LatticeKey& k) const {
    return std::hash<long>()(k.i * 1000003L + k.j);
  }
};

enum class Cls { outside, inside, on_circle };

}  // namespace

DiskSystem make_disk_system(const DiskDomain& disk, const BoundaryData& data, Equation eq) {
  if (!(disk.radius > 0.0) || !(disk.hx > 0.0) || !(disk.hy > 0.0)) {
    throw std::invalid_argument("degenerate disk domain");
  }
  const double tiny = 1e-3 * std::min(disk.hx, disk.hy);
  const double R = disk.radius;
  auto point = [&](long i, long j) {
    return Eigen::Vector2d(disk.origin.x() + i * disk.hx, disk.origin.y() + j * disk.hy);
  };
  auto classify = [&](long i, long j) {
    const double dist = (point(i, j) - disk.center).norm();
    if (dist < R - tiny) return Cls::inside;
    if (std::abs(dist - R) <= tiny) return Cls::on_circle;
    return Cls::outside;
  };
  auto project = [&](const Eigen::Vector2d& p) -> Eigen::Vector2d {
    const Eigen::Vector2d v = p - disk.center;
    const double n = v.norm();
    return n > 0 ? Eigen::Vector2d(disk.center + v * (R / n)) : p;
  };

  const long i0 = static_cast<long>(std::floor((disk.center.x() - R - disk.origin.x()) / disk.hx)) - 1;
  const long i1 = static_cast<long>(std::ceil((disk.center.x() + R - disk.origin.x()) / disk.hx)) + 1;
  const long j0 = static_cast<long>(std::floor((disk.center.y() - R - disk.origin.y()) / disk.hy)) - 1;
  const long j1 = static_cast<long>(std::ceil((disk.center.y() + R - disk.origin.y()) / disk.hy)) + 1;

  DiskSystem out;
  std::unordered_map<LatticeKey, Eigen::Index, LatticeHash> unknown_of;
  std::unordered_map<LatticeKey, double, LatticeHash> circle_value;
  std::vector<LatticeKey> unknowns;
  std::vector<Eigen::Vector2d> bpts;
  std::vector<double> bvals;
  double dmin = std::numeric_limits<double>::infinity(), dmax = -dmin;
  auto record = [&](double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite boundary data on disk");
    dmin = std::min(dmin, v);
    dmax = std::max(dmax, v);
  };

  for (long j = j0; j <= j1; ++j) {
    for (long i = i0; i <= i1; ++i) {
      const Cls c = classify(i, j);
      if (c == Cls::inside) {
        unknown_of[{i, j}] = static_cast<Eigen::Index>(unknowns.size());
        unknowns.push_back({i, j});
      } else if (c == Cls::on_circle) {
        const Eigen::Vector2d q = project(point(i, j));
        const double v = data(q.x(), q.y());
        record(v);
        circle_value[{i, j}] = v;
        bpts.push_back(point(i, j));
        bvals.push_back(v);
      }
    }
  }
  if (unknowns.empty()) throw std::invalid_argument("disk contains no lattice nodes");

  static constexpr int di[4] = {1, -1, 0, 0};
  static constexpr int dj[4] = {0, 0, 1, -1};

  // Arm from lattice node (i, j) in direction d; cut at the circle when needed.
  auto arm = [&](long i, long j, int d) -> Arm {
    const long qi = i + di[d], qj = j + dj[d];
    const double h = d < 2 ? disk.hx : disk.hy;
    if (auto it = unknown_of.find({qi, qj}); it != unknown_of.end()) return {{it->second, 0.0}, h};
    if (auto it = circle_value.find({qi, qj}); it != circle_value.end()) return {{-1, it->second}, h};
    const Eigen::Vector2d p = point(i, j);
    const Eigen::Vector2d e(di[d], dj[d]);
    const Eigen::Vector2d v = p - disk.center;
    const double b = v.dot(e);
    const double t = -b + std::sqrt(std::max(0.0, b * b - (v.squaredNorm() - R * R)));
    const Eigen::Vector2d q = p + t * e;
    const double val = data(q.x(), q.y());
    record(val);
    return {{-1, val}, std::clamp(t, tiny, h)};
  };

  std::vector<NodeStencil> nodes;
  nodes.reserve(unknowns.size());
  out.unknown_points.resize(2, static_cast<Eigen::Index>(unknowns.size()));
  out.unknown_kind.reserve(unknowns.size());
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    const auto [i, j] = unknowns[k];
    NodeStencil st;
    st.position = point(i, j);
    bool irregular = false;
    for (int d = 0; d < 4; ++d) {
      st.arm[d] = arm(i, j, d);
      if (st.arm[d].ref.fixed()) {
        irregular = true;
        continue;
      }
      const long qi = i + di[d], qj = j + dj[d];
      FarArms& f = st.far[d];
      f.plus = arm(qi, qj, d < 2 ? kNorth : kEast);
      f.minus = arm(qi, qj, d < 2 ? kSouth : kWest);
      f.valid = true;
    }
    out.unknown_points.col(static_cast<Eigen::Index>(k)) = st.position;
    out.unknown_kind.push_back(irregular ? NodeKind::irregular : NodeKind::interior);
    nodes.push_back(st);
  }
  out.system = StencilSystem(eq, std::move(nodes));
  out.boundary_points.resize(2, static_cast<Eigen::Index>(bpts.size()));
  for (std::size_t k = 0; k < bpts.size(); ++k) out.boundary_points.col(static_cast<Eigen::Index>(k)) = bpts[k];
  out.boundary_values = Eigen::Map<const Eigen::VectorXd>(bvals.data(), static_cast<Eigen::Index>(bvals.size()));
  out.data_min = dmin;
  out.data_max = dmax;
  return out;
}

}  // namespace soliton
