#pragma once

#include "soliton/grid.hpp"

#include <Eigen/Sparse>

#include <array>
#include <cmath>
#include <functional>
#include <type_traits>
#include <vector>

namespace soliton {

enum class Operator { soliton, minimal, laplace };

/// Which operator is discretised, and its exponent when it has a source term.
struct Equation {
  Operator op = Operator::soliton;
  double alpha = 1.0;

  static Equation soliton(double alpha) { return {Operator::soliton, alpha}; }
  static Equation minimal() { return {Operator::minimal, 0.0}; }
  static Equation laplace() { return {Operator::laplace, 0.0}; }
};

/// Either an unknown of the system or a fixed (Dirichlet) value.
struct ValueRef {
  Eigen::Index unknown = -1;
  double value = 0.0;
  bool fixed() const { return unknown < 0; }
};

struct Arm {
  ValueRef ref;
  double length = 0.0;
};

/// Tangential arms at the far end of an arm, used to average the tangential
/// derivative onto the face. Absent when the far end is a boundary point.
struct FarArms {
  Arm plus;
  Arm minus;
  bool valid = false;
};

enum Direction : int { kEast = 0, kWest = 1, kNorth = 2, kSouth = 3 };

struct NodeStencil {
  std::array<Arm, 4> arm;
  std::array<FarArms, 4> far;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Index grid_node = -1;  // owning lattice/grid node, when meaningful
};

template <typename Scalar>
double value_of(const Scalar& x) {
  if constexpr (std::is_arithmetic_v<Scalar>) return x;
  else return x.value();
}

/// Second-order derivative along one axis from arms of unequal length.
template <typename Scalar>
Scalar centered_derivative(const Scalar& plus, const Scalar& centre, const Scalar& minus,
                           double hp, double hm) {
  return (hm * hm * (plus - centre) + hp * hp * (centre - minus)) / (hp * hm * (hp + hm));
}

/// Conservative residual at one node: face fluxes Du/W with skew tangential
/// tangential derivatives, minus the source (1+|Du|^2)^{-alpha/2}.
/// `get` maps a ValueRef to a Scalar.
template <typename Scalar, typename Get>
Scalar node_residual(const NodeStencil& st, const Scalar& u, const Get& get, const Equation& eq) {
  using std::pow;
  using std::sqrt;
  const Scalar uE = get(st.arm[kEast].ref), uW = get(st.arm[kWest].ref);
  const Scalar uN = get(st.arm[kNorth].ref), uS = get(st.arm[kSouth].ref);
  const double hE = st.arm[kEast].length, hW = st.arm[kWest].length;
  const double hN = st.arm[kNorth].length, hS = st.arm[kSouth].length;

  const Scalar gx = centered_derivative(uE, u, uW, hE, hW);
  const Scalar gy = centered_derivative(uN, u, uS, hN, hS);

  // Tangential derivative on face d. The symmetric average is used only to
  // pick a skew pair: its sign decides which diagonal neighbour enters, so
  // that every diagonal weight of the residual is nonnegative. Both skew pairs
  // are second order on a uniform lattice; cut arms keep the symmetric average.
  auto tangential = [&](int d, const Scalar& far_value, const Scalar& normal, double sigma) -> Scalar {
    const bool horizontal = d == kEast || d == kWest;
    const Scalar own = horizontal ? gy : gx;
    const FarArms& f = st.far[d];
    if (!f.valid) return own;
    const Arm& ap = st.arm[horizontal ? kNorth : kEast];
    const Arm& am = st.arm[horizontal ? kSouth : kWest];
    const Scalar other = centered_derivative(get(f.plus.ref), far_value, get(f.minus.ref),
                                             f.plus.length, f.minus.length);
    const bool regular = ap.length == am.length && f.plus.length == f.minus.length && ap.length == f.plus.length;
    if (!regular) return Scalar(0.5 * (own + other));
    const double s = sigma * value_of(normal) * 0.5 * (value_of(own) + value_of(other));
    if (s > 0)
      return Scalar(0.5 * ((get(ap.ref) - u) / ap.length + (far_value - get(f.minus.ref)) / f.minus.length));
    return Scalar(0.5 * ((u - get(am.ref)) / am.length + (get(f.plus.ref) - far_value) / f.plus.length));
  };

  auto flux = [&](const Scalar& normal, const Scalar& tang) -> Scalar {
    if (eq.op == Operator::laplace) return normal;
    return normal / sqrt(1.0 + normal * normal + tang * tang);
  };

  const Scalar pE = (uE - u) / hE, pW = (u - uW) / hW, pN = (uN - u) / hN, pS = (u - uS) / hS;
  const Scalar fE = flux(pE, tangential(kEast, uE, pE, 1.0));
  const Scalar fW = flux(pW, tangential(kWest, uW, pW, -1.0));
  const Scalar fN = flux(pN, tangential(kNorth, uN, pN, 1.0));
  const Scalar fS = flux(pS, tangential(kSouth, uS, pS, -1.0));

  Scalar r = (fE - fW) / (0.5 * (hE + hW)) + (fN - fS) / (0.5 * (hN + hS));
  if (eq.op == Operator::soliton) r -= pow(1.0 + gx * gx + gy * gy, -0.5 * eq.alpha);
  return r;
}

/// Nonlinear system F(U) = 0 assembled from per-node stencils.
class StencilSystem {
 public:
  StencilSystem() = default;
  StencilSystem(Equation eq, std::vector<NodeStencil> nodes) : eq_(eq), nodes_(std::move(nodes)) {}

  const Equation& equation() const { return eq_; }
  const std::vector<NodeStencil>& nodes() const { return nodes_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(nodes_.size()); }

  Eigen::VectorXd residual(const Eigen::VectorXd& unknowns) const;
  /// Residual and its exact Jacobian (forward-mode AD over each stencil).
  void linearize(const Eigen::VectorXd& unknowns, Eigen::VectorXd& residual,
                 Eigen::SparseMatrix<double>& jacobian) const;
  /// Centered gradient (u_x, u_y) at unknown k.
  Eigen::Vector2d gradient(const Eigen::VectorXd& unknowns, Eigen::Index k) const;

 private:
  Equation eq_;
  std::vector<NodeStencil> nodes_;
};

/// System on a subset of the nodes of a rectangle grid. Nodes with
/// `active[idx]` become unknowns; every other node is held at `field[idx]`.
/// Active nodes must be interior grid nodes.
struct GridSubsystem {
  StencilSystem system;
  std::vector<Eigen::Index> grid_nodes;  // grid index of each unknown
};

GridSubsystem make_grid_system(const RectGrid& grid, const Eigen::VectorXd& field,
                               const std::vector<bool>& active, Equation eq);
/// All interior nodes active.
GridSubsystem make_rect_system(const RectGrid& grid, const Eigen::VectorXd& field, Equation eq);

using BoundaryData = std::function<double(double, double)>;

/// Shortley-Weller discretisation of a disk. Lattice nodes strictly inside
/// become unknowns, lattice nodes within a tiny distance of the circle are
/// boundary nodes carrying data, and arms crossing the circle are cut at the
/// intersection point with data evaluated there.
struct DiskSystem {
  StencilSystem system;
  Eigen::Matrix2Xd unknown_points;
  std::vector<NodeKind> unknown_kind;     // interior or irregular
  Eigen::Matrix2Xd boundary_points;       // lattice nodes on the circle
  Eigen::VectorXd boundary_values;
  double data_min = 0;
  double data_max = 0;
};

DiskSystem make_disk_system(const DiskDomain& disk, const BoundaryData& data, Equation eq);

}  // namespace soliton
