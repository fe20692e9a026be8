#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace soliton {

/// Tensor grid on [-L, L] x [-m, m] with the boundary lines as nodes.
/// Node (i, j) has flat index j * nx + i.
struct RectGrid {
  double L = 0;
  double m = 0;
  int nx = 0;
  int ny = 0;
  double hx = 0;
  double hy = 0;

  static RectGrid make(double L, double m, int nx, int ny);

  double x(int i) const { return -L + 2.0 * L * i / (nx - 1); }
  double y(int j) const { return -m + 2.0 * m * j / (ny - 1); }
  Eigen::Index index(int i, int j) const { return static_cast<Eigen::Index>(j) * nx + i; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(nx) * ny; }
  bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx - 1 || j == ny - 1; }
  double spacing() const { return std::max(hx, hy); }
};

/// Closed disk discretised on a Cartesian lattice origin + (i hx, j hy).
struct DiskDomain {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double hx = 0;
  double hy = 0;

  static DiskDomain centered(const Eigen::Vector2d& center, double radius, double h);
  /// Disk on the lattice of an existing grid.
  static DiskDomain on_grid(const RectGrid& grid, const Eigen::Vector2d& center, double radius);

  bool contains(const Eigen::Vector2d& p) const { return (p - center).norm() < radius; }
};

enum class NodeKind : unsigned char { interior, irregular, boundary };

/// Nodal solution on a rectangle or a disk together with the solve diagnostics.
struct SolutionField {
  Eigen::Matrix2Xd points;
  Eigen::VectorXd values;
  std::vector<NodeKind> kind;
  Eigen::VectorXd gradient;  // |Du| per node, NaN where not defined

  double alpha = 0;          // 0 for the minimal-surface operator
  double residual = 0;       // sup-norm of the final discrete residual
  int iterations = 0;
  double spacing = 0;
  double data_min = 0;
  double data_max = 0;
  Eigen::Vector2d enclosing_center = Eigen::Vector2d::Zero();
  double enclosing_radius = 0;
  std::optional<RectGrid> grid;  // set for rectangle fields
};

}  // namespace soliton
