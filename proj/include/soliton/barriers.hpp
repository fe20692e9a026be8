#pragma once

#include "soliton/grid.hpp"
#include "soliton/profiles.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace soliton {

/// Convex function f on the real line from a whitelisted family with closed
/// form derivatives. The strip data is f(x) on both edges y = +-m.
class ConvexBoundaryFunction {
 public:
  enum class Form { polynomial, cosh, linear, constant };

  /// c0 + c1 x + c2 x^2 + ...
  static ConvexBoundaryFunction polynomial(std::vector<double> coefficients);
  /// scale * cosh(x)
  static ConvexBoundaryFunction cosh(double scale);
  static ConvexBoundaryFunction linear(double slope, double intercept);
  static ConvexBoundaryFunction constant(double value);

  Form form() const { return form_; }
  const std::vector<double>& parameters() const { return params_; }
  std::string describe() const;

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  struct Certificate {
    bool convex = false;
    double min_second_derivative = 0;
    double worst_x = 0;
    bool derivative_monotone = false;
  };
  static constexpr double kConvexityTolerance = 1e-10;
  /// Sampled check f'' >= -1e-10 and f' nondecreasing on [lo, hi].
  Certificate certify(double lo, double hi, int samples = 1001) const;

 private:
  ConvexBoundaryFunction(Form form, std::vector<double> params) : form_(form), params_(std::move(params)) {}
  Form form_;
  std::vector<double> params_;
};

/// f*(k) = sup_x (k x - f(x)); `bounded` is false when the supremum is +inf.
struct ConjugateValue {
  bool bounded = false;
  double value = kInfinity;
  double argmax_lo = 0;  // maximisers form [argmax_lo, argmax_hi]
  double argmax_hi = 0;
};

ConjugateValue convex_conjugate(const ConvexBoundaryFunction& f, double slope);

/// Restriction of a grim reaper to either strip edge: slope * x + intercept.
struct LineTrace {
  double slope;
  double intercept;
};

LineTrace boundary_trace(const GrimReaper& g, double m);

struct BarrierCertificate {
  std::optional<GrimReaper> reaper;
  double alpha = 0;
  double m = 0;
  double margin = 0;                 // -f*(k) - c, -inf when the conjugate is unbounded
  double sampled_margin = kInfinity; // min over samples of f - trace on the window
  std::optional<double> touch_x;
  std::optional<std::pair<double, double>> touch_interval;
  bool admissible = false;
  double tolerance = 0;
};

/// Admissibility of w_theta below f on the strip edges, certified through the
/// conjugate and cross-checked on 10^3 samples of `window`.
BarrierCertificate is_admissible(const GrimReaper& g, const ConvexBoundaryFunction& f, double m,
                                 std::pair<double, double> window);

/// Profile covering what barriers on a strip of half-width m need. Throws
/// WidthError when m >= d(alpha).
std::shared_ptr<const PlanarProfile> barrier_profile(Alpha alpha, double m, double tol = 1e-12);

/// The grim reaper whose edge trace is the tangent line of f at x0.
GrimReaper touching_barrier(double x0, const ConvexBoundaryFunction& f,
                            const std::shared_ptr<const PlanarProfile>& profile, double m);

/// Chebyshev-Lobatto abscissae over [-L, L].
std::vector<double> chebyshev_abscissae(double L, int count = 33);

/// Pointwise maximum of touching barriers.
class BarrierEnvelope {
 public:
  BarrierEnvelope(const ConvexBoundaryFunction& f, const std::shared_ptr<const PlanarProfile>& profile,
                  double m, const std::vector<double>& abscissae);

  const std::vector<GrimReaper>& members() const { return members_; }
  double operator()(double x, double y) const;
  /// Values at all grid nodes (row-major).
  Eigen::VectorXd on_grid(const RectGrid& grid) const;

 private:
  std::vector<GrimReaper> members_;
};

Eigen::VectorXd lower_envelope(const ConvexBoundaryFunction& f, Alpha alpha, double m,
                               const std::vector<double>& abscissae, const RectGrid& grid);

}  // namespace soliton
