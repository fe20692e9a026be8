#pragma once

#include "soliton/ode.hpp"

#include <limits>
#include <memory>
#include <numbers>
#include <vector>

namespace soliton {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kHalfPi = std::numbers::pi / 2;

/// Exponent of the soliton equation. Positive, except that the limit case 0
/// is admitted through `Alpha::oracle` for comparisons with the half-circle.
class Alpha {
 public:
  explicit Alpha(double value);
  static Alpha oracle(double value);

  double value() const { return value_; }
  bool oracle_mode() const { return oracle_; }

 private:
  Alpha(double value, bool oracle) : value_(value), oracle_(oracle) {}
  double value_;
  bool oracle_ = false;
};

/// d(alpha) = int_0^{pi/2} (cos phi)^{1-alpha} dphi, the half-width of the
/// maximal domain of the untilted profile; kInfinity when the integral diverges
/// (alpha >= 2).
double halfwidth(Alpha alpha, double tol = 1e-13);

/// Half-width of the strip on which the grim reaper tilted by theta lives.
double reaper_domain_halfwidth(Alpha alpha, double theta);

struct ProfilePoint {
  double s;
  double y;
  double z;
  double phi;
};

struct ProfileOptions {
  double phi_stop = 15.0 / 16.0 * kHalfPi;
  double tol = 1e-12;
  /// Keep integrating past phi_stop until y reaches this value (barrier use).
  double y_cover = 0.0;
};

/// Value and first two derivatives of a one-variable profile at a point.
struct ProfileJet {
  double z;
  double dz;
  double d2z;
  double phi;
};

/// Generating curve of the untilted grim reaper: the solution of
/// y' = cos phi, z' = sin phi, phi' = (cos phi)^alpha through the origin with
/// phi(0) = 0, viewed as an even convex graph z(y).
class PlanarProfile {
 public:
  static PlanarProfile integrate(Alpha alpha, const ProfileOptions& opt = {});

  Alpha alpha() const { return alpha_; }
  double tolerance() const { return tol_; }
  double halfwidth() const { return d_; }
  /// Largest y covered by the integration; evaluation is valid on [-y_max, y_max].
  double y_max() const;
  double phi_end() const;
  /// Integration stopped on step-size underflow before the requested end.
  bool truncated() const { return traj_.truncated; }

  std::vector<ProfilePoint> points() const;

  ProfileJet jet(double y) const;
  double value(double y) const { return jet(y).z; }
  double slope(double y) const { return jet(y).dz; }

 private:
  PlanarProfile(Alpha alpha, double tol, double d, ode::Trajectory<3> traj)
      : alpha_(alpha), tol_(tol), d_(d), traj_(std::move(traj)) {}
  double angle_at(double y) const;

  Alpha alpha_;
  double tol_;
  double d_;
  ode::Trajectory<3> traj_;  // t = phi, state = (s, y, z)
};

PlanarProfile integrate_profile(Alpha alpha, double phi_stop, double tol);

/// Second-order jet of a function of (x, y).
struct Jet2 {
  double u = 0, ux = 0, uy = 0, uxx = 0, uxy = 0, uyy = 0;
};

/// Q[u] evaluated pointwise from the expanded (non-divergence) form
/// ((1+|Du|^2) Lap u - u_i u_j u_ij) / (1+|Du|^2)^{3/2} - (1+|Du|^2)^{-alpha/2}.
double soliton_operator(const Jet2& j, double alpha);

/// w_theta(x,y) = (cos theta)^{-(alpha+1)} w((cos theta)^alpha y) + tan(theta) x + a.
class GrimReaper {
 public:
  GrimReaper(std::shared_ptr<const PlanarProfile> base, double theta, double a);

  double alpha() const { return base_->alpha().value(); }
  double theta() const { return theta_; }
  double offset() const { return a_; }
  const PlanarProfile& base() const { return *base_; }
  std::shared_ptr<const PlanarProfile> base_ptr() const { return base_; }

  double domain_halfwidth() const;

  double operator()(double x, double y) const;
  /// Partial derivatives from the chain rule through the tilt/scale formula.
  Jet2 jet(double x, double y) const;

 private:
  double profile_argument(double y) const;

  std::shared_ptr<const PlanarProfile> base_;
  double theta_;
  double a_;
  double cos_;
};

double reaper_eval(const GrimReaper& g, double x, double y);

struct RadialSample {
  double r;
  double b;
  double bp;
};

/// Entire radial solution b(r) of the soliton equation with b(0) = b'(0) = 0
/// (the bowl), integrated on [0, R].
class RadialProfile {
 public:
  static constexpr double kSeedRadius = 1e-3;

  static RadialProfile integrate(Alpha alpha, double radius, double tol = 1e-12);

  Alpha alpha() const { return alpha_; }
  double radius() const { return traj_.t.back(); }
  double series_c4() const { return c4_; }
  double value(double r) const;
  double slope(double r) const;
  std::vector<RadialSample> samples() const;

  /// b''/(1+b'^2)^{3/2} + b'/(r sqrt(1+b'^2)) - (1+b'^2)^{-alpha/2}, with b''
  /// from a central difference of the dense slope.
  double equation_residual(double r) const;

 private:
  RadialProfile(Alpha alpha, double c4, ode::Trajectory<2> traj)
      : alpha_(alpha), c4_(c4), traj_(std::move(traj)) {}
  ode::State<2> state(double r) const;

  Alpha alpha_;
  double c4_;
  ode::Trajectory<2> traj_;  // t = r, state = (b, b')
};

RadialProfile integrate_bowl(Alpha alpha, double radius, double tol = 1e-12);

}  // namespace soliton
