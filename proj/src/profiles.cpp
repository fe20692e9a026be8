#include "soliton/profiles.hpp"

#include "soliton/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace soliton {

Alpha::Alpha(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("alpha must be a finite positive number, got " +
                                std::to_string(value));
  }
}

Alpha Alpha::oracle(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("oracle alpha must be finite and >= 0");
  }
  return Alpha(value, true);
}

namespace {

// Gauss-Legendre rule on [-1, 1] via Golub-Welsch.
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

const GaussRule& gauss_legendre_16() {
  static const GaussRule rule = [] {
    constexpr int n = 16;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
      const double beta = k / std::sqrt(4.0 * k * k - 1.0);
      jacobi(k, k - 1) = beta;
      jacobi(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    GaussRule r;
    r.nodes = es.eigenvalues();
    r.weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
    return r;
  }();
  return rule;
}

template <typename F>
double gauss_panel(const F& f, double a, double b) {
  const auto& rule = gauss_legendre_16();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

template <typename F>
double adaptive_gauss(const F& f, double a, double b, double tol, int depth = 0) {
  const double whole = gauss_panel(f, a, b);
  const double mid = 0.5 * (a + b);
  const double left = gauss_panel(f, a, mid);
  const double right = gauss_panel(f, mid, b);
  if (std::abs(left + right - whole) <= tol || depth > 40) return left + right;
  return adaptive_gauss(f, a, mid, 0.5 * tol, depth + 1) +
         adaptive_gauss(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace

double halfwidth(Alpha alpha, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("halfwidth: tol must be positive");
  const double p = 1.0 - alpha.value();
  // Integrand near phi = pi/2 behaves like (pi/2 - phi)^p: divergent iff p <= -1.
  if (p <= -1.0) return kInfinity;

  // t = pi/2 - phi, integrand sin(t)^p; geometric panels toward t = 0.
  auto integrand = [p](double t) { return std::pow(std::sin(t), p); };
  constexpr int kPanels = 60;
  double total = 0.0;
  double hi = kHalfPi;
  for (int k = 0; k < kPanels; ++k) {
    const double lo = 0.5 * hi;
    total += adaptive_gauss(integrand, lo, hi, tol / kPanels);
    hi = lo;
  }
  // Tail [0, hi]: sin(t)^p = t^p (1 - p t^2/6 + O(t^4)).
  total += std::pow(hi, p + 1.0) / (p + 1.0) - p * std::pow(hi, p + 3.0) / (6.0 * (p + 3.0));
  return total;
}

double reaper_domain_halfwidth(Alpha alpha, double theta) {
  if (!(std::abs(theta) < kHalfPi)) throw std::invalid_argument("theta must lie in (-pi/2, pi/2)");
  const double d = halfwidth(alpha);
  if (std::isinf(d)) return kInfinity;
  return d / std::pow(std::cos(theta), alpha.value());
}

// ---------------------------------------------------------------------------
// Planar profile

namespace {

struct PlanarRhs {
  double alpha;
  ode::State<3> operator()(double phi, const ode::State<3>&) const {
    const double c = std::cos(phi);
    const double c_neg_alpha = std::pow(c, -alpha);
    return ode::State<3>(c_neg_alpha, c * c_neg_alpha, std::sin(phi) * c_neg_alpha);
  }
};

}  // namespace

PlanarProfile PlanarProfile::integrate(Alpha alpha, const ProfileOptions& opt) {
  if (!(opt.phi_stop > 0.0 && opt.phi_stop < kHalfPi)) {
    throw std::invalid_argument("phi_stop must lie in (0, pi/2)");
  }
  if (!(opt.tol > 0.0)) throw std::invalid_argument("profile tolerance must be positive");

  const PlanarRhs rhs{alpha.value()};
  ode::AdaptiveOptions ao;
  ao.tol = opt.tol;
  ao.h_init = 1e-3;
  auto traj = ode::integrate<3>(rhs, 0.0, ode::State<3>::Zero(), opt.phi_stop, ao);

  if (!traj.truncated && traj.y.back()[1] < opt.y_cover) {
    const double phi_end = kHalfPi * (1.0 - 1e-12);
    const double y_cover = opt.y_cover;
    auto tail = ode::integrate<3>(rhs, traj.t.back(), traj.y.back(), phi_end, ao,
                                  [y_cover](double, const ode::State<3>& s) {
                                    return s[1] >= y_cover;
                                  });
    traj.t.insert(traj.t.end(), tail.t.begin() + 1, tail.t.end());
    traj.y.insert(traj.y.end(), tail.y.begin() + 1, tail.y.end());
    traj.truncated = tail.truncated || tail.y.back()[1] < y_cover;
  }
  return PlanarProfile(alpha, opt.tol, soliton::halfwidth(alpha), std::move(traj));
}

PlanarProfile integrate_profile(Alpha alpha, double phi_stop, double tol) {
  ProfileOptions opt;
  opt.phi_stop = phi_stop;
  opt.tol = tol;
  return PlanarProfile::integrate(alpha, opt);
}

double PlanarProfile::y_max() const { return traj_.y.back()[1]; }
double PlanarProfile::phi_end() const { return traj_.t.back(); }

std::vector<ProfilePoint> PlanarProfile::points() const {
  std::vector<ProfilePoint> pts;
  pts.reserve(traj_.t.size());
  for (std::size_t k = 0; k < traj_.t.size(); ++k) {
    pts.push_back({traj_.y[k][0], traj_.y[k][1], traj_.y[k][2], traj_.t[k]});
  }
  return pts;
}

double PlanarProfile::angle_at(double y) const {
  // y(phi) is strictly increasing; locate the bracketing accepted nodes.
  const auto& ys = traj_.y;
  std::size_t lo = 0, hi = ys.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (ys[mid][1] <= y ? lo : hi) = mid;
  }
  const double phi_lo = traj_.t[lo], phi_hi = traj_.t[hi];
  const double y_lo = ys[lo][1], y_hi = ys[hi][1];
  if (y == y_lo) return phi_lo;
  if (y == y_hi) return phi_hi;

  const PlanarRhs rhs{alpha_.value()};
  const double a = alpha_.value();
  double left = phi_lo, right = phi_hi;
  double phi = phi_lo + (y - y_lo) / (y_hi - y_lo) * (phi_hi - phi_lo);
  for (int it = 0; it < 60; ++it) {
    const double resid = ode::evaluate<3>(traj_, rhs, phi)[1] - y;
    if (resid > 0) right = phi; else left = phi;
    if (std::abs(resid) <= 4e-16 * (1.0 + std::abs(y))) break;
    double next = phi - resid / std::pow(std::cos(phi), 1.0 - a);
    if (!(next > left && next < right)) next = 0.5 * (left + right);
    if (next == phi) break;
    phi = next;
  }
  return phi;
}

ProfileJet PlanarProfile::jet(double y) const {
  const double ay = std::abs(y);
  if (ay > y_max()) {
    std::ostringstream msg;
    msg << "profile evaluated at |y| = " << ay << " beyond covered range " << y_max();
    if (std::isfinite(d_)) msg << " (half-width d = " << d_ << ")";
    throw DomainError(msg.str());
  }
  const double phi = angle_at(ay);
  const PlanarRhs rhs{alpha_.value()};
  const double z = ode::evaluate<3>(traj_, rhs, phi)[2];
  const double c = std::cos(phi);
  const double sign = y < 0 ? -1.0 : 1.0;
  // dz/dy = tan phi, d2z/dy2 = (dphi/dy) / cos^2 phi = cos^{alpha-3} phi.
  return {z, sign * std::tan(phi), std::pow(c, alpha_.value() - 3.0), sign * phi};
}

// ---------------------------------------------------------------------------
// Grim reapers

double soliton_operator(const Jet2& j, double alpha) {
  const double g2 = 1.0 + j.ux * j.ux + j.uy * j.uy;
  const double num = g2 * (j.uxx + j.uyy) -
                     (j.ux * j.ux * j.uxx + 2.0 * j.ux * j.uy * j.uxy + j.uy * j.uy * j.uyy);
  return num / std::pow(g2, 1.5) - std::pow(g2, -0.5 * alpha);
}

GrimReaper::GrimReaper(std::shared_ptr<const PlanarProfile> base, double theta, double a)
    : base_(std::move(base)), theta_(theta), a_(a), cos_(std::cos(theta)) {
  if (!base_) throw std::invalid_argument("grim reaper needs a base profile");
  if (!(std::abs(theta) < kHalfPi)) throw std::invalid_argument("theta must lie in (-pi/2, pi/2)");
}

double GrimReaper::domain_halfwidth() const {
  const double d = base_->halfwidth();
  return std::isinf(d) ? kInfinity : d / std::pow(cos_, alpha());
}

double GrimReaper::profile_argument(double y) const {
  const double hw = domain_halfwidth();
  if (std::abs(y) >= hw) {
    std::ostringstream msg;
    msg << "grim reaper evaluated at |y| = " << std::abs(y)
        << " outside its domain strip of half-width " << hw;
    throw DomainError(msg.str());
  }
  return std::pow(cos_, alpha()) * y;
}

double GrimReaper::operator()(double x, double y) const {
  const double eta = profile_argument(y);
  return std::pow(cos_, -(alpha() + 1.0)) * base_->value(eta) + std::tan(theta_) * x + a_;
}

Jet2 GrimReaper::jet(double x, double y) const {
  const double eta = profile_argument(y);
  const double al = alpha();
  const ProfileJet w = base_->jet(eta);
  Jet2 j;
  j.u = std::pow(cos_, -(al + 1.0)) * w.z + std::tan(theta_) * x + a_;
  j.ux = std::tan(theta_);
  j.uy = w.dz / cos_;
  j.uyy = std::pow(cos_, al - 1.0) * w.d2z;
  return j;
}

double reaper_eval(const GrimReaper& g, double x, double y) { return g(x, y); }

// ---------------------------------------------------------------------------
// Bowl

namespace {

struct RadialRhs {
  double alpha;
  ode::State<2> operator()(double r, const ode::State<2>& s) const {
    const double p = s[1];
    const double w2 = 1.0 + p * p;
    return ode::State<2>(p, std::pow(w2, 0.5 * (3.0 - alpha)) - p * w2 / r);
  }
};

double radial_residual(double r, double bp, double bpp, double alpha) {
  const double w2 = 1.0 + bp * bp;
  return bpp / std::pow(w2, 1.5) + bp / (r * std::sqrt(w2)) - std::pow(w2, -0.5 * alpha);
}

// Series b = r^2/4 + c4 r^4 near the axis.
double series_residual(double r, double c4, double alpha) {
  return radial_residual(r, 0.5 * r + 4.0 * c4 * r * r * r, 0.5 + 12.0 * c4 * r * r, alpha);
}

}  // namespace

RadialProfile RadialProfile::integrate(Alpha alpha, double radius, double tol) {
  if (!(radius > 0.0)) throw std::invalid_argument("bowl radius must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("bowl tolerance must be positive");
  const double a = alpha.value();
  const double r0 = kSeedRadius;

  // One Newton correction of c4 from 0 on the residual at r0.
  const double rho0 = series_residual(r0, 0.0, a);
  const double dc = 1e-2;
  const double drho = (series_residual(r0, dc, a) - series_residual(r0, -dc, a)) / (2.0 * dc);
  const double c4 = -rho0 / drho;

  const ode::State<2> seed(0.25 * r0 * r0 + c4 * std::pow(r0, 4),
                           0.5 * r0 + 4.0 * c4 * std::pow(r0, 3));
  ode::AdaptiveOptions ao;
  ao.tol = tol;
  ao.h_init = 1e-4;
  ode::Trajectory<2> traj;
  if (radius <= r0) {
    traj.t = {0.0, radius};
    traj.y = {ode::State<2>::Zero(),
              ode::State<2>(0.25 * radius * radius + c4 * std::pow(radius, 4),
                            0.5 * radius + 4.0 * c4 * std::pow(radius, 3))};
  } else {
    traj = ode::integrate<2>(RadialRhs{a}, r0, seed, radius, ao);
    if (traj.truncated) throw SolverFailure("bowl integration underflowed", {});
  }
  return RadialProfile(alpha, c4, std::move(traj));
}

RadialProfile integrate_bowl(Alpha alpha, double radius, double tol) {
  return RadialProfile::integrate(alpha, radius, tol);
}

ode::State<2> RadialProfile::state(double r) const {
  if (r < 0.0 || r > radius() * (1.0 + 1e-14)) {
    std::ostringstream msg;
    msg << "bowl evaluated at r = " << r << " outside [0, " << radius() << "]";
    throw DomainError(msg.str());
  }
  r = std::min(r, radius());
  if (r <= kSeedRadius) {
    return ode::State<2>(0.25 * r * r + c4_ * std::pow(r, 4), 0.5 * r + 4.0 * c4_ * std::pow(r, 3));
  }
  return ode::evaluate<2>(traj_, RadialRhs{alpha_.value()}, r);
}

double RadialProfile::value(double r) const { return state(r)[0]; }
double RadialProfile::slope(double r) const { return state(r)[1]; }

std::vector<RadialSample> RadialProfile::samples() const {
  std::vector<RadialSample> out;
  out.push_back({0.0, 0.0, 0.0});
  for (std::size_t k = 0; k < traj_.t.size(); ++k) {
    if (traj_.t[k] == 0.0) continue;
    out.push_back({traj_.t[k], traj_.y[k][0], traj_.y[k][1]});
  }
  return out;
}

double RadialProfile::equation_residual(double r) const {
  const double h = std::min({1e-4, 0.5 * r, 0.5 * (radius() - r)});
  if (!(h > 0.0)) throw DomainError("bowl residual needs r strictly inside (0, R)");
  const double bpp = (slope(r + h) - slope(r - h)) / (2.0 * h);
  return radial_residual(r, slope(r), bpp, alpha_.value());
}

}  // namespace soliton
