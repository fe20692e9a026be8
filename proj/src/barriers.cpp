#include "soliton/barriers.hpp"

#include "soliton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace soliton {

ConvexBoundaryFunction ConvexBoundaryFunction::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficients must be finite");
  }
  return {Form::polynomial, std::move(coefficients)};
}

ConvexBoundaryFunction ConvexBoundaryFunction::cosh(double scale) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw std::invalid_argument("cosh scale must be >= 0");
  return {Form::cosh, {scale}};
}

ConvexBoundaryFunction ConvexBoundaryFunction::linear(double slope, double intercept) {
  if (!std::isfinite(slope) || !std::isfinite(intercept)) throw std::invalid_argument("non-finite line");
  return {Form::linear, {slope, intercept}};
}

ConvexBoundaryFunction ConvexBoundaryFunction::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite constant");
  return {Form::constant, {value}};
}

std::string ConvexBoundaryFunction::describe() const {
  std::ostringstream s;
  s.precision(17);
  switch (form_) {
    case Form::polynomial:
      s << "poly(";
      for (std::size_t i = 0; i < params_.size(); ++i) s << (i ? "," : "") << params_[i];
      s << ")";
      break;
    case Form::cosh: s << "cosh(scale=" << params_[0] << ")"; break;
    case Form::linear: s << "linear(slope=" << params_[0] << ",intercept=" << params_[1] << ")"; break;
    case Form::constant: s << "const(" << params_[0] << ")"; break;
  }
  return s.str();
}

double ConvexBoundaryFunction::operator()(double x) const {
  switch (form_) {
    case Form::polynomial: {
      double v = 0.0;
      for (auto it = params_.rbegin(); it != params_.rend(); ++it) v = v * x + *it;
      return v;
    }
    case Form::cosh: return params_[0] * std::cosh(x);
    case Form::linear: return params_[0] * x + params_[1];
    case Form::constant: return params_[0];
  }
  return 0.0;
}

double ConvexBoundaryFunction::derivative(double x) const {
  switch (form_) {
    case Form::polynomial: {
      double v = 0.0;
      for (std::size_t k = params_.size(); k-- > 1;) v = v * x + static_cast<double>(k) * params_[k];
      return v;
    }
    case Form::cosh: return params_[0] * std::sinh(x);
    case Form::linear: return params_[0];
    case Form::constant: return 0.0;
  }
  return 0.0;
}

double ConvexBoundaryFunction::second_derivative(double x) const {
  switch (form_) {
    case Form::polynomial: {
      double v = 0.0;
      for (std::size_t k = params_.size(); k-- > 2;) {
        v = v * x + static_cast<double>(k * (k - 1)) * params_[k];
      }
      return v;
    }
    case Form::cosh: return params_[0] * std::cosh(x);
    case Form::linear:
    case Form::constant: return 0.0;
  }
  return 0.0;
}

ConvexBoundaryFunction::Certificate ConvexBoundaryFunction::certify(double lo, double hi, int samples) const {
  if (!(hi > lo) || samples < 2) throw std::invalid_argument("certify: empty sample interval");
  Certificate c;
  c.min_second_derivative = std::numeric_limits<double>::infinity();
  c.derivative_monotone = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double x = lo + (hi - lo) * k / (samples - 1);
    const double f2 = second_derivative(x);
    if (f2 < c.min_second_derivative) {
      c.min_second_derivative = f2;
      c.worst_x = x;
    }
    const double f1 = derivative(x);
    if (f1 < prev - kConvexityTolerance * (1.0 + std::abs(prev))) c.derivative_monotone = false;
    prev = f1;
  }
  c.convex = c.min_second_derivative >= -kConvexityTolerance && c.derivative_monotone;
  return c;
}

// ---------------------------------------------------------------------------

ConjugateValue convex_conjugate(const ConvexBoundaryFunction& f, double k) {
  using Form = ConvexBoundaryFunction::Form;
  const auto& p = f.parameters();
  ConjugateValue out;
  const double inf = std::numeric_limits<double>::infinity();
  // Affine functions: bounded only at their own slope, where every x maximises.
  const bool affine_poly = f.form() == Form::polynomial &&
                           std::all_of(p.begin() + std::min<std::ptrdiff_t>(2, std::ssize(p)), p.end(),
                                       [](double c) { return c == 0.0; });
  if (affine_poly || f.form() == Form::linear || f.form() == Form::constant ||
      (f.form() == Form::cosh && p[0] == 0.0)) {
    double slope = 0.0;
    if (f.form() == Form::linear) slope = p[0];
    if (affine_poly && p.size() > 1) slope = p[1];
    if (k != slope) return out;
    out.bounded = true;
    out.value = -f(0.0);
    out.argmax_lo = -inf;
    out.argmax_hi = inf;
    return out;
  }

  // f' is nondecreasing: bracket the stationarity equation f'(x) = k.
  constexpr double kReach = 1e12;
  double lo = -1.0, hi = 1.0;
  while (f.derivative(lo) > k) {
    lo *= 2.0;
    if (lo < -kReach) return out;
  }
  while (f.derivative(hi) < k) {
    hi *= 2.0;
    if (hi > kReach) return out;
  }
  // Leftmost x with f'(x) >= k and rightmost x with f'(x) <= k.
  auto bisect = [&](auto pred) {
    double a = lo, b = hi;  // pred(a) false, pred(b) true
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
      const double mid = 0.5 * (a + b);
      (pred(mid) ? b : a) = mid;
    }
    return b;
  };
  const double left = f.derivative(lo) >= k ? lo : bisect([&](double x) { return f.derivative(x) >= k; });
  const double right = f.derivative(hi) <= k ? hi : bisect([&](double x) { return f.derivative(x) > k; });
  out.bounded = true;
  out.argmax_lo = std::min(left, right);
  out.argmax_hi = std::max(left, right);
  const double xs = 0.5 * (out.argmax_lo + out.argmax_hi);
  out.value = k * xs - f(xs);
  return out;
}

LineTrace boundary_trace(const GrimReaper& g, double m) {
  if (!(m > 0.0)) throw std::invalid_argument("strip half-width must be positive");
  if (m >= g.domain_halfwidth()) {
    std::ostringstream msg;
    msg << "strip half-width " << m << " outside grim reaper domain (half-width "
        << g.domain_halfwidth() << ")";
    throw DomainError(msg.str());
  }
  return {std::tan(g.theta()), g(0.0, m)};
}

BarrierCertificate is_admissible(const GrimReaper& g, const ConvexBoundaryFunction& f, double m,
                                 std::pair<double, double> window) {
  const LineTrace line = boundary_trace(g, m);
  BarrierCertificate cert;
  cert.reaper = g;
  cert.alpha = g.alpha();
  cert.m = m;
  const double scale = std::max({1.0, std::abs(f(window.first)), std::abs(f(window.second)),
                                 std::abs(line.intercept)});
  cert.tolerance = 1e-12 * scale;

  const ConjugateValue conj = convex_conjugate(f, line.slope);
  cert.margin = conj.bounded ? -conj.value - line.intercept : -kInfinity;

  constexpr int kSamples = 1000;
  for (int s = 0; s < kSamples; ++s) {
    const double x = window.first + (window.second - window.first) * s / (kSamples - 1);
    cert.sampled_margin = std::min(cert.sampled_margin, f(x) - (line.slope * x + line.intercept));
  }
  cert.admissible = cert.margin >= -cert.tolerance && cert.sampled_margin >= -cert.tolerance;
  if (conj.bounded && std::abs(cert.margin) <= cert.tolerance) {
    if (std::isinf(conj.argmax_lo) ||
        conj.argmax_hi - conj.argmax_lo > 1e-9 * (1.0 + std::abs(conj.argmax_lo))) {
      cert.touch_interval = std::make_pair(conj.argmax_lo, conj.argmax_hi);
    } else {
      cert.touch_x = 0.5 * (conj.argmax_lo + conj.argmax_hi);
    }
  }
  return cert;
}

std::shared_ptr<const PlanarProfile> barrier_profile(Alpha alpha, double m, double tol) {
  const double d = halfwidth(alpha);
  if (!(m > 0.0)) throw std::invalid_argument("strip half-width must be positive");
  if (m >= d) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no grim-reaper barrier for half-width m = " << m << ": requires m < d(" << alpha.value()
        << ") = " << d;
    throw WidthError(msg.str(), d);
  }
  ProfileOptions opt;
  opt.tol = tol;
  opt.y_cover = m;
  auto profile = std::make_shared<const PlanarProfile>(PlanarProfile::integrate(alpha, opt));
  if (profile->y_max() < m) {
    std::ostringstream msg;
    msg << "profile integration stopped at y = " << profile->y_max() << " before covering m = " << m;
    throw WidthError(msg.str(), profile->y_max());
  }
  return profile;
}

GrimReaper touching_barrier(double x0, const ConvexBoundaryFunction& f,
                            const std::shared_ptr<const PlanarProfile>& profile, double m) {
  const double slope = f.derivative(x0);
  const double theta = std::atan(slope);
  const double alpha = profile->alpha().value();
  const double c = std::cos(theta);
  const double d = profile->halfwidth();
  if (std::isfinite(d) && m * std::pow(c, alpha) >= d) {
    const double max_m = d / std::pow(c, alpha);
    std::ostringstream msg;
    msg << "touching barrier at x0 = " << x0 << " unavailable: m = " << m
        << " exceeds the tilted half-width " << max_m;
    throw WidthError(msg.str(), max_m);
  }
  const double profile_term = std::pow(c, -(alpha + 1.0)) * profile->value(std::pow(c, alpha) * m);
  const double a = f(x0) - slope * x0 - profile_term;
  return GrimReaper(profile, theta, a);
}

std::vector<double> chebyshev_abscissae(double L, int count) {
  if (count < 1) throw std::invalid_argument("need at least one abscissa");
  if (count == 1) return {0.0};
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    double x = -L * std::cos(std::numbers::pi * k / (count - 1));
    if (2 * k == count - 1) x = 0.0;
    xs[static_cast<std::size_t>(k)] = x;
  }
  return xs;
}

BarrierEnvelope::BarrierEnvelope(const ConvexBoundaryFunction& f,
                                 const std::shared_ptr<const PlanarProfile>& profile, double m,
                                 const std::vector<double>& abscissae) {
  if (abscissae.empty()) throw std::invalid_argument("envelope needs at least one abscissa");
  members_.reserve(abscissae.size());
  for (double x0 : abscissae) members_.push_back(touching_barrier(x0, f, profile, m));
}

double BarrierEnvelope::operator()(double x, double y) const {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& g : members_) v = std::max(v, g(x, y));
  return v;
}

Eigen::VectorXd BarrierEnvelope::on_grid(const RectGrid& grid) const {
  Eigen::VectorXd out(grid.size());
  // The profile term depends on y only: evaluate it once per (member, row).
  std::vector<double> best(static_cast<std::size_t>(grid.nx));
  for (int j = 0; j < grid.ny; ++j) {
    std::fill(best.begin(), best.end(), -std::numeric_limits<double>::infinity());
    const double y = grid.y(j);
    for (const auto& g : members_) {
      const double row = g(0.0, y);
      const double slope = std::tan(g.theta());
      for (int i = 0; i < grid.nx; ++i) {
        best[static_cast<std::size_t>(i)] = std::max(best[static_cast<std::size_t>(i)], row + slope * grid.x(i));
      }
    }
    for (int i = 0; i < grid.nx; ++i) out[grid.index(i, j)] = best[static_cast<std::size_t>(i)];
  }
  return out;
}

Eigen::VectorXd lower_envelope(const ConvexBoundaryFunction& f, Alpha alpha, double m,
                               const std::vector<double>& abscissae, const RectGrid& grid) {
  return BarrierEnvelope(f, barrier_profile(alpha, m), m, abscissae).on_grid(grid);
}

}  // namespace soliton
