#pragma once

// Independent reference values used by the tests. Nothing here calls into
// the library.

#include <array>
#include <cmath>
#include <cstdint>

namespace oracle {

constexpr double kPi = 3.14159265358979323846;

/// d(alpha) = (sqrt(pi)/2) Gamma(1 - alpha/2) / Gamma(3/2 - alpha/2), alpha < 2.
inline double halfwidth_gamma(double alpha) {
  return 0.5 * std::sqrt(kPi) * std::tgamma(1.0 - 0.5 * alpha) / std::tgamma(1.5 - 0.5 * alpha);
}

/// Midpoint sum of (cos t)^{1-alpha} on [0, pi/2].
inline double halfwidth_riemann(double alpha, int n = 1000000) {
  const double h = 0.5 * kPi / n;
  double s = 0;
  for (int k = 0; k < n; ++k) s += std::pow(std::cos((k + 0.5) * h), 1.0 - alpha);
  return s * h;
}

/// Untilted profile in closed form for alpha in {0, 1, 2, 3}.
inline double profile(double alpha, double y) {
  if (alpha == 0) return 1.0 - std::sqrt(1.0 - y * y);
  if (alpha == 1) return -std::log(std::cos(y));
  if (alpha == 2) return std::cosh(y) - 1.0;
  return 0.5 * y * y;
}

/// Tilted grim reaper for alpha = 1 from the closed-form profile.
inline double reaper1(double theta, double a, double x, double y) {
  const double c = std::cos(theta);
  return -std::log(std::cos(c * y)) / (c * c) + std::tan(theta) * x + a;
}

/// Bowl b(R) by classical RK4 with a fixed step, seeded at r0 with the
/// two-term series r^2/4 + (2 - alpha)/128 r^4.
inline double bowl_rk4(double alpha, double R, double step = 1e-5, double r0 = 1e-3) {
  const double c4 = (2.0 - alpha) / 128.0;
  std::array<double, 2> y{r0 * r0 / 4 + c4 * std::pow(r0, 4), r0 / 2 + 4 * c4 * r0 * r0 * r0};
  auto f = [alpha](double r, const std::array<double, 2>& s) {
    const double w2 = 1.0 + s[1] * s[1];
    return std::array<double, 2>{s[1], std::pow(w2, 0.5 * (3.0 - alpha)) - s[1] * w2 / r};
  };
  double r = r0;
  const long n = std::lround((R - r0) / step);
  const double h = (R - r0) / n;
  for (long k = 0; k < n; ++k) {
    const auto k1 = f(r, y);
    const auto k2 = f(r + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
    const auto k3 = f(r + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
    const auto k4 = f(r + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    for (int i = 0; i < 2; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    r += h;
  }
  return y[0];
}

/// Uniform draw in [lo, hi) from a 64-bit generator, independent of the
/// standard library's distribution implementations.
template <typename Rng>
double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace oracle
