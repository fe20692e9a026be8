#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace soliton::ode {

template <int N>
using State = Eigen::Matrix<double, N, 1>;

/// Single Dormand-Prince 5(4) step from (t, y) with size h.
/// Returns the fifth-order solution; `err` receives the difference to the
/// embedded fourth-order solution.
template <int N, typename Rhs>
State<N> dopri_step(const Rhs& f, double t, const State<N>& y, double h, State<N>& err) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const State<N> k1 = f(t, y);
  const State<N> k2 = f(t + c2 * h, State<N>(y + h * a21 * k1));
  const State<N> k3 = f(t + c3 * h, State<N>(y + h * (a31 * k1 + a32 * k2)));
  const State<N> k4 = f(t + c4 * h, State<N>(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
  const State<N> k5 =
      f(t + c5 * h, State<N>(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
  const State<N> k6 =
      f(t + h, State<N>(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
  const State<N> y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const State<N> k7 = f(t + h, y5);
  err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return y5;
}

struct AdaptiveOptions {
  double tol = 1e-12;           // mixed abs/rel per-step error target
  double h_init = 1e-3;
  double h_min_rel = 1e-14;     // underflow threshold relative to |t|+1
  std::size_t max_steps = 200000;
};

/// Accepted nodes of an adaptive integration.
template <int N>
struct Trajectory {
  std::vector<double> t;
  std::vector<State<N>> y;
  bool truncated = false;  // step size underflowed before the end was reached
};

/// Integrates y' = f(t, y) from t0 towards t_end, stopping early after the
/// first accepted step for which `stop(t, y)` holds.
template <int N, typename Rhs, typename Stop>
Trajectory<N> integrate(const Rhs& f, double t0, const State<N>& y0, double t_end,
                        const AdaptiveOptions& opt, const Stop& stop) {
  if (!(t_end > t0)) throw std::invalid_argument("integrate: t_end must exceed t0");
  Trajectory<N> out;
  out.t.push_back(t0);
  out.y.push_back(y0);
  double t = t0;
  State<N> y = y0;
  double h = std::min(opt.h_init, t_end - t0);
  State<N> err;
  for (std::size_t n = 0; n < opt.max_steps; ++n) {
    if (t >= t_end || stop(t, y)) return out;
    h = std::min(h, t_end - t);
    if (h < opt.h_min_rel * (std::abs(t) + 1.0)) {
      out.truncated = true;
      return out;
    }
    const State<N> next = dopri_step<N>(f, t, y, h, err);
    const State<N> scale = (y.cwiseAbs().cwiseMax(next.cwiseAbs())).array() + 1.0;
    double e = (err.cwiseQuotient(scale)).cwiseAbs().maxCoeff() / opt.tol;
    if (!std::isfinite(e)) e = 1e10;
    if (e <= 1.0) {
      t = (t_end - t - h <= 1e-15 * (std::abs(t_end) + 1.0)) ? t_end : t + h;
      y = next;
      out.t.push_back(t);
      out.y.push_back(y);
    }
    const double fac = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
    h *= fac;
  }
  out.truncated = true;
  return out;
}

template <int N, typename Rhs>
Trajectory<N> integrate(const Rhs& f, double t0, const State<N>& y0, double t_end,
                        const AdaptiveOptions& opt) {
  return integrate<N>(f, t0, y0, t_end, opt, [](double, const State<N>&) { return false; });
}

/// Dense evaluation: one fresh step from the last accepted node at or before t.
/// The step is no longer than the accepted one, so its local error stays
/// within the integration tolerance.
template <int N, typename Rhs>
State<N> evaluate(const Trajectory<N>& traj, const Rhs& f, double t) {
  const auto& ts = traj.t;
  if (t < ts.front() || t > ts.back()) throw std::out_of_range("evaluate: t outside trajectory");
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t k = static_cast<std::size_t>(std::distance(ts.begin(), it)) - 1;
  const double h = t - ts[k];
  if (h == 0.0) return traj.y[k];
  State<N> err;
  return dopri_step<N>(f, ts[k], traj.y[k], h, err);
}

}  // namespace soliton::ode
