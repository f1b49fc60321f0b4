#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "unf/ode_config.hpp"

namespace unf {

template <std::size_t N>
using Vec = std::array<double, N>;

/// Continuous extension of one accepted Dormand-Prince step.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double t1 = 0.0;
  Vec<N> y0{};
  Vec<N> y1{};
  std::array<Vec<N>, 5> rc{};

  Vec<N> operator()(double t) const {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = rc[0][i] + s * (rc[1][i] + s1 * (rc[2][i] + s * (rc[3][i] + s1 * rc[4][i])));
    }
    return out;
  }
};

template <std::size_t N>
struct RunResult {
  Outcome outcome = Outcome::Completed;
  double t = 0.0;
  Vec<N> y{};
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

template <std::size_t N>
double escape_norm(const Vec<N>& y) {
  constexpr std::size_t m = N < 3 ? N : 3;
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += y[i] * y[i];
  return std::sqrt(s);
}

template <std::size_t N>
void axpy(Vec<N>& out, const Vec<N>& y, double h, std::initializer_list<std::pair<double, const Vec<N>*>> terms) {
  for (std::size_t i = 0; i < N; ++i) {
    double acc = 0.0;
    for (const auto& [c, k] : terms) acc += c * (*k)[i];
    out[i] = y[i] + h * acc;
  }
}

}  // namespace detail

/// Adaptive Dormand-Prince 5(4) with dense output on an autonomous field
/// f(y) -> y'. Integrates from t0 towards t1 (t1 < t0 runs in reverse time).
/// The observer is called with every accepted DenseStep and returns true to stop.
template <std::size_t N, class F, class Observer>
RunResult<N> dopri5(F&& f, Vec<N> y, double t0, double t1, const IntegratorConfig& cfg, Observer&& observer) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
  (void)c2; (void)c3; (void)c4; (void)c5;

  RunResult<N> res;
  res.t = t0;
  res.y = y;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  if (span == 0.0) return res;

  const double hmax = std::min(cfg.max_step, span);
  double h = cfg.initial_step > 0.0 ? std::min(cfg.initial_step, hmax) : std::min(1e-3, hmax);
  double t = t0;
  Vec<N> k1 = f(y), k2, k3, k4, k5, k6, k7, tmp, ynew;
  bool last_rejected = false;

  while (dir * (t1 - t) > 0.0) {
    if (res.accepted + res.rejected >= cfg.max_steps) {
      res.outcome = Outcome::StepSizeUnderflow;
      break;
    }
    const double remaining = std::abs(t1 - t);
    const bool final_step = h >= remaining;
    const double hs = dir * (final_step ? remaining : h);
    if (std::abs(hs) < 1e-14 * std::max(1.0, std::abs(t)) && !final_step) {
      res.outcome = Outcome::StepSizeUnderflow;
      break;
    }

    detail::axpy<N>(tmp, y, hs, {{a21, &k1}});
    k2 = f(tmp);
    detail::axpy<N>(tmp, y, hs, {{a31, &k1}, {a32, &k2}});
    k3 = f(tmp);
    detail::axpy<N>(tmp, y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    k4 = f(tmp);
    detail::axpy<N>(tmp, y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    k5 = f(tmp);
    detail::axpy<N>(tmp, y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    k6 = f(tmp);
    detail::axpy<N>(ynew, y, hs, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    k7 = f(ynew);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sk = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sk) * (ei / sk);
      finite = finite && std::isfinite(ynew[i]);
    }
    err = std::sqrt(err / static_cast<double>(N));
    if (!finite) err = 1e10;

    if (err <= 1.0) {
      DenseStep<N> ds;
      ds.t0 = t;
      ds.t1 = final_step ? t1 : t + hs;
      ds.y0 = y;
      ds.y1 = ynew;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = hs * k1[i] - ydiff;
        ds.rc[0][i] = y[i];
        ds.rc[1][i] = ydiff;
        ds.rc[2][i] = bspl;
        ds.rc[3][i] = ydiff - hs * k7[i] - bspl;
        ds.rc[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      t = ds.t1;
      y = ynew;
      k1 = k7;
      ++res.accepted;
      res.t = t;
      res.y = y;
      if (observer(ds)) {
        res.outcome = Outcome::Stopped;
        return res;
      }
      if (detail::escape_norm(y) > cfg.escape_radius) {
        res.outcome = Outcome::Escaped;
        return res;
      }
      double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h = std::min(std::abs(hs) * fac, hmax);
      last_rejected = false;
    } else {
      ++res.rejected;
      h = std::abs(hs) * std::max(0.2, 0.9 * std::pow(err, -0.2));
      last_rejected = true;
    }
  }
  return res;
}

template <std::size_t N, class F>
RunResult<N> dopri5(F&& f, Vec<N> y, double t0, double t1, const IntegratorConfig& cfg) {
  return dopri5<N>(std::forward<F>(f), y, t0, t1, cfg, [](const DenseStep<N>&) { return false; });
}

}  // namespace unf
