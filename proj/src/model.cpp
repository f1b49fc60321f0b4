#include "unf/model.hpp"

#include <algorithm>

#include "unf/error.hpp"

namespace unf {

std::string_view to_string(Zone zone) noexcept {
  switch (zone) {
    case Zone::LorenzLike: return "LorenzLike";
    case Zone::ChenLike: return "ChenLike";
    case Zone::TiganBoundary: return "TiganBoundary";
  }
  return "Unknown";
}

Mat3 unf_jacobian(const UnfParams& p, const State& s) {
  return {{{0.0, 1.0, 0.0},
           {-(3.0 * s.x * s.x + s.z - 1.0), -p.lambda, -s.x},
           {2.0 * p.beta * s.x, 0.0, -p.alpha}}};
}

Mat3 gl_jacobian(const GlParams& g, const State& s) {
  return {{{-g.a, g.a, 0.0}, {g.r - s.z, -g.q, -s.x}, {s.y, s.x, -g.b}}};
}

Equilibria equilibria(const UnfParams& p) {
  Equilibria eq;
  const double sum = p.alpha + p.beta;
  if (sum == 0.0) return eq;
  const double x = std::sqrt(p.alpha / sum);
  const double z = p.beta / sum;
  eq.e_plus = State{x, 0.0, z};
  eq.e_minus = State{-x, 0.0, z};
  return eq;
}

State focus_plus(const UnfParams& p) {
  auto eq = equilibria(p);
  if (!eq.e_plus) throw Error(ErrorKind::DegenerateParameters, "alpha + beta == 0, E+ does not exist");
  return *eq.e_plus;
}

SaddleSpectrum saddle_spectrum(const UnfParams& p) {
  SaddleSpectrum sp;
  const double root = std::sqrt(0.25 * p.lambda * p.lambda + 1.0);
  // e1 from the product e1 e2 = -1 avoids cancellation at large lambda.
  sp.e2 = -0.5 * p.lambda - root;
  sp.e1 = -1.0 / sp.e2;
  sp.e3 = -p.alpha;
  if (p.alpha != 0.0) sp.sigma = (1.0 - p.alpha * p.alpha) / p.alpha - p.lambda;
  return sp;
}

double hopf_threshold(double alpha, double beta) {
  const double sum = alpha + beta;
  if (sum == 0.0) throw Error(ErrorKind::DegenerateParameters, "alpha + beta == 0");
  const double m = 2.0 + alpha * beta + alpha * alpha;
  return (std::sqrt(m * m + 8.0 * beta * sum) - m) / (2.0 * sum);
}

namespace {

double checked_omega(const GlParams& g) {
  const double w2inv = g.a * (g.r - g.q);
  if (!(w2inv > 0.0) || !std::isfinite(w2inv)) {
    throw Error(ErrorKind::InvalidDomain, "a (r - q) must be positive");
  }
  return 1.0 / std::sqrt(w2inv);
}

}  // namespace

TimedState map_v(const GlParams& g, const State& s, double t) {
  const double w = checked_omega(g);
  const double w2 = w * w;
  return {{w * s.x / std::sqrt(2.0), w2 * g.a * (s.y - s.x) / std::sqrt(2.0), w2 * (g.a * s.z - 0.5 * s.x * s.x)},
          t / w};
}

TimedState map_v_inverse(const GlParams& g, const State& s, double t) {
  const double w = checked_omega(g);
  const double r2 = std::sqrt(2.0);
  return {{r2 * s.x / w, r2 * (s.x + s.y / (g.a * w)) / w, (s.z + s.x * s.x) / (g.a * w * w)}, w * t};
}

Mat3 map_v_jacobian(const GlParams& g, const State& s) {
  const double w = checked_omega(g);
  const double w2 = w * w;
  const double r2 = std::sqrt(2.0);
  return {{{w / r2, 0.0, 0.0}, {-w2 * g.a / r2, w2 * g.a / r2, 0.0}, {-w2 * s.x, 0.0, w2 * g.a}}};
}

UnfParams map_p(const GlParams& g) {
  if (!(g.a > 0.0) || !(g.b > 0.0)) throw Error(ErrorKind::InvalidDomain, "a and b must be positive");
  if (!(g.r > g.q)) throw Error(ErrorKind::InvalidDomain, "requires r > q");
  if (!(g.q > -g.a)) throw Error(ErrorKind::InvalidDomain, "requires q > -a");
  if (g.b >= 2.0 * g.a) throw Error(ErrorKind::NonPositiveBeta, "b >= 2a gives beta <= 0");
  const double w = checked_omega(g);
  return {(g.q + g.a) * w, g.b * w, (2.0 * g.a - g.b) * w};
}

RegionLabel classify_region(const UnfParams& p, double tol) {
  const double A = p.A();
  const double scaled = tol * std::max(1.0, std::abs(A));
  RegionLabel label;
  if (p.lambda > A + scaled) {
    label.zone = Zone::LorenzLike;
  } else if (p.lambda < A - scaled) {
    label.zone = Zone::ChenLike;
  } else {
    label.zone = Zone::TiganBoundary;
  }
  if (A > 1.0) {
    label.on_chen_curve = std::abs(p.lambda - (A * A - 1.0) / (2.0 * A)) <= scaled;
    label.on_lu_curve = std::abs(p.lambda - (A * A - 1.0) / A) <= scaled;
  }
  return label;
}

ShimizuMorioka shimizu_rescale(const UnfParams& p) {
  if (!(p.beta > 0.0)) throw Error(ErrorKind::DegenerateParameters, "beta must be positive");
  if (!(p.alpha > 0.0)) throw Error(ErrorKind::DegenerateParameters, "alpha must be positive");
  return {p.alpha / p.beta, std::sqrt(p.beta / p.alpha), p.lambda, p.alpha};
}

}  // namespace unf
