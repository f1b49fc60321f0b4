#include "unf/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace unf {

namespace {

constexpr double kPi = std::numbers::pi;

Field3 as_field3(const UnfParams& p) {
  return [p](const State& s) { return unf_vector_field(p, s); };
}

void require_positive(const UnfParams& p) {
  if (!p.finite() || !p.positive()) {
    throw Error(ErrorKind::InvalidDomain, "lambda, alpha and beta must be positive and finite");
  }
}

double dist_to(const Vec<3>& y, const State& e) {
  const double dx = y[0] - e.x, dy = y[1] - e.y, dz = y[2] - e.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Feeds the lifted angle at four points of a dense step.
template <class Fn>
void for_substeps(const DenseStep<3>& ds, Fn&& fn) {
  for (int i = 1; i <= 4; ++i) fn(i == 4 ? ds.y1 : ds(ds.t0 + (ds.t1 - ds.t0) * i / 4.0));
}

}  // namespace

std::string_view to_string(UnstableFate f) noexcept {
  switch (f) {
    case UnstableFate::Hit: return "Hit";
    case UnstableFate::Escaped: return "Escaped";
    case UnstableFate::ConvergedToFocus: return "ConvergedToFocus";
    case UnstableFate::EventNotFound: return "EventNotFound";
    case UnstableFate::StepSizeUnderflow: return "StepSizeUnderflow";
  }
  return "Unknown";
}

State unstable_seed(const UnfParams& p, double delta) {
  const double e1 = saddle_spectrum(p).e1;
  return {delta, e1 * delta, p.beta * delta * delta / (p.alpha + 2.0 * e1)};
}

UnstableShot try_shoot_unstable(const UnfParams& p, double delta, const IntegratorConfig& cfg) {
  require_positive(p);
  cfg.validate();
  if (!(delta != 0.0 && std::abs(delta) <= 1e-5)) {
    throw Error(ErrorKind::InvalidDomain, "seed offset must satisfy 0 < |delta| <= 1e-5");
  }
  const double sgn = delta > 0.0 ? 1.0 : -1.0;
  const State s0 = unstable_seed(p, delta);
  const auto eq = equilibria(p);
  const State e_same = sgn > 0.0 ? *eq.e_plus : *eq.e_minus;
  const Field3 field = as_field3(p);

  UnstableShot shot;
  AngleTracker angle(s0.x, s0.y);
  bool focus = false;
  auto obs = [&](const DenseStep<3>& ds) {
    const double ya = sgn * ds.y0[1], yb = sgn * ds.y1[1];
    if (ya > 0.0 && yb <= 0.0) {
      SectionCrossing c = refine_crossing(field, ds);
      if (c.state.z > 0.0 && sgn * c.state.x > 0.0) {
        for (int i = 1; i <= 4; ++i) {
          const auto yi = ds(ds.t0 + (c.time - ds.t0) * i / 4.0);
          angle.feed(yi[0], yi[1]);
        }
        UnstableHit h;
        h.x_u = c.state.x;
        h.z_u = c.state.z;
        h.theta = angle.total();
        h.t_flight = c.time;
        shot.hit = h;
        return true;
      }
    }
    for_substeps(ds, [&](const Vec<3>& y) { angle.feed(y[0], y[1]); });
    if (dist_to(ds.y1, e_same) < 1e-6) {
      focus = true;
      return true;
    }
    return false;
  };
  const auto res = dopri5<3>(UnfField{p}, to_vec(s0), 0.0, cfg.t_max, cfg, obs);
  shot.last = to_state(res.y);
  shot.t_last = res.t;
  if (shot.hit) {
    shot.fate = UnstableFate::Hit;
  } else if (focus) {
    shot.fate = UnstableFate::ConvergedToFocus;
  } else if (res.outcome == Outcome::Escaped) {
    shot.fate = UnstableFate::Escaped;
  } else if (res.outcome == Outcome::StepSizeUnderflow) {
    shot.fate = UnstableFate::StepSizeUnderflow;
  } else {
    shot.fate = UnstableFate::EventNotFound;
  }
  return shot;
}

UnstableHit shoot_unstable(const UnfParams& p, double delta, const IntegratorConfig& cfg) {
  auto fail = [](const UnstableShot& s) -> Error {
    const std::string at = " (t=" + std::to_string(s.t_last) + ")";
    switch (s.fate) {
      case UnstableFate::Escaped: return Error(ErrorKind::Escaped, "W^u left the escape radius" + at);
      case UnstableFate::ConvergedToFocus:
        return Error(ErrorKind::ConvergedToFocus, "W^u converged to the focus before reaching S+" + at);
      case UnstableFate::StepSizeUnderflow: return Error(ErrorKind::StepSizeUnderflow, "step size underflow" + at);
      default: return Error(ErrorKind::EventNotFound, "W^u did not reach S+ before t_max" + at);
    }
  };
  const auto a = try_shoot_unstable(p, delta, cfg);
  if (!a.hit) throw fail(a);
  const auto b = try_shoot_unstable(p, 0.5 * delta, cfg);
  if (!b.hit) throw fail(b);
  UnstableHit h = *a.hit;
  h.seed_shift = std::hypot(a.hit->x_u - b.hit->x_u, a.hit->z_u - b.hit->z_u);
  if (h.seed_shift >= 1e-5) {
    throw Error(ErrorKind::NoConvergence, "section hit moved by " + std::to_string(h.seed_shift) +
                                              " when halving the seed offset");
  }
  return h;
}

SaddleReturn follow_to_saddle(const UnfParams& p, const State& s0, const IntegratorConfig& cfg,
                              const ReturnConfig& rc) {
  const double zc = p.focus_height();
  const double tube = rc.tube;
  auto in_box = [&](const Vec<3>& y) { return std::abs(y[0]) < tube && std::abs(y[1]) < tube && y[2] < zc; };
  const auto eq = equilibria(p);
  SaddleReturn out;
  bool inside = in_box(to_vec(s0));
  AngleTracker angle(s0.x, s0.y);
  auto obs = [&](const DenseStep<3>& ds) {
    for_substeps(ds, [&](const Vec<3>& y) {
      const double d = angle.feed(y[0], y[1]);
      if (y[2] > zc) out.theta += d;
    });
    if ((ds.y0[1] > 0.0) != (ds.y1[1] > 0.0) && ds.y1[2] > zc) ++out.high_crossings;
    const bool now = in_box(ds.y1);
    if (inside && !now) {
      const double x = ds.y1[0], y = ds.y1[1];
      if (x * y > 0.0 && std::abs(x) >= tube) {
        out.kind = ReturnKind::Exit;
        out.side = x > 0.0 ? 1 : -1;
        out.time = ds.t1;
        return true;
      }
    }
    inside = now;
    if (eq.e_plus) {
      if (dist_to(ds.y1, *eq.e_plus) < rc.focus_radius) {
        out.kind = ReturnKind::Focus;
        out.side = 1;
        out.time = ds.t1;
        return true;
      }
      if (dist_to(ds.y1, *eq.e_minus) < rc.focus_radius) {
        out.kind = ReturnKind::Focus;
        out.side = -1;
        out.time = ds.t1;
        return true;
      }
    }
    return false;
  };
  const auto res = dopri5<3>(UnfField{p}, to_vec(s0), 0.0, rc.horizon, cfg, obs);
  if (res.outcome == Outcome::Escaped) {
    out.kind = ReturnKind::Escaped;
    out.time = res.t;
  } else if (res.outcome != Outcome::Stopped) {
    out.kind = ReturnKind::Undecided;
    out.time = res.t;
  }
  out.half_turns = static_cast<int>(std::floor(std::abs(out.theta) / kPi));
  return out;
}

int exit_side(const UnfParams& p, double x, double z, const IntegratorConfig& cfg, const ReturnConfig& rc) {
  const auto r = follow_to_saddle(p, {x, 0.0, z}, cfg, rc);
  return r.kind == ReturnKind::Exit ? r.side : 0;
}

std::optional<double> bisect_stable_trace(const UnfParams& p, double z, double xa, int sa, double xb,
                                          const IntegratorConfig& cfg, const ReturnConfig& rc, double tol) {
  for (int it = 0; it < 200 && std::abs(xb - xa) > tol; ++it) {
    const double m = 0.5 * (xa + xb);
    const int sm = exit_side(p, m, z, cfg, rc);
    if (sm == sa) {
      xa = m;
    } else if (sm == -sa) {
      xb = m;
    } else {
      // Neither side: probe the interval for an adjacent sign-changing pair.
      constexpr int kSub = 8;
      double last_a = xa;
      bool found = false;
      for (int i = 1; i < kSub; ++i) {
        const double xi = xa + (xb - xa) * i / kSub;
        const int si = exit_side(p, xi, z, cfg, rc);
        if (si == sa) last_a = xi;
        if (si == -sa) {
          xb = xi;
          xa = last_a;
          found = true;
          break;
        }
      }
      if (!found) {
        if (last_a == xa) return std::nullopt;
        xa = last_a;
      }
    }
  }
  return 0.5 * (xa + xb);
}

namespace {

// Signed first trace at height z on the requested branch; empty on failure.
std::optional<double> first_trace(const UnfParams& p, double z, double x_max, const IntegratorConfig& cfg,
                                  const StableCurveConfig& sc, int branch, int* near_side = nullptr) {
  const double b = branch >= 0 ? 1.0 : -1.0;
  const int sigma = exit_side(p, b * sc.eps, z, cfg, sc.ret);
  if (near_side) *near_side = sigma;
  if (sigma == 0) return std::nullopt;
  double last_same = sc.eps;
  for (int i = 1; i <= sc.probes; ++i) {
    const double t = sc.eps + (x_max - sc.eps) * i / sc.probes;
    const int s = exit_side(p, b * t, z, cfg, sc.ret);
    if (s == sigma) last_same = t;
    if (s == -sigma) {
      const auto x = bisect_stable_trace(p, z, b * last_same, sigma, b * t, cfg, sc.ret, sc.x_tol);
      if (!x) return std::nullopt;
      return sigma * std::abs(*x);
    }
  }
  return std::nullopt;
}

double ladder_z_star(const UnfParams& p) {
  try {
    return riccati_tau(p, 8).z_star;
  } catch (const LadderTruncatedError& e) {
    return e.prefix().z_star;
  }
}

}  // namespace

double stable_x_at(const UnfParams& p, double z_target, const IntegratorConfig& cfg, const StableCurveConfig& sc,
                   int branch) {
  require_positive(p);
  if (!(z_target > 0.0)) throw Error(ErrorKind::OutOfRange, "z_target must be positive");
  const double z_star = ladder_z_star(p);
  if (z_target >= z_star) throw Error(ErrorKind::OutOfRange, "z_target beyond the ladder accumulation z_star");
  const double x_max = 1.25 * aux_separatrix_x0(p.lambda);
  const auto x = first_trace(p, z_target, x_max, cfg, sc, branch);
  if (!x) throw Error(ErrorKind::NoConvergence, "no W^s trace found on the section segment");
  return *x;
}

StableCurve stable_curve(const UnfParams& p, double z_lo, double z_hi, int n, const IntegratorConfig& cfg,
                         const StableCurveConfig& sc) {
  require_positive(p);
  if (!(sc.eps >= 1e-7 && sc.eps <= 1e-3)) throw Error(ErrorKind::InvalidDomain, "eps must lie in [1e-7, 1e-3]");
  if (n < 2 || !(z_lo > 0.0) || !(z_hi > z_lo)) throw Error(ErrorKind::InvalidDomain, "need 0 < z_lo < z_hi, n >= 2");
  StableCurve curve;
  curve.z_star = ladder_z_star(p);
  if (z_lo >= curve.z_star) throw Error(ErrorKind::OutOfRange, "z range beyond z_star");
  if (std::isfinite(curve.z_star)) z_hi = std::min(z_hi, 0.95 * curve.z_star);
  const double x_max = 1.25 * aux_separatrix_x0(p.lambda);

  std::vector<double> zs(n);
  std::vector<int> sides(n);
  for (int i = 0; i < n; ++i) {
    zs[i] = z_lo + (z_hi - z_lo) * i / (n - 1);
    int side = 0;
    const auto x = first_trace(p, zs[i], x_max, cfg, sc, 1, &side);
    sides[i] = side;
    if (x) curve.samples.push_back({zs[i], *x});
  }
  for (int i = 1; i < n; ++i) {
    if (sides[i - 1] == 0 || sides[i] == 0 || sides[i - 1] == sides[i]) continue;
    double a = zs[i - 1], b = zs[i];
    const int sa = sides[i - 1];
    for (int it = 0; it < 200 && b - a > sc.z_tol; ++it) {
      const double m = 0.5 * (a + b);
      const int sm = exit_side(p, sc.eps, m, cfg, sc.ret);
      if (sm == sa) {
        a = m;
      } else {
        b = m;
      }
    }
    curve.zero_ladder.push_back(0.5 * (a + b));
  }
  return curve;
}

RiccatiLadder riccati_tau(const UnfParams& p, int k_max, double z_limit) {
  require_positive(p);
  if (k_max < 1) throw Error(ErrorKind::InvalidDomain, "k_max must be at least 1");
  const double zc = p.focus_height();
  const double al = p.alpha;
  constexpr double z_far = 1e-8;
  const double s_far = std::log(z_far / zc) / al;
  const double s_end = std::log(z_limit / zc) / al;
  const double theta0 = std::atan(std::sqrt(zc - z_far));
  const double base = -std::atan(0.5 * p.lambda);

  IntegratorConfig cfg;
  cfg.rtol = 1e-12;
  cfg.atol = 1e-12;
  cfg.max_step = 0.05;
  cfg.escape_radius = std::numeric_limits<double>::infinity();

  auto f = [zc, al](const Vec<2>& y) {
    const double c = std::cos(y[0]), s = std::sin(y[0]);
    return Vec<2>{-((y[1] - zc) * c * c + s * s), al * y[1]};
  };
  RiccatiLadder out;
  int k = 0;
  auto obs = [&](const DenseStep<2>& ds) {
    if (ds.t0 <= 0.0 && ds.t1 > 0.0) out.eta0 = std::tan(ds(0.0)[0]);
    for (;;) {
      const double target = base - k * kPi;
      if (!(ds.y0[0] > target && ds.y1[0] <= target)) break;
      double a = ds.t0, b = ds.t1;
      for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        if (ds(m)[0] > target) {
          a = m;
        } else {
          b = m;
        }
      }
      const double tau = 0.5 * (a + b);
      out.tau.push_back(tau);
      out.zk.push_back(zc * std::exp(al * tau));
      if (++k >= k_max) return true;
    }
    return false;
  };
  dopri5<2>(f, Vec<2>{theta0, z_far}, s_far, s_end, cfg, obs);

  out.T_inf = std::numeric_limits<double>::infinity();
  const std::size_t n = out.tau.size();
  if (n >= 3) {
    const double d1 = out.tau[n - 2] - out.tau[n - 3];
    const double d2 = out.tau[n - 1] - out.tau[n - 2];
    if (d2 < d1) out.T_inf = out.tau[n - 1] + d2 * d2 / (d1 - d2);
  }
  out.z_star = std::isfinite(out.T_inf) ? zc * std::exp(al * out.T_inf) : std::numeric_limits<double>::infinity();
  if (static_cast<int>(n) < k_max) {
    out.truncated = true;
    throw LadderTruncatedError("found " + std::to_string(n) + " of " + std::to_string(k_max) +
                                   " ladder roots below z=" + std::to_string(z_limit),
                               out);
  }
  return out;
}

double ladder_frequency(const UnfParams& p, double tau) {
  return std::sqrt(p.focus_height() * std::expm1(p.alpha * tau));
}

std::vector<DomainB> domains_b(const UnfParams& p, int k_max) {
  const auto ladder = riccati_tau(p, k_max);
  std::vector<DomainB> out;
  out.push_back({0, 0.0, ladder.zk[0], 0, true});
  for (int k = 1; k < k_max; ++k) out.push_back({k, ladder.zk[k - 1], ladder.zk[k], k, false});
  return out;
}

double aux_separatrix_x0(double lambda, const IntegratorConfig& cfg_in) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidDomain, "lambda must be >= 0");
  IntegratorConfig cfg = cfg_in;
  cfg.rtol = std::min(cfg.rtol, 1e-12);
  cfg.atol = std::min(cfg.atol, 1e-14);
  cfg.escape_radius = 1e3;
  const double mu = -0.5 * lambda - std::sqrt(0.25 * lambda * lambda + 1.0);
  constexpr double d = 1e-7;
  auto f = [lambda](const Vec<2>& y) { return Vec<2>{y[1], -(y[0] * y[0] - 1.0) * y[0] - lambda * y[1]}; };
  std::optional<double> x0;
  auto obs = [&](const DenseStep<2>& ds) {
    if (ds.y0[1] < 0.0 && ds.y1[1] >= 0.0) {
      double a = ds.t0, b = ds.t1;
      for (int it = 0; it < 200 && std::abs(b - a) > 1e-15; ++it) {
        const double m = 0.5 * (a + b);
        if (ds(m)[1] < 0.0) {
          a = m;
        } else {
          b = m;
        }
      }
      Vec<2> y = ds(0.5 * (a + b));
      // Newton along the flow onto y = 0.
      for (int it = 0; it < 3; ++it) {
        const Vec<2> fy = f(y);
        const double dt = -y[1] / fy[1];
        y = {y[0] + dt * fy[0], y[1] + dt * fy[1]};
      }
      if (y[0] > 0.0) {
        x0 = y[0];
        return true;
      }
    }
    return false;
  };
  dopri5<2>(f, Vec<2>{d, mu * d}, 0.0, -200.0, cfg, obs);
  if (!x0) throw Error(ErrorKind::NoConvergence, "stable separatrix did not reach the positive x-axis");
  return *x0;
}

std::pair<double, double> absorbing_layer(double lambda, double c1, double c2) {
  if (!(c2 > 0.0) || !(c1 > c2 * c2)) throw Error(ErrorKind::InvalidDomain, "requires c1 > c2^2 > 0");
  const double B = 4.0 * c2 * (lambda - c2);
  const double C = c1 + 1.0 - lambda * c2;
  const double rad = B * C + 0.25 * B * B;
  if (rad < 0.0) throw Error(ErrorKind::InvalidDomain, "negative radicand B C + B^2/4");
  const double r = std::sqrt(rad);
  return {C + 0.5 * B - r, C + 0.5 * B + r};
}

bool layer_form_definite(double lambda, double c1, double c2, double z) {
  const double C = c1 + 1.0 - lambda * c2;
  const double a11 = c2 * (z - 1.0);
  const double a22 = lambda - c2;
  const double a12 = -0.5 * (C - z);
  return a11 > 0.0 && a22 > 0.0 && a11 * a22 - a12 * a12 > 0.0;
}

double small_alpha_m_inf(double lambda, double Omega, double phi) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidDomain, "lambda must be positive");
  return 0.5 / lambda -
         0.5 * (lambda * std::cos(2.0 * phi) - 2.0 * Omega * std::sin(2.0 * phi)) / (lambda * lambda + 4.0 * Omega * Omega);
}

double small_alpha_zu(double beta, double z0, double rho, double phi, double lambda, double Omega) {
  if (!(Omega * Omega > 0.0) || !std::isfinite(Omega)) throw Error(ErrorKind::InvalidDomain, "Omega^2 must be positive");
  return z0 + beta * rho * rho * small_alpha_m_inf(lambda, Omega, phi);
}

}  // namespace unf
