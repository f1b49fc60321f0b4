#include "unf/homoclinic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace unf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double dist_to(const Vec<3>& y, const State& e) {
  const double dx = y[0] - e.x, dy = y[1] - e.y, dz = y[2] - e.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

FateLabel label_of(const UnstableShot& shot) {
  FateLabel l;
  l.time = shot.t_last;
  l.position = shot.last;
  switch (shot.fate) {
    case UnstableFate::Escaped: l.kind = FateKind::Diverged; break;
    case UnstableFate::ConvergedToFocus: l.kind = FateKind::ConvergedToFocusPlus; break;
    default: l.kind = FateKind::Undecided; break;
  }
  return l;
}

int ladder_index_of(const UnfParams& p, double z) {
  try {
    const auto ladder = riccati_tau(p, 64, 1e3);
    int k = 0;
    while (k < static_cast<int>(ladder.zk.size()) && z > ladder.zk[k]) ++k;
    return k;
  } catch (const LadderTruncatedError& e) {
    const auto& zk = e.prefix().zk;
    int k = 0;
    while (k < static_cast<int>(zk.size()) && z > zk[k]) ++k;
    return k < static_cast<int>(zk.size()) ? k : -1;
  }
}

}  // namespace

std::string_view to_string(FateKind k) noexcept {
  switch (k) {
    case FateKind::SectionHit: return "SectionHit";
    case FateKind::ConvergedToFocusPlus: return "ConvergedToFocusPlus";
    case FateKind::ConvergedToFocusMinus: return "ConvergedToFocusMinus";
    case FateKind::Diverged: return "Diverged";
    case FateKind::Undecided: return "Undecided";
  }
  return "Unknown";
}

std::string_view to_string(Orientation o) noexcept {
  return o == Orientation::Oriented ? "Oriented" : "NonOriented";
}

FateLabel classify_wu_fate(const UnfParams& p, const IntegratorConfig& cfg, bool follow_through) {
  if (!p.finite() || !(p.lambda >= 0.0) || !(p.alpha > 0.0) || !(p.beta > 0.0)) {
    throw Error(ErrorKind::InvalidDomain, "requires lambda >= 0 and alpha, beta > 0");
  }
  cfg.validate();
  const auto eq = equilibria(p);
  const State s0 = unstable_seed(p, kDefaultSeedOffset);
  FateLabel label;
  bool hit = false;
  auto obs = [&](const DenseStep<3>& ds) {
    if (ds.y0[1] > 0.0 && ds.y1[1] <= 0.0 && ds.y1[0] > 0.0 && ds.y1[2] > 0.0 && !hit) {
      hit = true;
      double a = ds.t0, b = ds.t1;
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        (ds(m)[1] > 0.0 ? a : b) = m;
      }
      label.kind = FateKind::SectionHit;
      label.time = b;
      label.position = to_state(ds(b));
      if (!follow_through) return true;
    }
    if (dist_to(ds.y1, *eq.e_plus) < 1e-6) {
      label = {FateKind::ConvergedToFocusPlus, ds.t1, to_state(ds.y1)};
      return true;
    }
    if (dist_to(ds.y1, *eq.e_minus) < 1e-6) {
      label = {FateKind::ConvergedToFocusMinus, ds.t1, to_state(ds.y1)};
      return true;
    }
    return false;
  };
  const auto res = dopri5<3>(UnfField{p}, to_vec(s0), 0.0, cfg.t_max, cfg, obs);
  if (res.outcome == Outcome::Escaped) return {FateKind::Diverged, res.t, to_state(res.y)};
  if (res.outcome == Outcome::Stopped) return label;
  if (hit) return label;
  return {FateKind::Undecided, res.t, to_state(res.y)};
}

SplitResult split_function(const UnfParams& p, const SplitConfig& cfg) {
  const auto shot = try_shoot_unstable(p, cfg.seed_offset, cfg.ode);
  if (!shot.hit) {
    throw FateInterferenceError("W^u does not reach S+ (" + std::string(to_string(shot.fate)) + ")", label_of(shot));
  }
  SplitResult r;
  r.x_u = shot.hit->x_u;
  r.z_u = shot.hit->z_u;
  const State pu{r.x_u, 0.0, r.z_u};
  const auto ret = follow_to_saddle(p, pu, cfg.ode, cfg.ret);
  if (ret.kind == ReturnKind::Escaped || ret.kind == ReturnKind::Undecided) {
    FateLabel l;
    l.kind = ret.kind == ReturnKind::Escaped ? FateKind::Diverged : FateKind::Undecided;
    l.time = shot.hit->t_flight + ret.time;
    l.position = pu;
    throw FateInterferenceError("flight from p^u neither returns to the saddle nor settles", l);
  }
  r.exit_side = ret.side;
  r.half_turns = ret.half_turns;
  r.k = ret.half_turns;
  const double frac = std::abs(ret.theta) / kPi - std::floor(std::abs(ret.theta) / kPi);
  r.boundary_degenerate = frac < 1e-9 || 1.0 - frac < 1e-9;
  r.inside = r.exit_side == (r.k % 2 == 0 ? 1 : -1);
  r.ladder_index = ladder_index_of(p, r.z_u);

  // Nearest W^s trace on the segment {y = 0, z = z_u}, walking outwards from
  // p^u on geometric offsets and bisecting the first sign-changing pair.
  const double x_max = 1.25 * aux_separatrix_x0(p.lambda);
  const int s_u = ret.kind == ReturnKind::Exit ? ret.side : 0;
  double best = kNaN;
  for (int dir = -1; dir <= 1; dir += 2) {
    double x_last = r.x_u;
    int s_last = s_u;
    for (int j = 0; j < 40; ++j) {
      const double off = 1e-7 * std::ldexp(1.0, j);
      double x = r.x_u + dir * off;
      const bool at_end = dir < 0 ? x <= 1e-9 : x >= x_max;
      if (at_end) x = dir < 0 ? 1e-9 : x_max;
      if (std::isfinite(best) && std::abs(x - r.x_u) >= std::abs(best - r.x_u)) break;
      const int s = exit_side(p, x, r.z_u, cfg.ode, cfg.ret);
      if (s != 0 && s_last != 0 && s == -s_last) {
        const auto xs = bisect_stable_trace(p, r.z_u, x_last, s_last, x, cfg.ode, cfg.ret, cfg.trace_tol);
        if (xs && (!std::isfinite(best) || std::abs(*xs - r.x_u) < std::abs(best - r.x_u))) best = *xs;
        break;
      }
      if (s != 0) {
        s_last = s;
        x_last = x;
      }
      if (at_end) break;
    }
  }
  r.trace_found = std::isfinite(best);
  r.x_s = best;
  const double mag = r.trace_found ? std::abs(r.x_u - best) : x_max;
  r.delta = r.inside ? -mag : mag;
  return r;
}

double split_root_value(const SplitResult& r) {
  const double mag = std::abs(r.delta);
  return r.exit_side >= 0 ? mag : -mag;
}

int winding_half_turns(double theta_total) {
  return static_cast<int>(std::floor(std::abs(theta_total) / kPi));
}

namespace {

struct Eval {
  double x = 0.0;
  SplitResult r;
  double g = 0.0;
};

BifurcationPoint solve(const std::function<UnfParams(double)>& at, double lo, double hi, int k, double tol,
                       const SplitConfig& cfg, bool check_twist, const char* what) {
  if (!(lo < hi)) throw Error(ErrorKind::InvalidDomain, std::string(what) + ": bracket must satisfy lo < hi");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidDomain, std::string(what) + ": tol must be positive");
  int evaluations = 0;
  auto eval = [&](double x, double a, double b) {
    ++evaluations;
    try {
      Eval e;
      e.x = x;
      e.r = split_function(at(x), cfg);
      e.g = split_root_value(e.r);
      return e;
    } catch (const FateInterferenceError& err) {
      throw FateInterferenceError(std::string(what) + ": " + err.what(), err.label(), std::make_pair(a, b));
    }
  };
  Eval a = eval(lo, lo, hi);
  Eval b = eval(hi, lo, hi);
  if ((a.g > 0.0) == (b.g > 0.0)) {
    throw Error(ErrorKind::BracketNotSignChanging,
                std::string(what) + ": exit side of p^u is the same at both bracket ends");
  }
  // Illinois steps guarded by bisection whenever the bracket fails to halve.
  int stale_side = 0;
  double width_before = b.x - a.x;
  int since_check = 0;
  bool force_bisect = false;
  while (b.x - a.x > tol) {
    double m = 0.5 * (a.x + b.x);
    const bool finite = a.r.trace_found && b.r.trace_found;
    if (finite && !force_bisect) {
      const double s = b.x - b.g * (b.x - a.x) / (b.g - a.g);
      const double guard = 0.01 * (b.x - a.x);
      if (s > a.x + guard && s < b.x - guard) m = s;
    }
    force_bisect = false;
    Eval e = eval(m, a.x, b.x);
    if ((e.g > 0.0) == (a.g > 0.0)) {
      a = e;
      if (stale_side == -1) b.g *= 0.5;
      stale_side = -1;
    } else {
      b = e;
      if (stale_side == 1) a.g *= 0.5;
      stale_side = 1;
    }
    if (++since_check == 2) {
      if (b.x - a.x > 0.5 * width_before) force_bisect = true;
      width_before = b.x - a.x;
      since_check = 0;
    }
  }
  const Eval& best = std::abs(a.g) <= std::abs(b.g) ? a : b;
  BifurcationPoint bp;
  bp.params = at(best.x);
  bp.half_turns = best.r.half_turns;
  bp.k = k;
  bp.orientation = orientation_of(k);
  bp.residual = std::abs(best.r.delta);
  bp.bracket_lo = a.x;
  bp.bracket_hi = b.x;
  bp.evaluations = evaluations;
  if (check_twist && (a.r.half_turns != k || b.r.half_turns != k)) {
    throw Error(ErrorKind::TwistMismatch, std::string(what) + ": located orbit makes " +
                                              std::to_string(best.r.half_turns) + " half-turns, expected " +
                                              std::to_string(k));
  }
  return bp;
}

}  // namespace

BifurcationPoint find_lambda0(double alpha, double beta, double lambda_lo, double lambda_hi, double tol,
                              const SplitConfig& cfg) {
  return find_lambda_k(alpha, beta, 0, lambda_lo, lambda_hi, tol, cfg);
}

BifurcationPoint find_lambda_k(double alpha, double beta, int k, double lambda_lo, double lambda_hi, double tol,
                               const SplitConfig& cfg) {
  if (k < 0) throw Error(ErrorKind::InvalidDomain, "k must be non-negative");
  return solve([=](double l) { return UnfParams{l, alpha, beta}; }, lambda_lo, lambda_hi, k, tol, cfg, true,
               "find_lambda");
}

BifurcationPoint find_alpha_k(double lambda, double beta, int k, double alpha_lo, double alpha_hi, double tol,
                              const SplitConfig& cfg) {
  if (k < 0) throw Error(ErrorKind::InvalidDomain, "k must be non-negative");
  return solve([=](double a) { return UnfParams{lambda, a, beta}; }, alpha_lo, alpha_hi, k, tol, cfg, true,
               "find_alpha_k");
}

std::vector<SignChange> scan_sign_changes(const std::function<UnfParams(double)>& at, double lo, double hi, int n,
                                          const SplitConfig& cfg) {
  if (n < 1 || !(lo < hi)) throw Error(ErrorKind::InvalidDomain, "scan needs lo < hi and n >= 1");
  struct Probe {
    bool ok = false;
    int side = 0;
    int k = 0;
  };
  std::vector<Probe> probes(n + 1);
  for (int i = 0; i <= n; ++i) {
    const UnfParams p = at(lo + (hi - lo) * i / n);
    const auto shot = try_shoot_unstable(p, cfg.seed_offset, cfg.ode);
    if (!shot.hit) continue;
    const auto ret = follow_to_saddle(p, {shot.hit->x_u, 0.0, shot.hit->z_u}, cfg.ode, cfg.ret);
    if (ret.kind != ReturnKind::Exit && ret.kind != ReturnKind::Focus) continue;
    probes[i] = {true, ret.side, ret.half_turns};
  }
  std::vector<SignChange> out;
  for (int i = 0; i < n; ++i) {
    if (probes[i].ok && probes[i + 1].ok && probes[i].side != probes[i + 1].side) {
      out.push_back({lo + (hi - lo) * i / n, lo + (hi - lo) * (i + 1) / n, probes[i].k, probes[i + 1].k});
    }
  }
  return out;
}

std::vector<Symbol> symbolic_sequence(const UnfParams& p, const State& s0, int n_symbols, const IntegratorConfig& cfg) {
  if (!p.finite() || !(p.alpha > 0.0) || !(p.beta > 0.0) || !(p.lambda >= 0.0)) {
    throw Error(ErrorKind::InvalidDomain, "requires lambda >= 0 and alpha, beta > 0");
  }
  if (n_symbols < 1) throw Error(ErrorKind::InvalidDomain, "n_symbols must be positive");
  cfg.validate();
  const double zc = p.focus_height();
  const auto eq = equilibria(p);
  std::vector<Symbol> out;
  out.reserve(n_symbols);
  // A half-turn about I is a passage between consecutive y = 0 crossings
  // that changes the sign of x while staying above the focus height.
  int high_flips = 0;
  bool flipped = false;
  double z_low = s0.z;
  FateLabel stop;
  bool settled = false;
  auto obs = [&](const DenseStep<3>& ds) {
    z_low = std::min(z_low, ds.y1[2]);
    if ((ds.y0[0] > 0.0) != (ds.y1[0] > 0.0)) flipped = true;
    if ((ds.y0[1] > 0.0) != (ds.y1[1] > 0.0)) {
      if (flipped && z_low > zc) ++high_flips;
      flipped = false;
      z_low = ds.y1[2];
      const double x = ds.y1[0], z = ds.y1[2];
      if (z > 0.0 && x * x + z > 1.0) {
        out.push_back({x > 0.0 ? 'R' : 'L', high_flips});
        high_flips = 0;
        if (static_cast<int>(out.size()) >= n_symbols) return true;
      }
    }
    for (const State* e : {&*eq.e_plus, &*eq.e_minus}) {
      if (dist_to(ds.y1, *e) < 1e-6) {
        stop = {e == &*eq.e_plus ? FateKind::ConvergedToFocusPlus : FateKind::ConvergedToFocusMinus, ds.t1,
                to_state(ds.y1)};
        settled = true;
        return true;
      }
    }
    return false;
  };
  const double horizon = std::max(cfg.t_max, 200.0 * n_symbols);
  const auto res = dopri5<3>(UnfField{p}, to_vec(s0), 0.0, horizon, cfg, obs);
  if (settled) throw FateInterferenceError("orbit settled on a focus before emitting all symbols", stop);
  if (res.outcome == Outcome::Escaped) {
    throw FateInterferenceError("orbit escaped", {FateKind::Diverged, res.t, to_state(res.y)});
  }
  if (static_cast<int>(out.size()) < n_symbols) {
    throw FateInterferenceError("horizon reached before all symbols were emitted",
                                {FateKind::Undecided, res.t, to_state(res.y)});
  }
  return out;
}

}  // namespace unf
