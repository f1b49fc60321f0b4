// Acceptance suite: one PASS/FAIL line per criterion A1..A13.
#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "unf/homoclinic.hpp"
#include "unf/lyapunov.hpp"
#include "unf/manifolds.hpp"
#include "unf/model.hpp"
#include "unf/sweep.hpp"

using namespace unf;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail, double seconds) {
  std::printf("%s %s (%.1fs) %s\n", id, ok ? "PASS" : "FAIL", seconds, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void criterion(const char* id, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream msg;
  msg.precision(8);
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(msg);
  } catch (const std::exception& e) {
    msg << "threw: " << e.what();
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, ok, msg.str(), dt);
}

bool near(double v, double want, double tol) { return std::abs(v - want) <= tol; }

// Independent Benettin estimate in Lorenz coordinates (fixed-step RK4).
double lorenz_exponent(double t_total) {
  const double a = 10, b = 8.0 / 3, r = 28, dt = 0.005;
  double u[6] = {1, 1, 20, 1, 0, 0};
  auto f = [&](const double* s, double* d) {
    d[0] = a * (s[1] - s[0]);
    d[1] = r * s[0] - s[1] - s[0] * s[2];
    d[2] = -b * s[2] + s[0] * s[1];
    d[3] = a * (s[4] - s[3]);
    d[4] = (r - s[2]) * s[3] - s[4] - s[0] * s[5];
    d[5] = s[1] * s[3] + s[0] * s[4] - b * s[5];
  };
  const int steps = static_cast<int>(t_total / dt), skip = static_cast<int>(50 / dt);
  double sum = 0;
  for (int i = 0; i < steps; ++i) {
    double k1[6], k2[6], k3[6], k4[6], w[6];
    f(u, k1);
    for (int j = 0; j < 6; ++j) w[j] = u[j] + dt / 2 * k1[j];
    f(w, k2);
    for (int j = 0; j < 6; ++j) w[j] = u[j] + dt / 2 * k2[j];
    f(w, k3);
    for (int j = 0; j < 6; ++j) w[j] = u[j] + dt * k3[j];
    f(w, k4);
    for (int j = 0; j < 6; ++j) u[j] += dt / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    const double n = std::sqrt(u[3] * u[3] + u[4] * u[4] + u[5] * u[5]);
    if (i >= skip) sum += std::log(n);
    for (int j = 3; j < 6; ++j) u[j] /= n;
  }
  return sum / ((steps - skip) * dt);
}

std::string sweep_csv(const SweepGrid& g) {
  std::ostringstream os;
  write_sweep_csv(os, g);
  return os.str();
}

int nearest(const Axis& ax, double v) {
  int best = 0;
  for (int i = 1; i < ax.n; ++i)
    if (std::abs(ax.at(i) - v) < std::abs(ax.at(best) - v)) best = i;
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  std::mt19937_64 rng(20241016);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  criterion("A1", [](std::ostringstream& m) {
    const UnfParams l = map_p(GlParams::lorenz(10, 8.0 / 3, 28));
    const GlParams cg{35, 3, -7, -28};
    const UnfParams c = map_p(cg);
    m << "lorenz=(" << l.lambda << ", " << l.alpha << ", " << l.beta << ") A=" << l.A() << "; chen=(" << c.lambda
      << ", " << c.alpha << ", " << c.beta << ") A=" << c.A();
    const bool lor = near(l.lambda, 0.66938, 1e-4) && near(l.alpha, 0.16233, 1e-4) && near(l.beta, 1.05487, 1e-4) &&
                     near(l.A(), 0.60860, 1e-4);
    const bool chen = near(c.lambda, 0.25820, 1e-4) && near(c.alpha, 0.11068, 1e-4) && near(c.beta, 2.47186, 1e-4) &&
                      near(c.A(), 1.29127, 1e-4);
    const double curve = std::abs(c.lambda - (c.A() * c.A() - 1) / (2 * c.A()));
    m << "; chen-curve residual=" << curve;
    if (!chen) m << "; stated Chen beta/A differ from the exact image";
    return lor && chen && curve < 1e-10;
  });

  criterion("A2", [&](std::ostringstream& m) {
    double worst = 0, worst_rt = 0;
    for (const GlParams g : {GlParams::lorenz(10, 8.0 / 3, 28), GlParams::chen(35, 3, 28)}) {
      const UnfParams p = map_p(g);
      for (int i = 0; i < 100; ++i) {
        const State s{uni(-20, 20), uni(-20, 20), uni(0, 40)};
        const Mat3 D = map_v_jacobian(g, s);
        const State f = gl_vector_field(g, s);
        const State u = unf_vector_field(p, map_v(g, s, 0).state);
        const double push[3] = {D[0][0] * f.x + D[0][1] * f.y + D[0][2] * f.z, D[1][0] * f.x + D[1][1] * f.y + D[1][2] * f.z,
                                D[2][0] * f.x + D[2][1] * f.y + D[2][2] * f.z};
        const double scale = std::max({1.0, std::abs(u.x), std::abs(u.y), std::abs(u.z)});
        const double w = g.omega();
        worst = std::max({worst, std::abs(w * push[0] - u.x) / scale, std::abs(w * push[1] - u.y) / scale,
                          std::abs(w * push[2] - u.z) / scale});
        const TimedState there = map_v(g, s, 0.7);
        const TimedState back = map_v_inverse(g, there.state, there.t);
        worst_rt = std::max(worst_rt, (back.state - s).norm() / std::max(1.0, s.norm()));
      }
    }
    m << "pushforward residual=" << worst << " round trip=" << worst_rt;
    return worst < 1e-9 && worst_rt < 1e-12;
  });

  criterion("A3", [&](std::ostringstream& m) {
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto s = saddle_spectrum({uni(0, 5), 0.3, 1.0});
      worst = std::max(worst, std::abs(s.e1 * s.e2 + 1));
    }
    double worst_re = 0;
    int checked = 0;
    for (int i = 0; i < 50; ++i) {
      const double a = uni(0.05, 1.0), b = uni(0.1, 3.0);
      const double l = hopf_threshold(a, b);
      if (!(l > 0)) continue;
      ++checked;
      const UnfParams p{l, a, b};
      const Mat3 J = unf_jacobian(p, focus_plus(p));
      Eigen::Matrix3d M;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) M(r, c) = J[r][c];
      const auto ev = Eigen::EigenSolver<Eigen::Matrix3d>(M).eigenvalues();
      double re = 1e300;
      for (int k = 0; k < 3; ++k)
        if (std::abs(ev[k].imag()) > 1e-12) re = std::min(re, std::abs(ev[k].real()));
      worst_re = std::max(worst_re, re);
    }
    m << "max |e1 e2 + 1|=" << worst << "; max |Re| at Hopf=" << worst_re << " over " << checked << " points";
    return worst < 1e-12 && worst_re < 1e-7 && checked == 50;
  });

  criterion("A4", [](std::ostringstream& m) {
    const auto b = find_lambda0(0.314, 1.05487, 0.6, 0.9);
    m << "lambda0=" << b.params.lambda << " k=" << b.k;
    return b.params.lambda >= 0.7406 && b.params.lambda <= 0.7506 && b.orientation == Orientation::Oriented;
  });

  criterion("A5", [](std::ostringstream& m) {
    const auto b = find_alpha_k(0.6296, 2.47, 1, 0.17, 0.20);
    m << "alpha1=" << b.params.alpha << " half_turns=" << b.half_turns << " " << to_string(b.orientation);
    return b.params.alpha >= 0.179 && b.params.alpha <= 0.189 && b.orientation == Orientation::NonOriented &&
           b.half_turns == 1;
  });

  criterion("A6", [](std::ostringstream& m) {
    const auto changes = scan_sign_changes([](double a) { return UnfParams{0.3, a, 2.47}; }, 0.02, 0.08, 60);
    const SignChange* pick = nullptr;
    for (const auto& c : changes) {
      if (c.k_lo != c.k_hi || c.k_lo < 2) continue;
      if (!pick || std::abs(0.5 * (c.lo + c.hi) - 0.04) < std::abs(0.5 * (pick->lo + pick->hi) - 0.04)) pick = &c;
    }
    if (!pick) {
      m << "no twisted sign change in (0.02, 0.08)";
      return false;
    }
    const auto b = find_alpha_k(0.3, 2.47, pick->k_lo, pick->lo, pick->hi);
    m << "alpha=" << b.params.alpha << " k=" << b.k << " half_turns=" << b.half_turns << " (" << changes.size()
      << " sign changes scanned)";
    return b.half_turns >= 2 && b.params.alpha > 0.02 && b.params.alpha < 0.08;
  });

  criterion("A7", [](std::ostringstream& m) {
    const auto big = split_function({2.0, 0.35, 1.05487});
    m << "delta0(2.0)=" << big.delta;
    bool small_ok = false;
    try {
      const auto s = split_function({0.02, 0.35, 1.05487});
      small_ok = s.delta > 0;
      m << " delta0(0.02)=" << s.delta;
    } catch (const FateInterferenceError& e) {
      small_ok = true;
      m << " lambda=0.02: " << to_string(e.label().kind);
    }
    const auto changes = scan_sign_changes([](double l) { return UnfParams{l, 0.35, 1.05487}; }, 0.02, 2.0, 40);
    m << "; sign changes=" << changes.size();
    if (!changes.empty()) m << " first in [" << changes.front().lo << ", " << changes.front().hi << "]";
    return big.delta < 0 && small_ok && !changes.empty();
  });

  criterion("A8", [](std::ostringstream& m) {
    IntegratorConfig cfg;
    cfg.t_max = 500;
    const auto f = classify_wu_fate({0.0, 0.2, 1.0}, cfg, true);
    m << to_string(f.kind) << " at t=" << f.time;
    return f.kind == FateKind::Diverged && f.time < 500;
  });

  criterion("A9", [&](std::ostringstream& m) {
    int hits = 0, hit_fail = 0, curves = 0, samples = 0, bound_fail = 0;
    for (int i = 0; i < 50; ++i) {
      const UnfParams p{uni(0.1, 1.5), uni(0.02, 1.0), uni(0.2, 3.0)};
      const auto shot = try_shoot_unstable(p, kDefaultSeedOffset, {});
      if (shot.hit) {
        ++hits;
        const auto& h = *shot.hit;
        if (!(h.x_u > 0 && h.x_u < std::sqrt(2.0) && h.z_u > 0 && h.z_u < 2 * p.beta / p.alpha)) ++hit_fail;
      } else if (shot.fate != UnstableFate::Escaped && shot.fate != UnstableFate::ConvergedToFocus) {
        ++hit_fail;
      }
      if (i < 20) {
        const double x0 = aux_separatrix_x0(p.lambda);
        const auto c = stable_curve(p, 0.05, 2.0, 8);
        ++curves;
        for (const auto& s : c.samples) {
          ++samples;
          if (!(std::abs(s.x) < x0)) ++bound_fail;
        }
      }
    }
    m << "W^u hit bounds: " << hits << " hits, " << hit_fail << " failures; stable trace |x| < x0: " << samples << " samples on " << curves
      << " curves, " << bound_fail << " failures";
    return hit_fail == 0 && bound_fail == 0 && hits > 0 && samples > 0;
  });

  criterion("A10", [](std::ostringstream& m) {
    const UnfParams p{0.26, 0.11, 2.47};
    const auto L = riccati_tau(p, 4);
    const auto c = stable_curve(p, 0.05, 0.5 * (L.zk[3] + riccati_tau(p, 5).zk[4]), 80);
    if (c.zero_ladder.size() < 4) {
      m << "only " << c.zero_ladder.size() << " zeros";
      return false;
    }
    bool ok = true;
    for (int k = 0; k < 4; ++k) {
      const double err = std::abs(c.zero_ladder[k] - L.zk[k]);
      m << "z" << k + 1 << "=" << L.zk[k] << " (err " << err << ") ";
      ok = ok && err < 5e-3 * (1 + L.zk[k]);
    }
    return ok;
  });

  criterion("A11", [](std::ostringstream& m) {
    const UnfParams stable{0.7634, 0.35, 1.05487}, lorenz{0.6694, 0.1623, 1.05487}, chen{0.26, 0.11, 2.47};
    const double ls = largest_lyapunov(stable, default_lyapunov_start(stable)).Lambda;
    const double ll = largest_lyapunov(lorenz, default_lyapunov_start(lorenz)).Lambda;
    const double lc = largest_lyapunov(chen, default_lyapunov_start(chen)).Lambda;
    const GlParams g = GlParams::lorenz(10, 8.0 / 3, 28);
    const UnfParams exact = map_p(g);
    const double lu = largest_lyapunov(exact, default_lyapunov_start(exact)).Lambda;
    const double oracle = g.omega() * lorenz_exponent(2050);
    m << "stable=" << ls << " lorenz=" << ll << " chen=" << lc << "; exact Lorenz image " << lu << " vs oracle "
      << oracle;
    return ls < 0 && ll > 0 && lc > 0 && std::abs(lu - oracle) < 0.2 * oracle;
  });

  criterion("A12", [](std::ostringstream& m) {
    const Axis a{0.05, 0.45, 40}, l{0.55, 0.85, 40};
    const auto g = sweep_grid(1.05487, a, l, 1);
    const auto g3 = sweep_grid(1.05487, a, l, 3);
    const bool same = sweep_csv(g) == sweep_csv(g3);
    auto cell = [&](double al, double la) { return g.at(nearest(a, al), nearest(l, la)); };
    const bool e = cell(0.35, 0.7634).cls == AttractorClass::Equilibrium;
    const bool c = cell(0.162, 0.6694).cls == AttractorClass::Chaotic;
    // Boundary vicinity: non-chaotic node within one lambda spacing of lambda_0.
    const auto& bv = cell(0.314, 0.74564);
    const double l0 = find_lambda0(bv.alpha, 1.05487, 0.6, 0.9).params.lambda;
    const double dl = (l.hi - l.lo) / (l.n - 1);
    const bool b = bv.cls != AttractorClass::Chaotic && std::abs(bv.lambda - l0) <= dl;
    // Near chaotic boundary: the 3x3 neighbourhood mixes chaotic and other cells.
    const int ia = nearest(a, 0.2005), il = nearest(l, 0.6865);
    int chaotic = 0, other = 0;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) (g.at(ia + di, il + dj).cls == AttractorClass::Chaotic ? chaotic : other)++;
    const bool n = chaotic > 0 && other > 0;
    m << "E@(0.35,0.7634)=" << class_code(cell(0.35, 0.7634).cls) << " C@(0.162,0.6694)="
      << class_code(cell(0.162, 0.6694).cls) << " boundary node " << class_code(bv.cls) << " |lambda-lambda0|="
      << std::abs(bv.lambda - l0) << " neighbourhood C/other=" << chaotic << "/" << other
      << " identical across workers=" << same;
    return same && e && c && b && n;
  });

  criterion("A13", [](std::ostringstream& m) {
    const UnfParams lorenz{0.6694, 0.1623, 1.05487}, chen{0.26, 0.11, 2.47};
    const auto sl = symbolic_sequence(lorenz, unstable_seed(lorenz, 1e-6), 500);
    const auto sc = symbolic_sequence(chen, unstable_seed(chen, 1e-6), 500);
    int lt = 0, ct = 0;
    for (const auto& s : sl) lt += s.half_turns != 0;
    for (const auto& s : sc) ct += s.half_turns >= 1;
    m << "lorenz twisted symbols=" << lt << "/" << sl.size() << " chen twisted symbols=" << ct << "/" << sc.size();
    return sl.size() == 500 && sc.size() == 500 && lt == 0 && ct >= 1;
  });

  std::printf("%d criteria failed\n", failures);
  return strict && failures > 0 ? 1 : 0;
}
