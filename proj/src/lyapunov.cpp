#include "unf/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "unf/error.hpp"
#include "unf/manifolds.hpp"

namespace unf {

void LyapunovConfig::validate() const {
  if (!(t_transient > 0.0) || !(t_total > t_transient)) {
    throw Error(ErrorKind::InvalidDomain, "Lyapunov horizons need t_total > t_transient > 0");
  }
  if (!(dt > 0.0) || !(renorm_dt >= dt)) throw Error(ErrorKind::InvalidDomain, "need 0 < dt <= renorm_dt");
  const double ratio = renorm_dt / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw Error(ErrorKind::InvalidDomain, "renorm_dt must be a whole number of steps");
  }
  if (!(escape_radius > 0.0)) throw Error(ErrorKind::InvalidDomain, "escape_radius must be positive");
  if (!(converge_tol > 0.0) || !(converge_rel >= 0.0)) {
    throw Error(ErrorKind::InvalidDomain, "convergence tolerances must be positive");
  }
}

State default_lyapunov_start(const UnfParams& p) { return unstable_seed(p, kDefaultSeedOffset); }

std::vector<LyapunovResult> largest_lyapunov_batch(std::span<const UnfParams> p, std::span<const State> s0,
                                                   const LyapunovConfig& cfg) {
  cfg.validate();
  if (p.size() != s0.size()) throw Error(ErrorKind::InvalidDomain, "parameter and start lists differ in length");
  for (const auto& q : p) {
    if (!q.finite()) throw Error(ErrorKind::InvalidDomain, "non-finite parameters");
  }
  const auto advance = kernels::select(cfg.kernel);
  const int steps = static_cast<int>(std::lround(cfg.renorm_dt / cfg.dt));
  const double h = cfg.renorm_dt / steps;
  const long n_transient = std::lround(std::ceil(cfg.t_transient / cfg.renorm_dt - 1e-9));
  const long n_total = std::lround(std::ceil(cfg.t_total / cfg.renorm_dt - 1e-9));
  const long n_avg = n_total - n_transient;
  const double r2 = cfg.escape_radius * cfg.escape_radius;

  std::vector<LyapunovResult> out(p.size());
  std::vector<double> running(static_cast<std::size_t>(n_avg) * kernels::kLanes);
  for (std::size_t base = 0; base < p.size(); base += kernels::kLanes) {
    kernels::TangentLanes L{};
    const double v0 = 1.0 / std::sqrt(1.0 + 0.25 + 0.0625);
    for (int l = 0; l < kernels::kLanes; ++l) {
      const std::size_t i = std::min(base + l, p.size() - 1);
      L.x[l] = s0[i].x;
      L.y[l] = s0[i].y;
      L.z[l] = s0[i].z;
      L.vx[l] = v0;
      L.vy[l] = 0.5 * v0;
      L.vz[l] = 0.25 * v0;
      L.lambda[l] = p[i].lambda;
      L.alpha[l] = p[i].alpha;
      L.beta[l] = p[i].beta;
      L.alive[l] = base + l < p.size() ? 1 : 0;
    }
    double sum[kernels::kLanes] = {0.0, 0.0, 0.0, 0.0};
    for (long j = 0; j < n_total; ++j) {
      advance(L, h, steps, r2);
      for (int l = 0; l < kernels::kLanes; ++l) {
        if (!L.alive[l]) continue;
        const double n = std::sqrt(L.vx[l] * L.vx[l] + L.vy[l] * L.vy[l] + L.vz[l] * L.vz[l]);
        if (!(n > 0.0) || !std::isfinite(n)) {
          L.alive[l] = 0;
          continue;
        }
        L.vx[l] /= n;
        L.vy[l] /= n;
        L.vz[l] /= n;
        if (j >= n_transient) {
          sum[l] += std::log(n);
          const long m = j - n_transient;
          running[static_cast<std::size_t>(m) * kernels::kLanes + l] = sum[l] / ((m + 1) * cfg.renorm_dt);
        }
      }
      bool any = false;
      for (int l = 0; l < kernels::kLanes; ++l) any = any || L.alive[l];
      if (!any) break;
    }
    for (int l = 0; l < kernels::kLanes && base + l < p.size(); ++l) {
      LyapunovResult& r = out[base + l];
      r.t_used = n_avg * cfg.renorm_dt;
      if (!L.alive[l]) {
        r.escaped = true;
        r.Lambda = std::numeric_limits<double>::infinity();
        r.uncertainty = std::numeric_limits<double>::infinity();
        continue;
      }
      r.Lambda = sum[l] / r.t_used;
      double dev = 0.0;
      for (long m = n_avg - n_avg / 4 - 1; m < n_avg; ++m) {
        dev = std::max(dev, std::abs(running[static_cast<std::size_t>(std::max(m, 0L)) * kernels::kLanes + l] - r.Lambda));
      }
      r.uncertainty = 2.0 * dev + std::numeric_limits<double>::min();
      r.converged = r.uncertainty <= std::max(cfg.converge_tol, cfg.converge_rel * std::abs(r.Lambda));
    }
  }
  return out;
}

LyapunovResult largest_lyapunov(const UnfParams& p, const State& s0, const LyapunovConfig& cfg) {
  return largest_lyapunov_batch(std::span<const UnfParams>(&p, 1), std::span<const State>(&s0, 1), cfg).front();
}

std::string_view to_string(AttractorClass c) noexcept {
  switch (c) {
    case AttractorClass::Chaotic: return "Chaotic";
    case AttractorClass::Periodic: return "Periodic";
    case AttractorClass::Equilibrium: return "Equilibrium";
    case AttractorClass::Diverged: return "Diverged";
    case AttractorClass::Error: return "Error";
  }
  return "Unknown";
}

char class_code(AttractorClass c) noexcept {
  switch (c) {
    case AttractorClass::Chaotic: return 'C';
    case AttractorClass::Periodic: return 'P';
    case AttractorClass::Equilibrium: return 'E';
    case AttractorClass::Diverged: return 'D';
    case AttractorClass::Error: return 'X';
  }
  return 'X';
}

AttractorClass class_from_code(char c) {
  switch (c) {
    case 'C': return AttractorClass::Chaotic;
    case 'P': return AttractorClass::Periodic;
    case 'E': return AttractorClass::Equilibrium;
    case 'D': return AttractorClass::Diverged;
    case 'X': return AttractorClass::Error;
    default: throw Error(ErrorKind::InvalidDomain, std::string("unknown class code '") + c + "'");
  }
}

AttractorClass classify_attractor(const LyapunovResult& r, double eps_zero) {
  if (!(eps_zero >= 0.0)) throw Error(ErrorKind::InvalidDomain, "eps_zero must be non-negative");
  if (r.escaped) return AttractorClass::Diverged;
  if (!r.converged) throw Error(ErrorKind::Unconverged, "Lyapunov average did not settle");
  if (r.Lambda > eps_zero) return AttractorClass::Chaotic;
  if (r.Lambda < -eps_zero) return AttractorClass::Equilibrium;
  return AttractorClass::Periodic;
}

}  // namespace unf
