#include "unf/kernels/tangent_rk4.hpp"

namespace unf::kernels {

namespace {

struct S6 {
  double x, y, z, vx, vy, vz;
};

// Operation order is mirrored exactly by the AVX2 kernel.
inline S6 rhs(const S6& s, double lam, double alp, double bet) {
  const double xx = s.x * s.x;
  const double q = xx + s.z - 1.0;
  const double dq = xx * 3.0 + s.z - 1.0;
  S6 d;
  d.x = s.y;
  d.y = -(q * s.x) - lam * s.y;
  d.z = bet * xx - alp * s.z;
  d.vx = s.vy;
  d.vy = -(dq * s.vx) - lam * s.vy - s.x * s.vz;
  d.vz = bet * 2.0 * s.x * s.vx - alp * s.vz;
  return d;
}

inline S6 axpy(const S6& s, double h, const S6& k) {
  return {s.x + h * k.x, s.y + h * k.y, s.z + h * k.z, s.vx + h * k.vx, s.vy + h * k.vy, s.vz + h * k.vz};
}

inline double combine(double s, double h6, double k1, double k2, double k3, double k4) {
  return s + h6 * (k1 + k2 * 2.0 + k3 * 2.0 + k4);
}

}  // namespace

void advance_scalar(TangentLanes& L, double dt, int steps, double escape_r2) {
  const double h2 = dt * 0.5;
  const double h6 = dt / 6.0;
  for (int l = 0; l < kLanes; ++l) {
    if (!L.alive[l]) continue;
    const double lam = L.lambda[l], alp = L.alpha[l], bet = L.beta[l];
    S6 s{L.x[l], L.y[l], L.z[l], L.vx[l], L.vy[l], L.vz[l]};
    for (int i = 0; i < steps; ++i) {
      const S6 k1 = rhs(s, lam, alp, bet);
      const S6 k2 = rhs(axpy(s, h2, k1), lam, alp, bet);
      const S6 k3 = rhs(axpy(s, h2, k2), lam, alp, bet);
      const S6 k4 = rhs(axpy(s, dt, k3), lam, alp, bet);
      S6 n;
      n.x = combine(s.x, h6, k1.x, k2.x, k3.x, k4.x);
      n.y = combine(s.y, h6, k1.y, k2.y, k3.y, k4.y);
      n.z = combine(s.z, h6, k1.z, k2.z, k3.z, k4.z);
      n.vx = combine(s.vx, h6, k1.vx, k2.vx, k3.vx, k4.vx);
      n.vy = combine(s.vy, h6, k1.vy, k2.vy, k3.vy, k4.vy);
      n.vz = combine(s.vz, h6, k1.vz, k2.vz, k3.vz, k4.vz);
      s = n;
      const double r2 = s.x * s.x + s.y * s.y + s.z * s.z;
      // Written so that NaN also counts as escaped.
      if (!(r2 <= escape_r2)) {
        L.alive[l] = 0;
        break;
      }
    }
    L.x[l] = s.x;
    L.y[l] = s.y;
    L.z[l] = s.z;
    L.vx[l] = s.vx;
    L.vy[l] = s.vy;
    L.vz[l] = s.vz;
  }
}

}  // namespace unf::kernels
