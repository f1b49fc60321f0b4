#include <immintrin.h>

#include <bit>

#include "unf/kernels/tangent_rk4.hpp"

namespace unf::kernels {

namespace {

struct V6 {
  __m256d x, y, z, vx, vy, vz;
};

inline __m256d neg(__m256d a) { return _mm256_xor_pd(a, _mm256_set1_pd(-0.0)); }
inline __m256d add(__m256d a, __m256d b) { return _mm256_add_pd(a, b); }
inline __m256d sub(__m256d a, __m256d b) { return _mm256_sub_pd(a, b); }
inline __m256d mul(__m256d a, __m256d b) { return _mm256_mul_pd(a, b); }

inline V6 rhs(const V6& s, __m256d lam, __m256d alp, __m256d bet) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d xx = mul(s.x, s.x);
  const __m256d q = sub(add(xx, s.z), one);
  const __m256d dq = sub(add(mul(xx, three), s.z), one);
  V6 d;
  d.x = s.y;
  d.y = sub(neg(mul(q, s.x)), mul(lam, s.y));
  d.z = sub(mul(bet, xx), mul(alp, s.z));
  d.vx = s.vy;
  d.vy = sub(sub(neg(mul(dq, s.vx)), mul(lam, s.vy)), mul(s.x, s.vz));
  d.vz = sub(mul(mul(mul(bet, two), s.x), s.vx), mul(alp, s.vz));
  return d;
}

inline V6 axpy(const V6& s, __m256d h, const V6& k) {
  return {add(s.x, mul(h, k.x)),   add(s.y, mul(h, k.y)),   add(s.z, mul(h, k.z)),
          add(s.vx, mul(h, k.vx)), add(s.vy, mul(h, k.vy)), add(s.vz, mul(h, k.vz))};
}

inline __m256d combine(__m256d s, __m256d h6, __m256d k1, __m256d k2, __m256d k3, __m256d k4) {
  const __m256d two = _mm256_set1_pd(2.0);
  return add(s, mul(h6, add(add(add(k1, mul(k2, two)), mul(k3, two)), k4)));
}

inline __m256d blend(__m256d old_v, __m256d new_v, __m256d live) { return _mm256_blendv_pd(old_v, new_v, live); }

}  // namespace

void advance_avx2(TangentLanes& L, double dt, int steps, double escape_r2) {
  const __m256d h = _mm256_set1_pd(dt);
  const __m256d h2 = _mm256_set1_pd(dt * 0.5);
  const __m256d h6 = _mm256_set1_pd(dt / 6.0);
  const __m256d r2max = _mm256_set1_pd(escape_r2);
  const __m256d lam = _mm256_load_pd(L.lambda);
  const __m256d alp = _mm256_load_pd(L.alpha);
  const __m256d bet = _mm256_load_pd(L.beta);
  __m256d live = _mm256_castsi256_pd(
      _mm256_cmpgt_epi64(_mm256_load_si256(reinterpret_cast<const __m256i*>(L.alive)), _mm256_setzero_si256()));
  V6 s{_mm256_load_pd(L.x),  _mm256_load_pd(L.y),  _mm256_load_pd(L.z),
       _mm256_load_pd(L.vx), _mm256_load_pd(L.vy), _mm256_load_pd(L.vz)};
  for (int i = 0; i < steps && _mm256_movemask_pd(live) != 0; ++i) {
    const V6 k1 = rhs(s, lam, alp, bet);
    const V6 k2 = rhs(axpy(s, h2, k1), lam, alp, bet);
    const V6 k3 = rhs(axpy(s, h2, k2), lam, alp, bet);
    const V6 k4 = rhs(axpy(s, h, k3), lam, alp, bet);
    V6 n;
    n.x = combine(s.x, h6, k1.x, k2.x, k3.x, k4.x);
    n.y = combine(s.y, h6, k1.y, k2.y, k3.y, k4.y);
    n.z = combine(s.z, h6, k1.z, k2.z, k3.z, k4.z);
    n.vx = combine(s.vx, h6, k1.vx, k2.vx, k3.vx, k4.vx);
    n.vy = combine(s.vy, h6, k1.vy, k2.vy, k3.vy, k4.vy);
    n.vz = combine(s.vz, h6, k1.vz, k2.vz, k3.vz, k4.vz);
    s.x = blend(s.x, n.x, live);
    s.y = blend(s.y, n.y, live);
    s.z = blend(s.z, n.z, live);
    s.vx = blend(s.vx, n.vx, live);
    s.vy = blend(s.vy, n.vy, live);
    s.vz = blend(s.vz, n.vz, live);
    const __m256d r2 = add(add(mul(n.x, n.x), mul(n.y, n.y)), mul(n.z, n.z));
    // Ordered, non-signalling <=: NaN compares false and the lane escapes.
    live = _mm256_and_pd(live, _mm256_cmp_pd(r2, r2max, _CMP_LE_OQ));
  }
  _mm256_store_pd(L.x, s.x);
  _mm256_store_pd(L.y, s.y);
  _mm256_store_pd(L.z, s.z);
  _mm256_store_pd(L.vx, s.vx);
  _mm256_store_pd(L.vy, s.vy);
  _mm256_store_pd(L.vz, s.vz);
  alignas(32) double mask[kLanes];
  _mm256_store_pd(mask, live);
  for (int l = 0; l < kLanes; ++l) {
    if (std::bit_cast<std::int64_t>(mask[l]) == 0) L.alive[l] = 0;
  }
}

}  // namespace unf::kernels
