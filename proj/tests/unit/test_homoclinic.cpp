#include <cmath>
#include <numbers>

#include "doctest.h"
#include "unf/homoclinic.hpp"

using namespace unf;

namespace {

constexpr double kPi = std::numbers::pi;

// Closest approach of the x > 0 branch of W^u to the saddle (or, with
// to_axis, to the invariant z-axis below z_c) after it has first moved away
// to distance 0.5.
double return_distance(const UnfParams& p, double t_max, bool to_axis = false) {
  IntegratorConfig cfg;
  cfg.rtol = 1e-12;
  cfg.atol = 1e-14;
  bool away = false;
  double best = 1e300;
  auto obs = [&](const DenseStep<3>& ds) {
    const double r = std::sqrt(ds.y1[0] * ds.y1[0] + ds.y1[1] * ds.y1[1] + ds.y1[2] * ds.y1[2]);
    if (r > 0.5) away = true;
    if (away && !to_axis) best = std::min(best, r);
    if (away && to_axis && ds.y1[2] < p.focus_height()) best = std::min(best, std::hypot(ds.y1[0], ds.y1[1]));
    return false;
  };
  dopri5<3>(UnfField{p}, to_vec(unstable_seed(p, 1e-6)), 0.0, t_max, cfg, obs);
  return best;
}

}  // namespace

TEST_CASE("winding half-turns") {
  CHECK(winding_half_turns(0.0) == 0);
  CHECK(winding_half_turns(0.9 * kPi) == 0);
  CHECK(winding_half_turns(-1.2 * kPi) == 1);
  // A planar curve winding twice around the axis.
  double theta = 0;
  AngleTracker t(1.0, 0.0);
  for (int i = 1; i <= 400; ++i) theta += t.feed(std::cos(4 * kPi * i / 400), std::sin(4 * kPi * i / 400));
  CHECK(theta == doctest::Approx(4 * kPi));
  CHECK(winding_half_turns(theta + 1e-9) == 4);
}

TEST_CASE("orientation parity") {
  for (int k = 0; k < 8; ++k) CHECK((orientation_of(k) == Orientation::Oriented) == (k % 2 == 0));
  CHECK(to_string(Orientation::NonOriented) == "NonOriented");
}

TEST_CASE("W^u fate") {
  CHECK(classify_wu_fate({2.0, 0.35, 1.05487}, {}, true).kind == FateKind::ConvergedToFocusPlus);
  CHECK(classify_wu_fate({2.0, 0.35, 1.05487}).kind == FateKind::SectionHit);
  CHECK(classify_wu_fate({0.0, 0.2, 1.0}, {}, true).kind == FateKind::Diverged);
  const auto chen = classify_wu_fate({0.26, 0.11, 2.47});
  CHECK(chen.kind == FateKind::SectionHit);
  CHECK(chen.position.x > 0);
  CHECK(std::abs(chen.position.y) < 1e-9);
  CHECK(to_string(FateKind::Diverged) == "Diverged");
}

TEST_CASE("split function signs") {
  const auto big = split_function({2.0, 0.35, 1.05487});
  CHECK(big.delta < 0);
  CHECK(big.inside);
  CHECK(big.k == 0);
  CHECK(split_root_value(big) > 0);
  bool outside_or_lost = false;
  try {
    outside_or_lost = split_function({0.02, 0.35, 1.05487}).delta > 0;
  } catch (const FateInterferenceError&) {
    outside_or_lost = true;
  }
  CHECK(outside_or_lost);
  const auto near = split_function({0.74564, 0.314, 1.05487});
  CHECK(std::abs(near.delta) < 1e-3);
  CHECK(near.k == 0);
  CHECK(near.x_u > 0);
  CHECK(std::abs(near.delta) == doctest::Approx(std::abs(near.x_u - near.x_s)));
}

TEST_CASE("split function is continuous between flips") {
  double prev = split_function({0.80, 0.314, 1.05487}).delta;
  for (int i = 1; i <= 10; ++i) {
    const double l = 0.80 + 0.002 * i;
    const auto r = split_function({l, 0.314, 1.05487});
    REQUIRE(r.trace_found);
    CHECK(std::abs(r.delta - prev) < 0.02);
    prev = r.delta;
  }
}

TEST_CASE("principal homoclinic butterfly") {
  const auto b = find_lambda0(0.314, 1.05487, 0.6, 0.9);
  CHECK(b.k == 0);
  CHECK(b.orientation == Orientation::Oriented);
  CHECK(std::abs(b.params.lambda - 0.74564) < 5e-3);
  CHECK(b.bracket_hi - b.bracket_lo <= 1e-6);
  const auto fine = find_lambda0(0.314, 1.05487, 0.6, 0.9, 1e-7);
  CHECK(std::abs(fine.params.lambda - b.params.lambda) < 1e-6);
  CHECK(return_distance(b.params, 60.0) < 1e-3);
  // Away from the root the returning orbit misses the saddle.
  CHECK(return_distance({0.70, 0.314, 1.05487}, 60.0) > 1e-2);
}

TEST_CASE("lambda_0 grows away from the origin of (alpha, beta)") {
  // At small (alpha, beta) p^u is inside b_0 already at lambda = 0.1.
  CHECK(split_function({0.1, 0.02, 0.02}).delta < 0);
  const auto b = find_lambda0(0.3, 1.0, 0.70, 0.75);
  CHECK(b.params.lambda > 0.1);
}

TEST_CASE("first non-oriented butterfly") {
  const auto b = find_alpha_k(0.6296, 2.47, 1, 0.17, 0.20);
  CHECK(b.k == 1);
  CHECK(b.half_turns == 1);
  CHECK(b.orientation == Orientation::NonOriented);
  CHECK(std::abs(b.params.alpha - 0.184) < 5e-3);
  // The orbit slides down the z-axis at rate alpha while the residual grows at
  // rate e1, so closure is measured against the axis, which lies in W^s.
  CHECK(return_distance(b.params, 80.0, true) < 1e-3);
  CHECK(return_distance({0.6296, 0.17, 2.47}, 80.0, true) > 1e-2);
}

TEST_CASE("root finder errors") {
  CHECK_THROWS_AS(find_lambda0(0.314, 1.05487, 0.85, 0.95), Error);
  try {
    find_lambda0(0.314, 1.05487, 0.85, 0.95);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BracketNotSignChanging);
  }
  try {
    find_alpha_k(0.6296, 2.47, 0, 0.17, 0.20);
    FAIL("expected TwistMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TwistMismatch);
  }
  try {
    find_lambda0(0.35, 1.05487, 0.02, 2.0);
    FAIL("expected interference");
  } catch (const FateInterferenceError& e) {
    REQUIRE(e.sub_bracket());
    CHECK(e.sub_bracket()->first >= 0.02);
    CHECK(e.sub_bracket()->second <= 2.0);
  }
}

TEST_CASE("twisted regime scan") {
  const auto changes = scan_sign_changes([](double a) { return UnfParams{0.3, a, 2.47}; }, 0.02, 0.08, 60);
  REQUIRE(!changes.empty());
  int max_k = 0;
  for (const auto& c : changes) {
    CHECK(c.lo < c.hi);
    if (c.k_lo == c.k_hi) max_k = std::max(max_k, c.k_lo);
  }
  CHECK(max_k >= 2);
}

TEST_CASE("symbolic sequences") {
  const UnfParams lorenz{0.6694, 0.1623, 1.05487};
  const auto s = symbolic_sequence(lorenz, unstable_seed(lorenz, 1e-6), 200);
  REQUIRE(s.size() == 200);
  int r = 0;
  for (const auto& y : s) {
    CHECK(y.half_turns == 0);
    r += y.side == 'R';
  }
  CHECK(r > 40);
  CHECK(r < 160);

  const UnfParams chen{0.26, 0.11, 2.47};
  const auto c = symbolic_sequence(chen, unstable_seed(chen, 1e-6), 500);
  int twisted = 0;
  for (const auto& y : c) twisted += y.half_turns >= 1;
  CHECK(twisted >= 1);

  // Lorenz r = 350 has a stable symmetric cycle: RL repeated.
  const UnfParams cyc = map_p(GlParams::lorenz(10, 8.0 / 3, 350));
  const auto q = symbolic_sequence(cyc, unstable_seed(cyc, 1e-6), 60);
  for (std::size_t i = 20; i < q.size(); ++i) {
    CHECK(q[i].side != q[i - 1].side);
    CHECK(q[i].half_turns == 0);
  }
  CHECK_THROWS_AS(symbolic_sequence({2.0, 0.35, 1.05487}, unstable_seed({2.0, 0.35, 1.05487}, 1e-6), 10),
                  FateInterferenceError);
  CHECK_THROWS_AS(symbolic_sequence({0.0, 0.2, 1.0}, unstable_seed({0.0, 0.2, 1.0}, 1e-6), 500),
                  FateInterferenceError);
}
