#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "unf/error.hpp"
#include "unf/model.hpp"
#include "unf/ode.hpp"

namespace unf {

/// Field functor for the normal form, usable directly by dopri5.
struct UnfField {
  UnfParams p;
  Vec<3> operator()(const Vec<3>& y) const {
    return {y[1], -(y[0] * y[0] + y[2] - 1.0) * y[0] - p.lambda * y[1], -p.alpha * y[2] + p.beta * y[0] * y[0]};
  }
};

inline constexpr double kDefaultSeedOffset = 1e-6;

// ---------------------------------------------------------------------------
// Unstable separatrix

/// Quadratic local approximation of the x > 0 branch of W^u at offset delta.
/// A negative delta gives the mirrored branch.
State unstable_seed(const UnfParams& p, double delta);

struct UnstableHit {
  double x_u = 0.0;
  double z_u = 0.0;
  /// Lifted angle of (x, y) accumulated from the launch point.
  double theta = 0.0;
  double t_flight = 0.0;
  /// |p^u(delta) - p^u(delta/2)|; zero when the check was skipped.
  double seed_shift = 0.0;
};

enum class UnstableFate { Hit, Escaped, ConvergedToFocus, EventNotFound, StepSizeUnderflow };

std::string_view to_string(UnstableFate f) noexcept;

struct UnstableShot {
  UnstableFate fate = UnstableFate::EventNotFound;
  std::optional<UnstableHit> hit;
  State last;
  double t_last = 0.0;
};

/// First crossing of W^u with S+ (y decreasing, x > 0, z > 0). Reports the
/// fate instead of throwing. A negative delta shoots the mirrored branch and
/// returns the crossing on S-.
UnstableShot try_shoot_unstable(const UnfParams& p, double delta, const IntegratorConfig& cfg);

/// Throws Escaped, ConvergedToFocus, EventNotFound, or NoConvergence when the
/// crossing moves by more than 1e-5 between delta and delta/2.
UnstableHit shoot_unstable(const UnfParams& p, double delta = kDefaultSeedOffset,
                           const IntegratorConfig& cfg = {});

// ---------------------------------------------------------------------------
// Return to the saddle

struct ReturnConfig {
  /// Half-width of the box |x|, |y| < tube below z = 1 + lambda^2/4 treated
  /// as the saddle neighbourhood.
  double tube = 0.1;
  double horizon = 600.0;
  /// Distance to E+- at which an orbit counts as captured by the focus.
  double focus_radius = 1e-4;
};

enum class ReturnKind { Exit, Focus, Escaped, Undecided };

/// Forward history of a point until it leaves the saddle neighbourhood along
/// one of the W^u directions.
struct SaddleReturn {
  ReturnKind kind = ReturnKind::Undecided;
  /// Exit side for Exit, focus side for Focus, 0 otherwise.
  int side = 0;
  /// Angle of (x, y) accumulated while z > 1 + lambda^2/4.
  double theta = 0.0;
  int half_turns = 0;
  /// Crossings of y = 0 above z = 1 + lambda^2/4.
  int high_crossings = 0;
  double time = 0.0;
};

SaddleReturn follow_to_saddle(const UnfParams& p, const State& s0, const IntegratorConfig& cfg,
                              const ReturnConfig& rc = {});

/// Exit side of the section point (x, 0, z): +1 or -1 when the orbit leaves
/// the saddle neighbourhood, 0 otherwise.
int exit_side(const UnfParams& p, double x, double z, const IntegratorConfig& cfg, const ReturnConfig& rc = {});

/// Locates the W^s trace on the section segment at height z between xa (exit
/// side sa != 0) and xb (exit side -sa) by bisection to |xb - xa| <= tol.
/// Returns nullopt when no sign-changing pair can be resolved.
std::optional<double> bisect_stable_trace(const UnfParams& p, double z, double xa, int sa, double xb,
                                          const IntegratorConfig& cfg, const ReturnConfig& rc, double tol);

// ---------------------------------------------------------------------------
// Stable manifold traces

struct StableSample {
  double z = 0.0;
  double x = 0.0;
};

struct StableCurve {
  std::vector<StableSample> samples;
  std::vector<double> zero_ladder;
  double z_star = 0.0;
};

struct StableCurveConfig {
  double eps = 1e-6;
  /// Number of uniform probes along the section segment per height.
  int probes = 64;
  double x_tol = 1e-9;
  double z_tol = 1e-9;
  ReturnConfig ret;
};

/// Sampled first trace x = x^s(z) of W^s on the section for n heights in
/// [z_lo, z_hi]. The sign of a sample is the exit side of points adjacent to
/// the invariant line, so the skirt below the first ladder height has x > 0.
StableCurve stable_curve(const UnfParams& p, double z_lo, double z_hi, int n, const IntegratorConfig& cfg = {},
                         const StableCurveConfig& sc = {});

/// x^s at one height. branch = -1 evaluates the mirrored trace on S-.
/// Throws OutOfRange beyond z_star, NoConvergence when no trace is found.
double stable_x_at(const UnfParams& p, double z_target, const IntegratorConfig& cfg = {},
                   const StableCurveConfig& sc = {}, int branch = 1);

// ---------------------------------------------------------------------------
// Rotation ladder of the tangent stable manifold

struct RiccatiLadder {
  /// Slope eta at the focus height (reverse time s = 0).
  double eta0 = 0.0;
  std::vector<double> tau;
  std::vector<double> zk;
  /// Aitken extrapolation of the tau sequence; +inf when the gaps do not
  /// contract geometrically.
  double T_inf = 0.0;
  double z_star = 0.0;
  bool truncated = false;
};

class LadderTruncatedError : public Error {
 public:
  LadderTruncatedError(const std::string& what, RiccatiLadder prefix)
      : Error(ErrorKind::LadderTruncated, what), prefix_(std::move(prefix)) {}
  const RiccatiLadder& prefix() const noexcept { return prefix_; }

 private:
  RiccatiLadder prefix_;
};

/// Ladder of reverse times tau_k at which lambda/2 + eta(tau_k) = 0, computed
/// on the projective angle of v'' + (z(s) - z_c) v = 0. Throws
/// LadderTruncatedError when fewer than k_max roots are found below z_limit.
RiccatiLadder riccati_tau(const UnfParams& p, int k_max, double z_limit = 1e4);

/// Reverse time s(z) = log(z / z_c) / alpha and the focus frequency
/// omega(s) = sqrt(z(s) - z_c).
double ladder_frequency(const UnfParams& p, double tau);

struct DomainB {
  int k = 0;
  double z_lo = 0.0;
  double z_hi = 0.0;
  int half_turns = 0;
  /// True for b_0, the saddle/node skirt.
  bool skirt = false;
};

std::vector<DomainB> domains_b(const UnfParams& p, int k_max);

// ---------------------------------------------------------------------------
// Auxiliary bounds

/// First positive x-axis crossing of the stable separatrix of
/// x' = y, y' = -(x^2 - 1) x - lambda y.
double aux_separatrix_x0(double lambda, const IntegratorConfig& cfg = {});

/// Layer heights z_{1,2} = C + B/2 -+ sqrt(B C + B^2/4) with
/// B = 4 c2 (lambda - c2), C = c1 + 1 - lambda c2.
std::pair<double, double> absorbing_layer(double lambda, double c1, double c2);

/// True when the quadratic form c2 (z - 1) x^2 - (C - z) x y + (lambda - c2) y^2
/// is positive definite, i.e. the Lyapunov function derivative is negative.
bool layer_form_definite(double lambda, double c1, double c2, double z);

/// M_inf = int_0^inf exp(-lambda t) sin^2(Omega t + phi) dt in closed form.
double small_alpha_m_inf(double lambda, double Omega, double phi);

/// z_u = z0 + beta rho^2 M_inf for the alpha -> 0 limit.
double small_alpha_zu(double beta, double z0, double rho, double phi, double lambda, double Omega);

}  // namespace unf
