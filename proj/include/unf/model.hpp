#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string_view>

namespace unf {

/// Phase-space point of a 3D system.
struct State {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr State operator+(State a, State b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr State operator-(State a, State b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr State operator*(double s, State a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(State, State) = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  /// Image under the involution (x, y, z) -> (-x, -y, z).
  constexpr State mirrored() const { return {-x, -y, z}; }
};

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Parameters (lambda, alpha, beta) of the universal normal form
///   x' = y,  y' = -(x^2 + z - 1) x - lambda y,  z' = -alpha z + beta x^2.
struct UnfParams {
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  /// Characteristic parameter A = (alpha + beta) / 2.
  double A() const { return 0.5 * (alpha + beta); }
  /// Saddle/node vs focus boundary of the linearization along the z-axis.
  double focus_height() const { return 1.0 + 0.25 * lambda * lambda; }
  bool finite() const { return std::isfinite(lambda) && std::isfinite(alpha) && std::isfinite(beta); }
  bool positive() const { return lambda > 0.0 && alpha > 0.0 && beta > 0.0; }
};

/// Generalized Lorenz system x' = -a(x - y), y' = (r - z)x - q y, z' = xy - b z.
struct GlParams {
  double a = 0.0;
  double b = 0.0;
  double r = 0.0;
  double q = 0.0;

  /// Time scale omega = 1/sqrt(a (r - q)); NaN outside the conjugacy domain.
  double omega() const { return 1.0 / std::sqrt(a * (r - q)); }

  static GlParams lorenz(double a, double b, double r) { return {a, b, r, 1.0}; }
  static GlParams chen(double a, double b, double c) { return {a, b, c - a, -c}; }
  static GlParams lu(double a, double b, double c) { return {a, b, 0.0, -c}; }
  static GlParams tigan(double a, double b, double c) { return {a, b, c - a, 0.0}; }
};

struct TimedState {
  State state;
  double t = 0.0;
};

struct SaddleSpectrum {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  /// Shilnikov saddle quantity (1 - alpha^2)/alpha - lambda; empty when alpha == 0.
  std::optional<double> sigma;

  bool alpha_zero() const { return !sigma.has_value(); }
  bool shilnikov() const { return sigma && *sigma > 0.0; }
};

struct Equilibria {
  State origin;
  /// Absent when alpha + beta == 0.
  std::optional<State> e_plus;
  std::optional<State> e_minus;
};

enum class Zone { LorenzLike, ChenLike, TiganBoundary };

std::string_view to_string(Zone zone) noexcept;

struct RegionLabel {
  Zone zone = Zone::TiganBoundary;
  bool on_chen_curve = false;
  bool on_lu_curve = false;
};

inline constexpr double kDefaultZoneTolerance = 1e-9;

inline State unf_vector_field(const UnfParams& p, const State& s) {
  return {s.y, -(s.x * s.x + s.z - 1.0) * s.x - p.lambda * s.y, -p.alpha * s.z + p.beta * s.x * s.x};
}

Mat3 unf_jacobian(const UnfParams& p, const State& s);

inline State gl_vector_field(const GlParams& g, const State& s) {
  return {-g.a * (s.x - s.y), (g.r - s.z) * s.x - g.q * s.y, s.x * s.y - g.b * s.z};
}

Mat3 gl_jacobian(const GlParams& g, const State& s);

/// O, E+ and E-. The symmetric pair is omitted when alpha + beta == 0.
Equilibria equilibria(const UnfParams& p);
/// E+ or throws DegenerateParameters.
State focus_plus(const UnfParams& p);

SaddleSpectrum saddle_spectrum(const UnfParams& p);

/// Andronov-Hopf threshold lambda_s(alpha, beta) of the foci E+-.
double hopf_threshold(double alpha, double beta);

/// Coordinate and time change taking generalized Lorenz to the normal form.
TimedState map_v(const GlParams& g, const State& s, double t);
TimedState map_v_inverse(const GlParams& g, const State& s_unf, double t);
/// Jacobian of the spatial part of map_v (constant in t).
Mat3 map_v_jacobian(const GlParams& g, const State& s);

/// Parameter map (a, b, r, q) -> (lambda, alpha, beta).
UnfParams map_p(const GlParams& g);

inline double characteristic_A(const UnfParams& p) { return p.A(); }

/// Lorenz-like / Chen-like zone and Chen/Lu curve membership. Tolerances are
/// relative to max(1, A).
RegionLabel classify_region(const UnfParams& p, double tol = kDefaultZoneTolerance);

/// Large-beta rescaling x -> sqrt(beta/alpha) x, y -> sqrt(beta/alpha) y giving
///   x' = y,  y' = -(mu x^2 + z - 1) x - lambda y,  z' = alpha (x^2 - z).
struct ShimizuMorioka {
  double mu = 0.0;
  double scale = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;

  State field(const State& s) const {
    return {s.y, -(mu * s.x * s.x + s.z - 1.0) * s.x - lambda * s.y, alpha * (s.x * s.x - s.z)};
  }
  State to_rescaled(const State& s) const { return {scale * s.x, scale * s.y, s.z}; }
  State from_rescaled(const State& s) const { return {s.x / scale, s.y / scale, s.z}; }
};

ShimizuMorioka shimizu_rescale(const UnfParams& p);

}  // namespace unf
