#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "unf/kernels/tangent_rk4.hpp"
#include "unf/model.hpp"

namespace unf {

struct LyapunovConfig {
  double t_transient = 200.0;
  double t_total = 2000.0;
  double renorm_dt = 1.0;
  /// Fixed RK4 step shared by the scalar and AVX2 kernels.
  double dt = 0.01;
  double escape_radius = 50.0;
  /// A run is converged when its uncertainty is at most
  /// max(converge_tol, converge_rel * |Lambda|), i.e. small or sign-definite.
  double converge_tol = 2.5e-3;
  double converge_rel = 0.25;
  kernels::Kernel kernel = kernels::Kernel::Auto;

  /// Throws InvalidDomain unless t_total > t_transient > 0 and the step
  /// divides renorm_dt into a whole number of steps.
  void validate() const;
};

struct LyapunovResult {
  double Lambda = 0.0;
  double t_used = 0.0;
  bool converged = false;
  /// Twice the largest gap between the running average and Lambda over the
  /// last quarter of the averaging window.
  double uncertainty = 0.0;
  /// Lambda is +inf when set.
  bool escaped = false;
};

/// Benettin estimate of the largest exponent from s0. Escape is reported in
/// the result rather than thrown so that sweeps can record it per cell.
LyapunovResult largest_lyapunov(const UnfParams& p, const State& s0, const LyapunovConfig& cfg = {});

/// Same as calling largest_lyapunov per element; evaluated four at a time.
std::vector<LyapunovResult> largest_lyapunov_batch(std::span<const UnfParams> p, std::span<const State> s0,
                                                   const LyapunovConfig& cfg = {});

/// Default starting point: the x > 0 branch of W^u at the default offset.
State default_lyapunov_start(const UnfParams& p);

enum class AttractorClass { Chaotic, Periodic, Equilibrium, Diverged, Error };

std::string_view to_string(AttractorClass c) noexcept;
/// Single-letter code used in sweep files: C, P, E, D, X.
char class_code(AttractorClass c) noexcept;
AttractorClass class_from_code(char c);

/// Throws Unconverged when the result is neither converged nor escaped.
AttractorClass classify_attractor(const LyapunovResult& r, double eps_zero = 5e-3);

}  // namespace unf
