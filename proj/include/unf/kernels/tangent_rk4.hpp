#pragma once

#include <cstdint>
#include <string_view>

namespace unf::kernels {

inline constexpr int kLanes = 4;

/// Four independent UNF trajectories with one tangent vector each, stored
/// lane-major so the AVX2 kernel can load every field as one register.
struct alignas(32) TangentLanes {
  double x[kLanes], y[kLanes], z[kLanes];
  double vx[kLanes], vy[kLanes], vz[kLanes];
  double lambda[kLanes], alpha[kLanes], beta[kLanes];
  /// Lanes with alive == 0 are frozen; the kernel clears it on escape.
  std::int64_t alive[kLanes];
};

/// Advances every live lane by `steps` classical RK4 steps of size dt on the
/// state and its variational equation. A lane whose |state|^2 exceeds
/// escape_r2 after a step is frozen at that step.
using AdvanceFn = void (*)(TangentLanes&, double dt, int steps, double escape_r2);

void advance_scalar(TangentLanes& L, double dt, int steps, double escape_r2);
void advance_avx2(TangentLanes& L, double dt, int steps, double escape_r2);

enum class Kernel { Auto, Scalar, Avx2 };

bool avx2_available() noexcept;

/// Auto picks AVX2 when the CPU supports it; UNF_KERNEL=scalar|avx2 in the
/// environment overrides Auto. Requesting Avx2 on a CPU without it throws.
AdvanceFn select(Kernel k = Kernel::Auto);

std::string_view kernel_name(AdvanceFn f) noexcept;

}  // namespace unf::kernels
