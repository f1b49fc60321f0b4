#include <cstdlib>
#include <string>

#include "unf/error.hpp"
#include "unf/kernels/tangent_rk4.hpp"

namespace unf::kernels {

bool avx2_available() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

AdvanceFn select(Kernel k) {
  if (k == Kernel::Auto) {
    if (const char* env = std::getenv("UNF_KERNEL")) {
      const std::string v(env);
      if (v == "scalar") k = Kernel::Scalar;
      else if (v == "avx2") k = Kernel::Avx2;
    }
  }
  switch (k) {
    case Kernel::Scalar: return &advance_scalar;
    case Kernel::Avx2:
      if (!avx2_available()) throw Error(ErrorKind::InvalidDomain, "AVX2 kernel requested on a CPU without AVX2");
      return &advance_avx2;
    case Kernel::Auto: break;
  }
  return avx2_available() ? &advance_avx2 : &advance_scalar;
}

std::string_view kernel_name(AdvanceFn f) noexcept {
  if (f == &advance_avx2) return "avx2";
  if (f == &advance_scalar) return "scalar";
  return "unknown";
}

}  // namespace unf::kernels
