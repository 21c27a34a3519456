#include <cstdlib>
#include <string_view>

#include "wetting/simd/kernels.hpp"

namespace wetting::simd {

const Kernels& avx2_kernels_impl();

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* env = std::getenv("WETTING_LAB_ISA");
    if (env && std::string_view(env) == "scalar") return Isa::scalar;
    return avx2_available() ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

const Kernels& avx2_kernels() { return avx2_kernels_impl(); }

const Kernels& kernels(Isa isa) {
  if (isa == Isa::avx2 && avx2_available()) return avx2_kernels_impl();
  return scalar_kernels();
}

}  // namespace wetting::simd
