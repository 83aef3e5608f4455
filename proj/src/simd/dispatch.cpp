#include <cstdlib>
#include <string_view>

#include "fpp/simd.hpp"

namespace fpp::simd {

#if defined(FPP_HAVE_AVX2_KERNELS)
const KernelTable* avx2_table_unchecked() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(FPP_HAVE_AVX2_KERNELS)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() noexcept {
  static const KernelTable* active = [] {
    const char* env = std::getenv("FPP_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
  }();
  return *active;
}

}  // namespace fpp::simd
