#include <cstdlib>
#include <string_view>

#include "dvlae/log.hpp"
#include "dvlae/simd/kernels.hpp"

namespace dvlae::simd {

#if defined(DVLAE_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(DVLAE_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& resolve() {
  const char* forced = std::getenv("DVLAE_SIMD");
  const std::string_view choice = forced != nullptr ? forced : "";
  if (choice == "scalar") return scalar_kernels();
  const KernelTable* avx2 = avx2_kernels();
  if (choice == "avx2" && avx2 == nullptr) {
    warn("DVLAE_SIMD=avx2 requested but AVX2 kernels are unavailable; using scalar");
  }
  return avx2 != nullptr ? *avx2 : scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace dvlae::simd
