#include <cstdlib>
#include <string>

#include "phasesep/simd.hpp"

namespace phasesep::simd {

#ifndef PHASESEP_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports_avx2() {
#if defined(PHASESEP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable& resolve() {
  const char* forced = std::getenv("PHASESEP_SIMD");
  if (forced != nullptr && std::string(forced) == "scalar") return scalar_kernels();
  if (const KernelTable* avx = avx2_kernels(); avx != nullptr && cpu_supports_avx2()) {
    return *avx;
  }
  return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& table = resolve();
  return table;
}

std::string_view active_kernel_name() { return kernels().name; }

}  // namespace phasesep::simd
