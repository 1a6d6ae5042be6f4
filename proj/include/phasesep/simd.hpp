#pragma once

// Data-parallel inner loops used by the polar-grid operators. Every kernel
// has a scalar reference implementation; an AVX2+FMA variant is selected at
// runtime when the CPU supports it. Setting PHASESEP_SIMD=scalar in the
// environment forces the reference path.

#include <cstddef>
#include <string_view>

namespace phasesep::simd {

struct KernelTable {
  // out[j] = c_in*(mid[j]-inner[j]) + c_out*(mid[j]-outer[j])
  //        + c_ang*(2*mid[j]-mid[j-1]-mid[j+1])      (j cyclic mod n)
  void (*ring_stiffness)(const double* inner, const double* mid, const double* outer,
                         double* out, std::size_t n, double c_in, double c_out, double c_ang);
  // sum_j w[j]*a[j]*b[j]
  double (*weighted_dot)(const double* w, const double* a, const double* b, std::size_t n);
  // sum_j w[j]*a[j]^2*b[j]^2
  double (*weighted_square_product)(const double* w, const double* a, const double* b,
                                    std::size_t n);
  // sum_j (a[j]-b[j])^2
  double (*squared_difference)(const double* a, const double* b, std::size_t n);
  // sum_j (a[j+1]-a[j])^2 with a[n] == a[0]
  double (*cyclic_squared_increment)(const double* a, std::size_t n);
  // out[j] = a[j]*b[j]^2
  void (*cubic_coupling)(const double* a, const double* b, double* out, std::size_t n);
  const char* name;
};

const KernelTable& scalar_kernels();
// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_kernels();

// The table chosen for this process (resolved once).
const KernelTable& kernels();
std::string_view active_kernel_name();
bool cpu_supports_avx2();

}  // namespace phasesep::simd
