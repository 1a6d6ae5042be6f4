#include "phasesep/simd.hpp"

namespace phasesep::simd {
namespace {

void ring_stiffness(const double* inner, const double* mid, const double* outer, double* out,
                    std::size_t n, double c_in, double c_out, double c_ang) {
  for (std::size_t j = 0; j < n; ++j) {
    const double prev = mid[j == 0 ? n - 1 : j - 1];
    const double next = mid[j + 1 == n ? 0 : j + 1];
    out[j] = c_in * (mid[j] - inner[j]) + c_out * (mid[j] - outer[j]) +
             c_ang * (2.0 * mid[j] - prev - next);
  }
}

double weighted_dot(const double* w, const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += w[j] * a[j] * b[j];
  return s;
}

double weighted_square_product(const double* w, const double* a, const double* b,
                               std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double ab = a[j] * b[j];
    s += w[j] * ab * ab;
  }
  return s;
}

double squared_difference(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

double cyclic_squared_increment(const double* a, std::size_t n) {
  if (n == 0) return 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double d = a[j + 1] - a[j];
    s += d * d;
  }
  const double d = a[0] - a[n - 1];
  return s + d * d;
}

void cubic_coupling(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] = a[j] * b[j] * b[j];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{ring_stiffness,         weighted_dot,
                                 weighted_square_product, squared_difference,
                                 cyclic_squared_increment, cubic_coupling,
                                 "scalar"};
  return table;
}

}  // namespace phasesep::simd
