// Compiled with -mavx2 -mfma; only reached through the runtime dispatch.
#include <immintrin.h>

#include "phasesep/simd.hpp"

namespace phasesep::simd {
namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void ring_stiffness(const double* inner, const double* mid, const double* outer, double* out,
                    std::size_t n, double c_in, double c_out, double c_ang) {
  auto scalar_at = [&](std::size_t j) {
    const double prev = mid[j == 0 ? n - 1 : j - 1];
    const double next = mid[j + 1 == n ? 0 : j + 1];
    out[j] = c_in * (mid[j] - inner[j]) + c_out * (mid[j] - outer[j]) +
             c_ang * (2.0 * mid[j] - prev - next);
  };
  if (n < 6) {
    for (std::size_t j = 0; j < n; ++j) scalar_at(j);
    return;
  }
  const __m256d vin = _mm256_set1_pd(c_in);
  const __m256d vout = _mm256_set1_pd(c_out);
  const __m256d vang = _mm256_set1_pd(c_ang);
  const __m256d two = _mm256_set1_pd(2.0);
  scalar_at(0);
  std::size_t j = 1;
  for (; j + 4 < n; j += 4) {
    const __m256d m = _mm256_loadu_pd(mid + j);
    const __m256d p = _mm256_loadu_pd(mid + j - 1);
    const __m256d q = _mm256_loadu_pd(mid + j + 1);
    const __m256d a = _mm256_sub_pd(m, _mm256_loadu_pd(inner + j));
    const __m256d b = _mm256_sub_pd(m, _mm256_loadu_pd(outer + j));
    const __m256d lap = _mm256_sub_pd(_mm256_sub_pd(_mm256_mul_pd(two, m), p), q);
    __m256d acc = _mm256_mul_pd(vin, a);
    acc = _mm256_fmadd_pd(vout, b, acc);
    acc = _mm256_fmadd_pd(vang, lap, acc);
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < n; ++j) scalar_at(j);
}

double weighted_dot(const double* w, const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + j), _mm256_loadu_pd(a + j)),
                           _mm256_loadu_pd(b + j), acc0);
    acc1 = _mm256_fmadd_pd(
        _mm256_mul_pd(_mm256_loadu_pd(w + j + 4), _mm256_loadu_pd(a + j + 4)),
        _mm256_loadu_pd(b + j + 4), acc1);
  }
  double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; j < n; ++j) s += w[j] * a[j] * b[j];
  return s;
}

double weighted_square_product(const double* w, const double* a, const double* b,
                               std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j));
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + j), ab), ab, acc);
  }
  double s = horizontal_sum(acc);
  for (; j < n; ++j) {
    const double ab = a[j] * b[j];
    s += w[j] * ab * ab;
  }
  return s;
}

double squared_difference(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = horizontal_sum(acc);
  for (; j < n; ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

double cyclic_squared_increment(const double* a, std::size_t n) {
  if (n == 0) return 0.0;
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 5 <= n; j += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + j + 1), _mm256_loadu_pd(a + j));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = horizontal_sum(acc);
  for (; j + 1 < n; ++j) {
    const double d = a[j + 1] - a[j];
    s += d * d;
  }
  const double d = a[0] - a[n - 1];
  return s + d * d;
}

void cubic_coupling(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d vb = _mm256_loadu_pd(b + j);
    _mm256_storeu_pd(out + j, _mm256_mul_pd(_mm256_mul_pd(_mm256_loadu_pd(a + j), vb), vb));
  }
  for (; j < n; ++j) out[j] = a[j] * b[j] * b[j];
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{ring_stiffness,         weighted_dot,
                                 weighted_square_product, squared_difference,
                                 cyclic_squared_increment, cubic_coupling,
                                 "avx2"};
  return &table;
}

}  // namespace phasesep::simd
