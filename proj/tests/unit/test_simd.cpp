#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "phasesep/simd.hpp"

using namespace phasesep;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = uni(rng);
  return v;
}

void compare(const simd::KernelTable& a, const simd::KernelTable& b) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {4u, 5u, 7u, 8u, 16u, 33u, 512u, 1027u}) {
    const auto x = random_vector(n, rng);
    const auto y = random_vector(n, rng);
    const auto z = random_vector(n, rng);
    const auto w = random_vector(n, rng);
    std::vector<double> oa(n), ob(n);
    a.ring_stiffness(x.data(), y.data(), z.data(), oa.data(), n, 0.3, 0.7, 1.9);
    b.ring_stiffness(x.data(), y.data(), z.data(), ob.data(), n, 0.3, 0.7, 1.9);
    for (std::size_t i = 0; i < n; ++i) CHECK(oa[i] == doctest::Approx(ob[i]).epsilon(1e-13));
    a.cubic_coupling(x.data(), y.data(), oa.data(), n);
    b.cubic_coupling(x.data(), y.data(), ob.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(oa[i] == doctest::Approx(ob[i]).epsilon(1e-14));
    CHECK(a.weighted_dot(w.data(), x.data(), y.data(), n) ==
          doctest::Approx(b.weighted_dot(w.data(), x.data(), y.data(), n)).epsilon(1e-12));
    CHECK(a.weighted_square_product(w.data(), x.data(), y.data(), n) ==
          doctest::Approx(b.weighted_square_product(w.data(), x.data(), y.data(), n)).epsilon(1e-12));
    CHECK(a.squared_difference(x.data(), y.data(), n) ==
          doctest::Approx(b.squared_difference(x.data(), y.data(), n)).epsilon(1e-12));
    CHECK(a.cyclic_squared_increment(x.data(), n) ==
          doctest::Approx(b.cyclic_squared_increment(x.data(), n)).epsilon(1e-12));
  }
}

}  // namespace

TEST_CASE("scalar kernels on known inputs") {
  const auto& k = simd::scalar_kernels();
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{2, 0, 1, 1};
  const std::vector<double> w{1, 1, 2, 0.5};
  CHECK(k.weighted_dot(w.data(), a.data(), b.data(), 4) == doctest::Approx(2 + 0 + 6 + 2));
  CHECK(k.squared_difference(a.data(), b.data(), 4) == doctest::Approx(1 + 4 + 4 + 9));
  CHECK(k.cyclic_squared_increment(a.data(), 4) == doctest::Approx(1 + 1 + 1 + 9));
  std::vector<double> out(4);
  k.cubic_coupling(a.data(), b.data(), out.data(), 4);
  CHECK(out == std::vector<double>{4, 0, 3, 4});
  // Constant ring between constant neighbours: only radial terms remain.
  const std::vector<double> in(4, 1.0), mid(4, 2.0), outer(4, 5.0);
  k.ring_stiffness(in.data(), mid.data(), outer.data(), out.data(), 4, 1.0, 2.0, 3.0);
  for (double x : out) CHECK(x == doctest::Approx(1.0 * (2 - 1) + 2.0 * (2 - 5)));
}

TEST_CASE("vector kernels agree with the scalar reference") {
  const auto* avx = simd::avx2_kernels();
  if (avx == nullptr || !simd::cpu_supports_avx2()) {
    MESSAGE("AVX2 kernels unavailable; comparing the scalar table with itself");
    compare(simd::scalar_kernels(), simd::scalar_kernels());
    return;
  }
  compare(simd::scalar_kernels(), *avx);
}

TEST_CASE("active table is named") {
  const std::string name(simd::active_kernel_name());
  CHECK((name == "scalar" || name == "avx2"));
  CHECK(name == simd::kernels().name);
}
