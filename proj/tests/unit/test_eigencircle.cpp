#include <doctest.h>

#include <cmath>

#include "phasesep/eigencircle.hpp"
#include "phasesep/error.hpp"

using namespace phasesep;

namespace {

CircleConfig config(int d, double Lambda) {
  CircleConfig c;
  c.d = d;
  c.Lambda = Lambda;
  c.n = 1152;
  return c;
}

}  // namespace

TEST_CASE("without coupling the minimizer is constant") {
  const EigenResult r = minimize_L(config(2, 0.0));
  REQUIRE(r.converged);
  CHECK(std::abs(r.value) <= 1e-10);
  for (double x : r.minimizer[0]) CHECK(x == doctest::Approx(r.minimizer[0][0]).epsilon(1e-6));
}

TEST_CASE("values stay below d^2 and increase with the coupling") {
  for (int d : {2, 3}) {
    double previous = -1.0;
    for (double Lambda : {1.0, 10.0, 100.0, 1000.0, 1e4}) {
      const EigenResult r = minimize_L(config(d, Lambda));
      REQUIRE(r.converged);
      CHECK(r.value > previous);
      CHECK(r.value < d * d);
      CHECK(r.residual <= 1e-6);
      previous = r.value;
    }
  }
}

TEST_CASE("the minimizer has the imposed symmetries") {
  const int d = 3;
  const CircleConfig c = config(d, 50.0);
  const EigenResult r = minimize_L(c);
  REQUIRE(r.minimizer.size() == static_cast<std::size_t>(d));
  const int shift = c.n / (2 * d);
  for (int i = 0; i < c.n; ++i) {
    CHECK(r.minimizer[0][i] == doctest::Approx(r.minimizer[0][(c.n - i) % c.n]).epsilon(1e-12));
    CHECK(r.minimizer[1][i] == doctest::Approx(r.minimizer[0][(i - shift + c.n) % c.n]).epsilon(1e-12));
  }
}

TEST_CASE("the two optimizers agree") {
  for (int d : {2, 3}) {
    const CircleConfig c = config(d, 100.0);
    const EigenResult a = minimize_L(c);
    const EigenResult b = minimize_L_newton(c);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(std::abs(a.value - b.value) <= 1e-8 * d * d);
    CHECK(a.lagrange == doctest::Approx(b.lagrange).epsilon(1e-7));
    CHECK(euler_lagrange_residual(b, c.Lambda) <= 1e-8);
  }
}

TEST_CASE("the first integral is conserved on the minimizer") {
  const EigenResult r = minimize_L_newton(config(2, 10.0));
  REQUIRE(r.converged);
  CHECK(conservation_spread(r, 10.0) <= 1e-10);
  CHECK(lagrange_multiplier(r, 10.0) == doctest::Approx(r.lagrange).epsilon(1e-8));
}

TEST_CASE("gap fit recovers a synthetic power law") {
  std::vector<double> lambdas, values;
  for (double Lambda : {1.0, 10.0, 100.0, 1e3, 1e4, 1e5}) {
    lambdas.push_back(Lambda);
    values.push_back(4.0 - 3.0 * std::pow(Lambda, -0.25));
  }
  const GapFit fit = fit_gap(2, lambdas, values);
  CHECK(fit.valid);
  CHECK(fit.used == 4);
  CHECK(fit.slope == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(fit.C == doctest::Approx(3.0).epsilon(1e-12));
  values.back() = 4.0;
  CHECK_FALSE(fit_gap(2, lambdas, values).valid);
}

TEST_CASE("grid sizes must respect the symmetry") {
  CircleConfig c = config(3, 10.0);
  c.n = 1000;
  CHECK_THROWS_AS(minimize_L(c), InvalidArgument);
}
