#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SparseCore>

#include "phasesep/polar_ops.hpp"
#include "phasesep/sparse_solver.hpp"

using namespace phasesep;

namespace {

std::vector<double> sample(const DiskGrid& g, double (*f)(Point)) {
  std::vector<double> u(g.node_count());
  for (std::size_t p = 0; p < u.size(); ++p) u[p] = f(g.node(p));
  return u;
}

SparseMatrix full_stiffness(const PolarOperator& op, int outer) {
  std::vector<Eigen::Triplet<double>> lower;
  std::vector<double> diag;
  op.stiffness_entries(outer, lower, diag);
  std::vector<Eigen::Triplet<double>> all;
  for (const auto& t : lower) {
    all.push_back(t);
    all.emplace_back(t.col(), t.row(), t.value());
  }
  for (std::size_t p = 0; p < diag.size(); ++p) all.emplace_back(p, p, diag[p]);
  SparseMatrix k(diag.size(), diag.size());
  k.setFromTriplets(all.begin(), all.end());
  return k;
}

}  // namespace

TEST_CASE("Laplacian of r^2 is 4 at every interior node") {
  const DiskGrid g(2.0, 16, 32);
  const PolarOperator op(g);
  const auto u = sample(g, [](Point z) { return z.x * z.x + z.y * z.y; });
  std::vector<double> lap(g.node_count());
  op.laplacian(u, lap);
  for (std::size_t p = 0; p < g.interior_count(); ++p) CHECK(lap[p] == doctest::Approx(4.0).epsilon(1e-12));
  for (std::size_t p = g.interior_count(); p < g.node_count(); ++p) CHECK(lap[p] == 0.0);
}

TEST_CASE("Laplacian of harmonic polynomials converges to zero") {
  double previous = INFINITY;
  for (int n : {16, 32, 64}) {
    const DiskGrid g(1.0, n, 2 * n);
    const PolarOperator op(g);
    const auto u = sample(g, [](Point z) { return z.x * z.x * z.x - 3.0 * z.x * z.y * z.y; });
    std::vector<double> lap(g.node_count());
    op.laplacian(u, lap);
    double worst = 0.0;
    for (std::size_t p = 0; p < g.interior_count(); ++p) worst = std::max(worst, std::abs(lap[p]));
    CHECK(worst < previous / 3.0);
    previous = worst;
  }
}

TEST_CASE("Dirichlet energy of Re z^d") {
  for (int d : {1, 2, 3}) {
    const DiskGrid g = make_disk_grid(1.5, 256, d == 3 ? 516 : 512, Degree::integer(d));
    const PolarOperator op(g);
    const auto phi = sample_phi(g, d);
    const double exact = std::numbers::pi * d * std::pow(1.5, 2 * d);
    CHECK(op.dirichlet_energy(phi, g.rings()) == doctest::Approx(exact).epsilon(1e-3));
    const double r = g.ring_radius(128);
    CHECK(op.dirichlet_energy(phi, 128) == doctest::Approx(std::numbers::pi * d * std::pow(r, 2 * d)).epsilon(1e-3));
  }
}

TEST_CASE("stiffness matrix, operator and energy agree") {
  const DiskGrid g(1.0, 12, 24);
  const PolarOperator op(g);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int outer : {3, 7, 12}) {
    const SparseMatrix k = full_stiffness(op, outer);
    const std::size_t n = k.rows();
    REQUIRE(n == g.index(outer, 0));
    std::vector<double> u(g.node_count(), 0.0);
    Eigen::VectorXd x(n);
    for (std::size_t p = 0; p < n; ++p) x[p] = u[p] = uni(rng);
    const Eigen::VectorXd kx = k * x;
    CHECK(x.dot(kx) == doctest::Approx(op.dirichlet_energy(u, outer)).epsilon(1e-12));
    CHECK((SparseMatrix(k.transpose()) - k).norm() == 0.0);
    if (outer == g.rings()) {
      std::vector<double> ku(g.node_count());
      op.stiffness(u, ku);
      for (std::size_t p = 0; p < n; ++p) CHECK(ku[p] == doctest::Approx(kx[p]).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("stiffness is positive definite with Dirichlet data") {
  const DiskGrid g(1.0, 10, 20);
  const PolarOperator op(g);
  std::vector<Eigen::Triplet<double>> lower;
  std::vector<double> diag;
  op.stiffness_entries(g.rings(), lower, diag);
  for (std::size_t p = 0; p < diag.size(); ++p) lower.emplace_back(p, p, diag[p]);
  SparseMatrix k(diag.size(), diag.size());
  k.setFromTriplets(lower.begin(), lower.end());
  CholeskySolver chol;
  CHECK(chol.factorize(k));
  k.coeffRef(0, 0) = -1.0;
  CholeskySolver bad;
  CHECK_FALSE(bad.factorize(k));
}

TEST_CASE("mass, ring mass and coupling of constants") {
  const DiskGrid g(2.0, 8, 16);
  const PolarOperator op(g);
  FieldSet f(g, Degree::integer(1), 2);
  for (double& x : f.components[0]) x = 3.0;
  for (double& x : f.components[1]) x = 0.5;
  CHECK(op.mass(f.components[0], 8) == doctest::Approx(9.0 * std::numbers::pi * 4.0).epsilon(1e-13));
  CHECK(op.ring_mass(f, 4) == doctest::Approx(2.0 * std::numbers::pi * 9.25).epsilon(1e-13));
  CHECK(op.ring_mass(f, 0) == doctest::Approx(2.0 * std::numbers::pi * 9.25).epsilon(1e-13));
  CHECK(op.coupling_integral(f, 8) == doctest::Approx(std::numbers::pi * 4.0 * 9.0 * 0.25).epsilon(1e-13));
  CHECK(op.dirichlet_energy(f.components[0], 8) == doctest::Approx(0.0).scale(1.0));
  CHECK(op.total_energy(f) == doctest::Approx(std::numbers::pi * 4.0 * 9.0 * 0.25).epsilon(1e-12));
}
