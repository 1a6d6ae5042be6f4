#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phasesep/error.hpp"
#include "phasesep/geometry.hpp"

using namespace phasesep;

namespace {

Point polar(double r, double t) { return {r * std::cos(t), r * std::sin(t)}; }

}  // namespace

TEST_CASE("grid layout") {
  const DiskGrid g = make_disk_grid(1.0, 4, 8, Degree::integer(1));
  CHECK(g.node_count() == 33);
  CHECK(g.dr() == doctest::Approx(0.25));
  for (int j = 0; j < 8; ++j) CHECK(g.angle(j) == doctest::Approx(std::numbers::pi * j / 4));
  CHECK(g.index(0, 0) == 0);
  CHECK(g.index(1, 0) == 1);
  CHECK(g.index(2, 3) == 12);
  CHECK(g.ring_of(12) == 2);
  CHECK(g.angle_of(12) == 3);

  const DiskGrid g2 = make_disk_grid(2.0, 8, 16, Degree::integer(2));
  CHECK(g2.ring_radius(g2.rings()) == doctest::Approx(2.0));
  CHECK(g2.is_boundary(g2.index(8, 5)));
  CHECK_FALSE(g2.is_boundary(g2.index(7, 5)));
}

TEST_CASE("grid preconditions") {
  CHECK_THROWS_AS(make_disk_grid(1.0, 4, 10, Degree::integer(2)), InvalidArgument);
  CHECK_THROWS_AS(make_disk_grid(-1.0, 8, 16, Degree::integer(1)), InvalidArgument);
  CHECK_THROWS_AS(DiskGrid(1.0, 1, 16), InvalidArgument);
  CHECK_THROWS_AS(DiskGrid(1.0, 8, 15), InvalidArgument);
  CHECK_THROWS_AS(Degree::from_value(1.25), InvalidArgument);
  CHECK(Degree::from_value(1.5).twice() == 3);
  CHECK_THROWS_AS(Degree::from_value(1.5).as_integer(), InvalidArgument);
}

TEST_CASE("node weights integrate the disk") {
  const DiskGrid g(3.0, 12, 24);
  for (int outer : {1, 5, 12}) {
    double s = 0.0;
    for (int i = 0; i <= outer; ++i) s += g.node_weight(i, outer) * (i == 0 ? 1 : g.angles());
    const double r = g.ring_radius(outer);
    CHECK(s == doctest::Approx(std::numbers::pi * r * r).epsilon(1e-13));
  }
}

TEST_CASE("eval_phi") {
  CHECK(eval_phi(2, {1, 0}) == doctest::Approx(1.0));
  CHECK(eval_phi(2, {0, 1}) == doctest::Approx(-1.0));
  CHECK(std::abs(eval_phi(3, polar(1.0, std::numbers::pi / 6))) < 1e-15);
}

TEST_CASE("reflect") {
  const Point p = reflect(1, 1, {1, 0});
  CHECK(p.x == doctest::Approx(-1.0));
  CHECK(std::abs(p.y) < 1e-15);

  const Point on_line = polar(0.7, std::numbers::pi / 4);
  const Point q = reflect(2, 1, on_line);
  CHECK(q.x == doctest::Approx(on_line.x));
  CHECK(q.y == doctest::Approx(on_line.y));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (int t = 0; t < 1000; ++t) {
    const Point z{uni(rng), uni(rng)};
    const int d = 1 + t % 5;
    const int i = 1 + (t / 5) % d;
    const double scale = std::max(1.0, std::pow(norm(z), d));
    CHECK(std::abs(eval_phi(d, reflect(d, i, z)) + eval_phi(d, z)) <= 1e-12 * scale);
  }
}

TEST_CASE("eval_psi") {
  const Degree d3 = Degree::integer(3);
  CHECK(eval_psi(d3, 3, {1, 0}) == doctest::Approx(1.0));
  CHECK(eval_psi(d3, 3, polar(1.0, std::numbers::pi / 3)) == 0.0);
  for (int k : {1, 2, 3, 6}) CHECK(eval_psi(d3, k, {0, 0}) == 0.0);
  CHECK(eval_psi(Degree::from_value(1.5), 3, {0, 0}) == 0.0);
  CHECK_THROWS_AS(eval_psi(d3, 4, {1, 0}), InvalidArgument);

  // Rotated copies tile the sectors: sum_c Psi(G^c z) = |Re z^d|.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int t = 0; t < 500; ++t) {
    const Point z{uni(rng), uni(rng)};
    for (int k : {2, 3, 6}) {
      double s = 0.0;
      for (int c = 0; c < k; ++c) {
        const double a = c * std::numbers::pi / 3.0;
        const Point w{z.x * std::cos(a) - z.y * std::sin(a), z.x * std::sin(a) + z.y * std::cos(a)};
        const double v = eval_psi(d3, k, w);
        CHECK(v >= 0.0);
        s += v;
      }
      CHECK(s == doctest::Approx(std::abs(eval_phi(3, z))).epsilon(1e-9));
    }
  }
}

TEST_CASE("symmetry maps are exact node permutations") {
  for (int d : {1, 2, 3}) {
    const DiskGrid g = make_disk_grid(2.0, 8, 24, Degree::integer(d));
    const auto phi = sample_phi(g, d);
    for (int i = 1; i <= d; ++i) {
      const SymmetryMap m = reflection_map(g, d, i);
      CHECK(m.order() == 2);
      for (std::size_t p = 0; p < g.node_count(); ++p) {
        REQUIRE(m.apply(p) < g.node_count());
        CHECK(m.apply(m.apply(p)) == p);
        CHECK(phi[m.apply(p)] == -phi[p]);
      }
    }
    const SymmetryMap rot = rotation_map(g, Degree::integer(d), 1);
    CHECK(rot.order() == 2 * d);
    for (std::size_t p = 0; p < g.node_count(); ++p) CHECK(phi[rot.apply(p)] == -phi[p]);
    const SymmetryMap conj = conjugation_map(g);
    CHECK(conj.order() == 2);
    for (std::size_t p = 0; p < g.node_count(); ++p) CHECK(phi[conj.apply(p)] == phi[p]);
  }
}

TEST_CASE("sampled Phi matches eval_phi and has zero ring means") {
  const DiskGrid g = make_disk_grid(1.5, 6, 48, Degree::integer(3));
  for (int d : {1, 2, 3}) {
    const auto phi = sample_phi(g, d);
    for (std::size_t p = 0; p < g.node_count(); ++p) {
      CHECK(phi[p] == doctest::Approx(eval_phi(d, g.node(p))).epsilon(1e-13).scale(1.0));
    }
    for (int i = 1; i <= g.rings(); ++i) {
      double s = 0.0;
      for (int j = 0; j < g.angles(); ++j) s += phi[g.index(i, j)];
      CHECK(std::abs(s) <= 1e-13 * std::pow(g.ring_radius(i), d) * g.angles());
    }
  }
}

TEST_CASE("sampled Psi matches eval_psi") {
  const Degree d = Degree::integer(3);
  const DiskGrid g = make_disk_grid(1.0, 6, 48, d);
  for (int c = 0; c < 3; ++c) {
    const auto psi = sample_psi(g, d, 3, c);
    for (std::size_t p = 0; p < g.node_count(); ++p) {
      const Point z = g.node(p);
      const double a = c * std::numbers::pi / 3.0;
      const Point w{z.x * std::cos(a) - z.y * std::sin(a), z.x * std::sin(a) + z.y * std::cos(a)};
      CHECK(psi[p] == doctest::Approx(eval_psi(d, 3, w)).epsilon(1e-12).scale(1.0));
    }
  }
}
