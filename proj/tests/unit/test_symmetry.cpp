#include <doctest.h>

#include <random>

#include "phasesep/field.hpp"
#include "phasesep/symmetry.hpp"

using namespace phasesep;

namespace {

std::vector<std::vector<double>> random_fields(std::size_t nodes, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<std::vector<double>> f(k, std::vector<double>(nodes));
  for (auto& c : f) {
    for (double& x : c) x = uni(rng);
  }
  return f;
}

}  // namespace

TEST_CASE("harmonic data lies in its symmetry class") {
  for (int d : {1, 2, 3}) {
    const DiskGrid g = make_disk_grid(2.0, 8, 24, Degree::integer(d));
    const SymmetryClass cls = dihedral_pair_class(g, d);
    CHECK(cls.residual(harmonic_pair(g, d).components) == 0.0);
  }
  const Degree d = Degree::integer(3);
  const DiskGrid g = make_disk_grid(2.0, 8, 36, d);
  CHECK(rotation_class(g, d, 3).residual(psi_components(g, d, 3).components) == 0.0);
  const Degree half = Degree::from_value(1.5);
  const DiskGrid gh = make_disk_grid(2.0, 8, 36, half);
  CHECK(rotation_class(gh, half, 3).residual(psi_components(gh, half, 3).components) == 0.0);
}

TEST_CASE("projection is exact and idempotent") {
  const DiskGrid g = make_disk_grid(2.0, 8, 24, Degree::integer(3));
  const SymmetryClass cls = dihedral_pair_class(g, 3);
  auto f = random_fields(g.node_count(), 2, 1);
  CHECK(cls.residual(f) > 0.1);
  cls.project(f);
  CHECK(cls.residual(f) == 0.0);
  const auto once = f;
  cls.project(f);
  CHECK(f == once);

  const SymmetryClass rot = rotation_class(g, Degree::integer(3), 3);
  auto h = random_fields(g.node_count(), 3, 2);
  rot.project(h);
  CHECK(rot.residual(h) == 0.0);
}

TEST_CASE("projection preserves the orbit sums") {
  const DiskGrid g = make_disk_grid(2.0, 8, 16, Degree::integer(2));
  const SymmetryClass cls = dihedral_pair_class(g, 2);
  auto f = random_fields(g.node_count(), 2, 4);
  double before = 0.0;
  for (const auto& c : f) {
    for (double x : c) before += x;
  }
  cls.project(f);
  double after = 0.0;
  for (const auto& c : f) {
    for (double x : c) after += x;
  }
  CHECK(after == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("orbit ids agree with the projection") {
  const DiskGrid g = make_disk_grid(2.0, 8, 24, Degree::integer(3));
  const SymmetryClass cls = rotation_class(g, Degree::integer(3), 3);
  const auto ids = cls.orbit_ids();
  REQUIRE(ids.size() == 3 * g.node_count());
  auto f = random_fields(g.node_count(), 3, 9);
  cls.project(f);
  std::vector<double> value(cls.orbit_count(), -1.0);
  for (std::size_t s = 0; s < ids.size(); ++s) {
    REQUIRE(ids[s] < cls.orbit_count());
    const double x = f[s / g.node_count()][s % g.node_count()];
    if (value[ids[s]] < 0.0) value[ids[s]] = x;
    CHECK(value[ids[s]] == x);
  }
}
