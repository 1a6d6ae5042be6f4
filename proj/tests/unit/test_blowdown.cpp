#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "phasesep/blowdown.hpp"
#include "phasesep/diskflow.hpp"
#include "phasesep/error.hpp"
#include "phasesep/profile1d.hpp"
#include "phasesep/stability.hpp"

using namespace phasesep;

TEST_CASE("blow-down of the harmonic pair is the pair itself") {
  const DiskGrid g = make_disk_grid(8.0, 64, 128, Degree::integer(2));
  const FieldSet f = harmonic_pair(g, 2);
  for (double R : {2.0, 4.0, 8.0}) {
    const BlowdownResult b = blow_down(f, R);
    CHECK(b.L == doctest::Approx(R * R).epsilon(1e-12));
    CHECK(b.boundary_mass == doctest::Approx(b.reference_mass).epsilon(1e-12));
    const HarmonicFit fit = harmonic_fit(b, 2.0);
    CHECK(fit.c == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.residual <= 1e-12);
    CHECK(harmonic_fit(b, 3.0).residual > 0.5);
  }
}

TEST_CASE("blow-downs of a homogeneous pair coincide") {
  const DiskGrid g = make_disk_grid(8.0, 64, 128, Degree::integer(2));
  const FieldSet f = harmonic_pair(g, 2);
  const BlowdownResult a = blow_down(f, 2.0, 16);
  const BlowdownResult b = blow_down(f, 4.0, 16);
  REQUIRE(a.rescaled.grid == b.rescaled.grid);
  double diff = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t p = 0; p < a.rescaled.grid.node_count(); ++p) {
      diff = std::max(diff, std::abs(a.rescaled.components[c][p] - b.rescaled.components[c][p]));
    }
  }
  CHECK(diff <= 1e-12);
}

TEST_CASE("degenerate inputs are rejected") {
  const DiskGrid g = make_disk_grid(8.0, 32, 64, Degree::integer(2));
  const FieldSet zero(g, Degree::integer(2), 2);
  CHECK_THROWS_AS(blow_down(zero, 4.0), InvalidArgument);
  CHECK_THROWS_AS(blow_down(psi_components(g, Degree::integer(3), 3), 4.0), InvalidArgument);
}

TEST_CASE("frequency plateau reads off the degree") {
  const DiskGrid g = make_disk_grid(8.0, 128, 384, Degree::integer(3));
  const PlateauEstimate h = frequency_plateau(harmonic_pair(g, 3), ring_ladder(g, 16));
  CHECK(h.estimate == 3);
  CHECK(h.confident);

  const Profile1D p = normalize(solve_profile(1.0, 40.0, 4096, 1e-10, 1));
  const DiskGrid big(16.0, 128, 256);
  const PlateauEstimate q = frequency_plateau(profile_background(p, big), ring_ladder(big, 8));
  CHECK(q.estimate == 1);
  CHECK(q.confident);
}

TEST_CASE("ladder on a relaxed state passes its checks") {
  const DiskGrid g = make_disk_grid(32.0, 128, 128, Degree::integer(1));
  const RelaxResult r = relax(init_state(1, 32.0, g), 1e-10, 500);
  REQUIRE(r.converged);
  BlowdownOptions opt;
  opt.expected_degree = 1;
  std::vector<BlowdownRow> rows;
  const Report rep = blowdown_ladder(r.state.fields, {8.0, 16.0, 32.0}, opt, &rows);
  for (const auto& c : rep.checks) {
    INFO(c.name << " " << c.value << " " << c.limit);
    CHECK(c.passed);
  }
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) CHECK(row.c > 0.0);
}

TEST_CASE("a wrong expected degree fails the plateau check") {
  const DiskGrid g = make_disk_grid(8.0, 64, 128, Degree::integer(2));
  BlowdownOptions opt;
  opt.expected_degree = 3;
  const Report rep = blowdown_ladder(harmonic_pair(g, 2), {2.0, 4.0, 8.0}, opt);
  CHECK_FALSE(rep.check("plateau").passed);
}
