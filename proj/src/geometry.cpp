#include "phasesep/geometry.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "phasesep/error.hpp"

namespace phasesep {

double norm(Point p) { return std::hypot(p.x, p.y); }

double arg(Point p) {
  const double a = std::atan2(p.y, p.x);
  return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
}

Degree Degree::integer(int d) {
  require(d >= 1, "degree must be a positive integer, got " + std::to_string(d));
  return Degree(2 * d);
}

Degree Degree::from_twice(int twice_d) {
  require(twice_d >= 1, "degree must be positive");
  return Degree(twice_d);
}

Degree Degree::from_value(double d) {
  const double twice = 2.0 * d;
  require(d > 0.0 && std::abs(twice - std::round(twice)) < 1e-12,
          "degree must be a positive integer or half-integer");
  return Degree(static_cast<int>(std::lround(twice)));
}

int Degree::as_integer() const {
  require(is_integer(), "this operation needs an integer degree, got " +
                            std::to_string(value()));
  return twice_ / 2;
}

DiskGrid::DiskGrid(double radius, int n_r, int n_theta)
    : radius_(radius), n_r_(n_r), n_theta_(n_theta) {
  require(radius > 0.0 && std::isfinite(radius), "disk radius must be positive");
  require(n_r >= 2, "need at least 2 radial cells, got " + std::to_string(n_r));
  require(n_theta >= 4 && n_theta % 2 == 0,
          "n_theta must be even and at least 4, got " + std::to_string(n_theta));
  const int n = n_theta_;
  cos_table_.assign(2 * static_cast<std::size_t>(n), 0.0);
  // Quarter wave, then exact reflections: c[n/2] = 0, c[n-m] = -c[m],
  // c[2n-m] = c[m].
  for (int m = 0; 2 * m < n; ++m) {
    cos_table_[m] = (4 * m <= n) ? std::cos(std::numbers::pi * m / n)
                                 : std::sin(std::numbers::pi * (0.5 * n - m) / n);
  }
  cos_table_[n / 2] = 0.0;
  for (int m = 0; 2 * m <= n; ++m) cos_table_[n - m] = -cos_table_[m];
  for (int m = 1; m < n; ++m) cos_table_[2 * n - m] = cos_table_[m];
}

double DiskGrid::dtheta() const { return 2.0 * std::numbers::pi / n_theta_; }

double DiskGrid::angle(int j) const { return dtheta() * j; }

std::size_t DiskGrid::index(int ring, int j) const {
  if (ring == 0) return 0;
  return 1 + static_cast<std::size_t>(ring - 1) * n_theta_ + static_cast<std::size_t>(j);
}

int DiskGrid::ring_of(std::size_t node) const {
  return node == 0 ? 0 : 1 + static_cast<int>((node - 1) / n_theta_);
}

int DiskGrid::angle_of(std::size_t node) const {
  return node == 0 ? 0 : static_cast<int>((node - 1) % n_theta_);
}

Point DiskGrid::node(std::size_t idx) const {
  const int i = ring_of(idx);
  if (i == 0) return {};
  const double r = ring_radius(i);
  const int j = angle_of(idx);
  // Exact table lookups keep the node set symmetric to the bit.
  const double c = cos_half_step(2LL * j);
  const double s = cos_half_step(2LL * j - n_theta_ / 2);
  return {r * c, r * s};
}

bool DiskGrid::compatible_with(Degree d) const { return n_theta_ % (2 * d.twice()) == 0; }

double DiskGrid::cos_half_step(long long m) const {
  const long long period = 2LL * n_theta_;
  long long r = m % period;
  if (r < 0) r += period;
  return cos_table_[static_cast<std::size_t>(r)];
}

double DiskGrid::node_weight(int ring, int outer_ring) const {
  const double h = dr();
  if (ring > outer_ring || outer_ring == 0) return 0.0;
  if (ring == 0) return 0.25 * std::numbers::pi * h * h;
  if (ring < outer_ring) return ring_radius(ring) * h * dtheta();
  return dtheta() * (0.5 * ring_radius(ring) * h - 0.125 * h * h);
}

DiskGrid make_disk_grid(double radius, int n_r, int n_theta, Degree d) {
  require(radius > 0.0, "disk radius must be positive");
  require(n_theta % (2 * d.twice()) == 0,
          "n_theta = " + std::to_string(n_theta) + " must be divisible by 4d = " +
              std::to_string(2 * d.twice()) +
              " so the symmetry maps send grid nodes to grid nodes");
  return DiskGrid(radius, n_r, n_theta);
}

double eval_phi(int d, Point z) {
  require(d >= 0, "degree must be nonnegative");
  std::complex<double> w(1.0, 0.0);
  const std::complex<double> zc(z.x, z.y);
  for (int m = 0; m < d; ++m) w *= zc;
  return w.real();
}

Point reflect(int d, int i, Point z) {
  require(d >= 1, "degree must be positive");
  require(i >= 1 && i <= d, "nodal line index " + std::to_string(i) + " outside 1.." +
                                std::to_string(d));
  const double two_alpha = (2.0 * i - 1.0) * std::numbers::pi / d;
  const double c = std::cos(two_alpha);
  const double s = std::sin(two_alpha);
  return {c * z.x + s * z.y, s * z.x - c * z.y};
}

double eval_psi(Degree d, int k, Point z) {
  require(k >= 1 && d.twice() % k == 0, "2d must be a multiple of the component count k");
  const double r = norm(z);
  if (r == 0.0) return 0.0;
  const int sectors = d.twice();
  const double width = 2.0 * std::numbers::pi / sectors;
  const double theta = arg(z);
  const long s = std::lround(theta / width);
  const double phi = theta - s * width;
  const int sector = static_cast<int>(((s % sectors) + sectors) % sectors);
  if (sector % k != 0) return 0.0;
  const double value = std::pow(r, d.value()) * std::cos(d.value() * phi);
  return value > 0.0 ? value : 0.0;
}

std::vector<double> sample_phi(const DiskGrid& grid, int d) {
  std::vector<double> out(grid.node_count(), 0.0);
  for (int i = 1; i <= grid.rings(); ++i) {
    const double rd = std::pow(grid.ring_radius(i), d);
    for (int j = 0; j < grid.angles(); ++j) {
      out[grid.index(i, j)] = rd * grid.cos_half_step(2LL * d * j);
    }
  }
  return out;
}

std::vector<double> sample_psi(const DiskGrid& grid, Degree d, int k, int rotation_power) {
  require(k >= 1 && d.twice() % k == 0, "2d must be a multiple of the component count k");
  require(grid.compatible_with(d), "grid angular count must be divisible by 4d");
  const int n = grid.angles();
  const int width = n / d.twice();
  const int half = width / 2;
  std::vector<double> out(grid.node_count(), 0.0);
  for (int i = 1; i <= grid.rings(); ++i) {
    const double rd = std::pow(grid.ring_radius(i), d.value());
    for (int j = 0; j < n; ++j) {
      long long jr = (static_cast<long long>(j) + static_cast<long long>(rotation_power) * width) % n;
      if (jr < 0) jr += n;
      const long long sector = ((jr + half) / width) % d.twice();
      long long offset = jr - sector * width;
      if (offset >= n - half) offset -= n;
      if (sector % k != 0) continue;
      const double c = grid.cos_half_step(static_cast<long long>(d.twice()) * offset);
      out[grid.index(i, j)] = c > 0.0 ? rd * c : 0.0;
    }
  }
  return out;
}

namespace {

SymmetryMap angular_map(const DiskGrid& grid, SymmetryKind kind, int twice, int index,
                        long long sign, long long shift) {
  SymmetryMap m{kind, twice, index, {}};
  m.permutation.resize(grid.node_count());
  m.permutation[0] = 0;
  const long long n = grid.angles();
  for (int i = 1; i <= grid.rings(); ++i) {
    for (int j = 0; j < grid.angles(); ++j) {
      long long jj = (sign * j + shift) % n;
      if (jj < 0) jj += n;
      m.permutation[grid.index(i, j)] =
          static_cast<std::uint32_t>(grid.index(i, static_cast<int>(jj)));
    }
  }
  return m;
}

}  // namespace

int SymmetryMap::order() const {
  std::vector<std::uint32_t> power = permutation;
  for (int m = 1; m <= static_cast<int>(permutation.size()) + 1; ++m) {
    bool identity = true;
    for (std::size_t p = 0; p < power.size(); ++p) {
      if (power[p] != p) {
        identity = false;
        break;
      }
    }
    if (identity) return m;
    for (auto& q : power) q = permutation[q];
  }
  return 0;
}

SymmetryMap reflection_map(const DiskGrid& grid, int d, int i) {
  require(d >= 1 && i >= 1 && i <= d, "reflection index out of range");
  require(grid.angles() % (2 * d) == 0, "n_theta must be divisible by 2d for reflections");
  const long long shift = (2LL * i - 1) * grid.angles() / (2LL * d);
  return angular_map(grid, SymmetryKind::Reflection, 2 * d, i, -1, shift);
}

SymmetryMap rotation_map(const DiskGrid& grid, Degree d, int power) {
  require(grid.angles() % d.twice() == 0, "n_theta must be divisible by 2d for rotations");
  const long long shift = static_cast<long long>(power) * (grid.angles() / d.twice());
  return angular_map(grid, SymmetryKind::Rotation, d.twice(), power, 1, shift);
}

SymmetryMap conjugation_map(const DiskGrid& grid) {
  return angular_map(grid, SymmetryKind::Conjugation, 0, 0, -1, 0);
}

}  // namespace phasesep
