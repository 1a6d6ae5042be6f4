#pragma once

// Polar grids on disks, the harmonic boundary data Phi = Re(z^d) and the
// sector function Psi, and the exact node permutations induced by the
// dihedral/rotational symmetries.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace phasesep {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double norm(Point p);
double arg(Point p);

// Symmetry degree d, stored as 2d so half-integers are exact.
class Degree {
 public:
  static Degree integer(int d);
  static Degree from_twice(int twice_d);
  // Accepts integers and half-integers only.
  static Degree from_value(double d);

  int twice() const { return twice_; }
  double value() const { return 0.5 * twice_; }
  bool is_integer() const { return twice_ % 2 == 0; }
  // Throws for half-integers.
  int as_integer() const;

  friend bool operator==(Degree a, Degree b) { return a.twice_ == b.twice_; }

 private:
  explicit Degree(int twice_d) : twice_(twice_d) {}
  int twice_;
};

// Nodes at r_i = i*R/n_r (i = 0..n_r) and theta_j = 2*pi*j/n_theta; the
// center is a single node. Flat index: 0 is the center, ring i >= 1 node j
// sits at 1 + (i-1)*n_theta + j.
class DiskGrid {
 public:
  DiskGrid(double radius, int n_r, int n_theta);

  double radius() const { return radius_; }
  int rings() const { return n_r_; }
  int angles() const { return n_theta_; }
  double dr() const { return radius_ / n_r_; }
  double dtheta() const;

  std::size_t node_count() const { return 1 + static_cast<std::size_t>(n_r_) * n_theta_; }
  // Center plus rings 1..n_r-1.
  std::size_t interior_count() const {
    return 1 + static_cast<std::size_t>(n_r_ - 1) * n_theta_;
  }

  std::size_t index(int ring, int j) const;
  int ring_of(std::size_t node) const;
  int angle_of(std::size_t node) const;
  bool is_boundary(std::size_t node) const { return ring_of(node) == n_r_; }

  double ring_radius(int ring) const { return ring * dr(); }
  double angle(int j) const;
  Point node(std::size_t idx) const;

  // True when every reflection across a nodal line of Re(z^d) and the
  // rotation by pi/d map nodes to nodes (n_theta divisible by 4d).
  bool compatible_with(Degree d) const;

  // cos(pi*m/n_theta) from a table that is exactly odd about pi/2 and even
  // about 0; m is reduced modulo 2*n_theta.
  double cos_half_step(long long m) const;

  // Quadrature weight of one node of `ring` when integrating over the
  // closed disk of radius r_{outer_ring}. Weights over a full disk sum to
  // pi*r^2 exactly (up to rounding).
  double node_weight(int ring, int outer_ring) const;

  friend bool operator==(const DiskGrid& a, const DiskGrid& b) {
    return a.radius_ == b.radius_ && a.n_r_ == b.n_r_ && a.n_theta_ == b.n_theta_;
  }

 private:
  double radius_;
  int n_r_;
  int n_theta_;
  std::vector<double> cos_table_;  // cos(pi*m/n_theta), m = 0..2*n_theta-1
};

// Validates R > 0 and the 4d divisibility needed by the symmetry maps.
DiskGrid make_disk_grid(double radius, int n_r, int n_theta, Degree d);

// Phi(z) = Re(z^d) = r^d cos(d*theta).
double eval_phi(int d, Point z);
// Reflection across the nodal line L_i at angle (2i-1)*pi/(2d), 1 <= i <= d.
Point reflect(int d, int i, Point z);
// Psi(z) = r^d cos(d*phi) on the sectors G^{ik}(F), i = 0..h-1, with phi the
// angle from the sector's center; 0 elsewhere. Requires 2d = h*k.
double eval_psi(Degree d, int k, Point z);

// Grid samples of Phi, exactly antisymmetric under the grid reflections.
std::vector<double> sample_phi(const DiskGrid& grid, int d);
// Grid samples of Psi(G^power z), G the rotation by pi/d.
std::vector<double> sample_psi(const DiskGrid& grid, Degree d, int k, int rotation_power = 0);

enum class SymmetryKind { Reflection, Rotation, Conjugation };

struct SymmetryMap {
  SymmetryKind kind;
  int degree_twice = 0;
  int index = 0;  // reflection line i, or rotation power
  std::vector<std::uint32_t> permutation;

  std::size_t apply(std::size_t node) const { return permutation[node]; }
  // Smallest m >= 1 with permutation^m = identity.
  int order() const;
};

SymmetryMap reflection_map(const DiskGrid& grid, int d, int i);
// Rotation by power*pi/d (the generator G of order 2d when power = 1).
SymmetryMap rotation_map(const DiskGrid& grid, Degree d, int power);
SymmetryMap conjugation_map(const DiskGrid& grid);

}  // namespace phasesep
