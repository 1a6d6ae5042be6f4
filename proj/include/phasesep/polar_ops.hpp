#pragma once

// Finite-volume operators on a polar grid. The discrete Dirichlet energy is
// a sum over cell edges,
//   D(u) = sum_radial c_{i+1/2} (u_{i+1,j} - u_{i,j})^2
//        + sum_angular dr_i/(r_i dtheta) (u_{i,j+1} - u_{i,j})^2,
// with c_{i+1/2} = r_{i+1/2} dtheta / dr; the stiffness K is half its
// gradient and the Laplacian is -K u / w with w the node areas. The center
// row reduces to 4/dr^2 times (mean of ring 1 minus center).

#include <span>

#include <Eigen/SparseCore>
#include <vector>

#include "phasesep/field.hpp"
#include "phasesep/geometry.hpp"

namespace phasesep {

class PolarOperator {
 public:
  explicit PolarOperator(DiskGrid grid);

  const DiskGrid& grid() const { return grid_; }

  // Edge coefficient between ring i and ring i+1 (i = 0 is the center).
  double radial_coefficient(int i) const;
  // Edge coefficient of angular edges on ring i >= 1 inside B_{r_outer}.
  double angular_coefficient(int i, int outer_ring) const;
  // Full-disk node areas.
  const std::vector<double>& weights() const { return weights_; }

  // (K u) on the center and rings 1..n_r-1; boundary entries set to 0.
  void stiffness(std::span<const double> u, std::span<double> out) const;
  // Lower triangle of K restricted to nodes inside ring `outer_ring`
  // (center and rings 1..outer_ring-1), values on ring outer_ring fixed.
  // Entry (p, q) refers to flat node indices; `diagonal` receives K_pp.
  void stiffness_entries(int outer_ring, std::vector<Eigen::Triplet<double>>& lower,
                         std::vector<double>& diagonal) const;

  // Delta_h u = -(K u)/w on interior nodes; boundary entries set to 0.
  void laplacian(std::span<const double> u, std::span<double> out) const;

  // D(u) restricted to the closed disk of radius r_{outer_ring}.
  double dirichlet_energy(std::span<const double> u, int outer_ring) const;
  // sum_p w_p u_p^2 over B_{r_outer}.
  double mass(std::span<const double> u, int outer_ring) const;
  // sum_p w_p sum_{c<e} u_c^2 u_e^2 over B_{r_outer}.
  double coupling_integral(const FieldSet& f, int outer_ring) const;
  // dtheta * sum_j sum_c u_c(r_i, theta_j)^2, the trapezoid rule for
  // r^{-1} * integral over the circle of radius r_i.
  double ring_mass(const FieldSet& f, int ring) const;

  // sum_c D(u_c) + coupling over the full disk.
  double total_energy(const FieldSet& f) const;
  // Sum over components of sup_interior |Delta_h u_c - u_c sum_{e!=c} u_e^2|.
  double steady_residual(const FieldSet& f) const;

 private:
  DiskGrid grid_;
  std::vector<double> weights_;
  std::vector<double> ones_;
};

}  // namespace phasesep
