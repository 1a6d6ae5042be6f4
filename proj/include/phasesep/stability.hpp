#pragma once

// First eigenvalue of the linearization of Delta u = u v^2, Delta v = v u^2
// around a background (u, v) on a ball B_R,
//   lambda(R) = min [D(phi) + D(psi) + int v^2 phi^2 + u^2 psi^2 + 4uv phi psi]
//                   / int (phi^2 + psi^2)
// over pairs vanishing on the sphere of radius R. The disk is the set of
// grid nodes inside ring m with r_m = R.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "phasesep/field.hpp"
#include "phasesep/profile1d.hpp"
#include "phasesep/report.hpp"

namespace phasesep {

struct LinearizedPair {
  explicit LinearizedPair(DiskGrid g) : grid(std::move(g)) {}

  DiskGrid grid;
  int ring = 0;  // outer ring of B_R
  double R = 0.0;
  std::vector<double> phi;  // full grid, zero on and beyond `ring`
  std::vector<double> psi;
  double lambda = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

struct StabilityOptions {
  double tol = 1e-9;
  int max_iterations = 2000;
  std::uint64_t seed = 1;
};

// u(x, y) = U(x), v(x, y) = V(x) sampled on the grid.
FieldSet profile_background(const Profile1D& p, const DiskGrid& grid);
// Two zero fields.
FieldSet zero_background(const DiskGrid& grid);

// Ring index m with r_m = R; throws when R is not a ring radius.
int ring_for_radius(const DiskGrid& grid, double R);

// Preconditioned locally optimal gradient descent on the quotient with
// renormalization to int (phi^2 + psi^2) = 1. After convergence the pair is
// replaced by (|phi|, -|psi|) and minimized again. The residual is
// sup_p |(A x - lambda x)_p| in strong form. Throws ConvergenceError.
LinearizedPair first_eigenvalue(const FieldSet& background, double R, StabilityOptions options = {});

// Quotient of an arbitrary pair (full-grid arrays; values on and beyond
// the outer ring are ignored).
double rayleigh_quotient(const FieldSet& background, double R, std::span<const double> phi,
                         std::span<const double> psi);
// Gradient of the quotient with respect to the nodal values inside B_R
// (zero elsewhere).
void quotient_gradient(const FieldSet& background, double R, std::span<const double> phi,
                       std::span<const double> psi, std::vector<double>& g_phi,
                       std::vector<double>& g_psi);

// Euler-Lagrange residual of a pair:
//   sup |-Delta_h phi + v^2 phi + 2uv psi - lambda phi|
//     + sup |-Delta_h psi + u^2 psi + 2uv phi - lambda psi|.
double linearized_residual(const FieldSet& background, const LinearizedPair& p);

// Central differences of the quotient along random directions at a random
// pair, compared with the gradient: check "gradient" passes when every
// relative mismatch is at most `tol`.
Report gradient_check(const FieldSet& background, double R, std::uint64_t seed,
                      int directions = 10, double tol = 1e-6);

// Dense generalized eigen-solve of the assembled operator; small grids only.
double dense_first_eigenvalue(const FieldSet& background, double R);

struct LambdaRow {
  double R = 0.0;
  double lambda = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// lambda(R) for every R and the check that it is nonincreasing within
// `slack`; rows are written to `rows` when given.
Report lambda_monotone(const FieldSet& background, const std::vector<double>& R_list,
                       StabilityOptions options = {}, double slack = 1e-8,
                       std::vector<LambdaRow>* rows = nullptr);

// min phi and max psi over nodes strictly inside B_R, after flipping the
// pair so that phi carries the larger positive part.
Report sign_structure(const LinearizedPair& p);

}  // namespace phasesep
