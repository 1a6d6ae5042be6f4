#pragma once

// Constrained minimization on the circle:
//   L(d, Lambda) = min sum_i int u_i'^2 + Lambda sum_{i<j} int u_i^2 u_j^2
// over d components with sum_i int u_i^2 = 1, u_{i+1}(x) = u_i(x - pi/d),
// u_1 even and pi-periodic. Only u_1 on the cell [0, pi/2] is free.
// Discretization: n nodes on [0, 2pi), forward differences for the
// gradient term and the rectangle rule for the integrals.

#include <cstdint>
#include <vector>

namespace phasesep {

struct CircleConfig {
  int d = 2;
  double Lambda = 0.0;
  int n = 2048;  // divisible by 4 and by 2d
  double tol = 1e-9;
  int max_iterations = 20000;
};

struct EigenResult {
  double value = 0.0;     // L(d, Lambda)
  double lagrange = 0.0;  // lambda
  std::vector<std::vector<double>> minimizer;  // d components, n nodes each
  int iterations = 0;
  double residual = 0.0;  // sup |-u'' + Lambda u W - lambda u| / sup |u|
  bool converged = false;
};

// Preconditioned projected gradient on the mass sphere with an Armijo line
// search; the preconditioner is (-D^2 + Lambda W + sigma)^{-1} at the
// current iterate.
EigenResult minimize_L(const CircleConfig& c, std::uint64_t seed = 0);

// Independent optimizer: self-consistent inverse iteration followed by
// Newton's method on (u on the cell, lambda) with a dense LU.
EigenResult minimize_L_newton(const CircleConfig& c, std::uint64_t seed = 0);

// lambda = value + Lambda sum_{i<j} int u_i^2 u_j^2 from the minimizer.
double lagrange_multiplier(const EigenResult& r, double Lambda);

// Max minus min over cells [x_j, x_{j+1}] of
//   sum_i u_i'^2 + lambda sum_i u_i^2 - Lambda sum_{i<j} u_i^2 u_j^2
// with u' the forward difference and u^2 replaced by u(x_j) u(x_{j+1}),
// which makes the linear part an exact discrete invariant.
double conservation_spread(const EigenResult& r, double Lambda);

// Sup-norm residual of the Euler-Lagrange equation on the minimizer.
double euler_lagrange_residual(const EigenResult& r, double Lambda);

struct GapFit {
  double C = 0.0;      // d^2 - L ~ C Lambda^slope
  double slope = 0.0;
  int used = 0;        // points with Lambda > 10
  bool valid = true;   // false when some value reaches d^2
};

// Least squares of log(d^2 - L) against log(Lambda) over Lambda > 10.
GapFit fit_gap(int d, const std::vector<double>& lambdas, const std::vector<double>& values);

}  // namespace phasesep
