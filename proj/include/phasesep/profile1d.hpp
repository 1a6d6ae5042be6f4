#pragma once

// The one-dimensional system u'' = u v^2, v'' = v u^2 on [-L, L] with
// u(-L) = 0, u'(L) = a and v(x) = u(-x). Discretized with the fourth-order
// Numerov stencil
//   (u_{i-1} - 2u_i + u_{i+1})/h^2 = (f_{i-1} + 10 f_i + f_{i+1})/12,
// f = u v^2, and solved by damped Newton.

#include <cstdint>
#include <vector>

#include "phasesep/almgren.hpp"

namespace phasesep {

struct Profile1D {
  double x0 = 0.0;  // left end
  double h = 0.0;
  double a = 0.0;
  std::vector<double> u;
  std::vector<double> v;
  double residual = 0.0;
  int iterations = 0;

  std::size_t size() const { return u.size(); }
  double x(std::size_t i) const { return x0 + h * static_cast<double>(i); }
  double left() const { return x0; }
  double right() const { return x(u.size() - 1); }

  // Piecewise cubic interpolation; outside the grid u and v continue
  // linearly with slopes a and -a on the growing side and by their end
  // values on the decaying side.
  double u_at(double x) const;
  double v_at(double x) const;
};

struct ProfileOptions {
  int max_iterations = 100;
};

// n is the number of intervals; nodes sit at -L + i*2L/n. Requires a > 0,
// L >= 10/a, n >= 512 and n even.
Profile1D solve_profile(double a, double L, int n, double tol, std::uint64_t seed,
                        ProfileOptions options = {});

// sup over interior nodes of the Numerov residual of both equations.
double profile_residual(const Profile1D& p);

// Crossing u = v at the leftmost sign change of u - v, linear between nodes.
double crossing_point(const Profile1D& p);

// Translates the crossing to 0 and rescales (u, v) -> (lu(lx), lv(lx)) with
// l = a^{-1/2}, giving slope 1. The grid keeps its node count.
Profile1D normalize(const Profile1D& p);

// p(x + s): the same values on a grid moved by -s.
Profile1D shifted(const Profile1D& p, double s);

// max over nodes with |x| <= half_width of |u - a x^+| + |v - a x^-|.
// half_width <= 0 means the whole grid.
double deviation_constant(const Profile1D& p, double half_width = 0.0);

struct SlidingResult {
  double t0 = 0.0;
  double gap = 0.0;
  double t_start = 0.0;
  bool ordered_at_start = false;
};

// Scans t down from 16A/a in steps of the grid spacing for the smallest t
// with u_1(x + t) >= u_2(x) and v_1(x + t) <= v_2(x) at every node of p2,
// then bisects the last step. Orderings are tested up to `tolerance`.
SlidingResult sliding_compare(const Profile1D& p1, const Profile1D& p2, double tolerance = 1e-12);

// N(r) = r * int_{-r}^{r} (u'^2 + v'^2 + u^2 v^2) / (u(r)^2 + v(r)^2 + u(-r)^2 + v(-r)^2)
double almgren_1d(const Profile1D& p, double r);
AlmgrenTrace trace_1d(const Profile1D& p, const std::vector<double>& radii);

// Least-squares rate c in log v(x) ~ -c x over x >= x_from (nodes with
// v > 1e-280 only).
double decay_rate(const Profile1D& p, double x_from);

struct ShootingResult {
  double u0 = 0.0;     // u(0) = v(0) of the slope-1 profile
  double slope = 0.0;  // asymptotic slope of the c = 1 trajectory
};

// Independent oracle: RK4 from x = 0 with u = v = 1, u'(0) = -v'(0) = s,
// bisecting s between the trajectories where v turns negative and where
// v turns back up, then rescaling to slope 1.
ShootingResult shoot_profile(double step = 1e-3, double x_max = 12.0);

}  // namespace phasesep
