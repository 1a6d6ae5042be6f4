#pragma once

// Almgren-type quantities of k-component fields:
//   H(r) = r^{1-n} int_{dB_r} sum u_i^2
//   E(r) = r^{2-n} int_{B_r} sum |grad u_i|^2 + sum_{i<j} u_i^2 u_j^2
//   Ehat(r) = same with the coupling weighted by 2
//   N(r) = E(r)/H(r)
// On disk grids (n = 2) ring radii are exact; other radii interpolate
// linearly between the neighbouring rings.

#include <vector>

#include "phasesep/field.hpp"
#include "phasesep/report.hpp"

namespace phasesep {

struct AlmgrenRow {
  double r = 0.0;
  double H = 0.0;
  double E = 0.0;
  double Ehat = 0.0;
  double N = 0.0;
  // 2 int_{B_r} sum_{i<j} u_i^2 u_j^2 / int_{dB_r} sum u_i^2
  double coupling = 0.0;
};

struct AlmgrenTrace {
  std::vector<AlmgrenRow> rows;
  int n = 2;
  double d = 0.0;
};

double H_of_r(const FieldSet& f, double r);
double E_of_r(const FieldSet& f, double r);
double Ehat_of_r(const FieldSet& f, double r);
// Throws InvalidArgument when H(r) = 0.
double N_of_r(const FieldSet& f, double r);

// Radii must be strictly increasing inside (0, R].
AlmgrenTrace trace(const FieldSet& f, const std::vector<double>& radii);
// Ring radii r_i for i = first, first + stride, ... up to n_r.
std::vector<double> ring_ladder(const DiskGrid& grid, int first = 1, int stride = 1);

struct AlmgrenSlack {
  double monotone = 5e-3;
  double remainder = 1e-2;
  double doubling = 1e-2;
  double growth = 1e-2;
  double growth_r_min = 1.0;
  double growth_c_cap = 1e3;
};

// N nondecreasing along the rows up to `slack`.
Report check_monotone(const AlmgrenTrace& t, double slack = 5e-3);
// Cumulative trapezoid integral of coupling from (0, 0) stays below
// N(r) (1 + slack) at every row.
Report check_remainder(const AlmgrenTrace& t, double slack = 1e-2);
// H(r2)/H(r1) <= e^d (r2/r1)^{2d} (1 + slack) for all rows 1 < r1 <= r2.
// Requires N at the last row to be at most d (1 + slack).
Report check_doubling(const AlmgrenTrace& t, double d, double slack = 1e-2);
// Fits the smallest C >= 0 such that log(r^{-2d} Ehat) - 2 C r^{-1/2} is
// nondecreasing over rows with r >= r_min, then rechecks the rows with the
// fitted C and the given slack. Rejected when `symmetric` is false.
Report check_growth(const AlmgrenTrace& t, double d, bool symmetric, double slack = 1e-2,
                    double r_min = 1.0, double c_cap = 1e3);

// All four checks with prefixes monotone/, remainder/, doubling/, growth/.
Report check_all(const AlmgrenTrace& t, double d, bool symmetric, const AlmgrenSlack& slack = {});

}  // namespace phasesep
