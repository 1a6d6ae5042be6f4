#pragma once

// Two-component solutions on B_R with boundary data (Phi^+, Phi^-) inside
// the class u(T_i z) = v(z), obtained as steady states of the gradient flow.

#include <vector>

#include "phasesep/flow.hpp"
#include "phasesep/report.hpp"

namespace phasesep {

// Fields start at (Phi^+, Phi^-); the grid must be compatible with d and
// have radius R.
FlowState init_state(int d, double R, const DiskGrid& grid, FlowOptions options = {});
FlowState step(const FlowState& s);
RelaxResult relax(FlowState s, double tol, int max_steps);

struct Theorem4Options {
  double comparison_slack = 1e-8;
  double symmetry_slack = 1e-12;
  double frequency_slack = 1e-2;
  std::vector<double> ladder;  // empty selects every ring
};

// Checks on a two-component field set of degree d:
//   sign        sign(u - v) = sign(Phi) off the nodal lines
//   comparison  u >= Phi^+ and v >= Phi^-
//   symmetry    u(T_i z) = v(z)
//   frequency   N(r) <= d on the ladder
Report verify_theorem4(const FieldSet& f, const Theorem4Options& options = {});

}  // namespace phasesep
