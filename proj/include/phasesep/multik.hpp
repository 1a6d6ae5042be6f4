#pragma once

// k-component solutions of Delta u_i = u_i sum_{j != i} u_j^2 on B_R with
// boundary data u_{i+1} = Psi∘G^i, G the rotation by pi/d, inside the class
//   u_{i+1}(z) = u_i(G z)      (indices mod k)
//   u_{-i}(z)  = u_i(conj z)
// which forces u_i(z) = u_i(G^k z).

#include <vector>

#include "phasesep/flow.hpp"
#include "phasesep/report.hpp"

namespace phasesep {

struct MultiState {
  explicit MultiState(FlowState f) : flow(std::move(f)) {}

  FlowState flow;
  int h = 1;  // 2d = h k

  const FieldSet& fields() const { return flow.fields; }
};

// Requires 2d = h k with k >= 2 and a grid compatible with d.
MultiState init_multik(Degree d, int k, double R, const DiskGrid& grid, FlowOptions options = {});

struct MultiRelaxResult {
  explicit MultiRelaxResult(MultiState s) : state(std::move(s)) {}

  MultiState state;
  bool converged = false;
  std::string diagnostic;
};

MultiRelaxResult relax_multik(MultiState s, double tol, int max_steps);

struct Theorem15Options {
  double symmetry_slack = 1e-12;
  double frequency_slack = 1e-2;
  double plateau_band = 0.1;
  std::vector<double> ladder;  // empty selects every ring
};

// Symmetry residuals (rotation, conjugation, period G^k), strict positivity
// on interior nodes, N(r) <= d on the ladder, and the ladder
// b(r) = r^{-(1+2d)} int_{dB_r} sum u_i^2 varying by at most plateau_band
// (relative to its minimum) over the top octave.
Report verify_theorem15(const FieldSet& f, const Theorem15Options& options = {});

struct LadderRow {
  double r;
  double b;
  double N;
};
std::vector<LadderRow> b_ladder(const FieldSet& f, const std::vector<double>& radii);

}  // namespace phasesep
