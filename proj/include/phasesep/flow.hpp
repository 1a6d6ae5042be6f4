#pragma once

// Gradient flow W du/dt = -(K u + W u sum_{e!=c} u_e^2) for k coupled
// fields with frozen outer-ring data, integrated by linearly implicit
// pseudo-transient continuation: each step solves
//   (W/dt + J) delta = -F(u)
// with J the Jacobian of F, restricted to the symmetry class (one unknown
// per orbit of interior slots), then clamps to [0, cap] and projects. dt grows geometrically on accepted steps and is halved on
// a failed factorization or an energy increase.

#include <memory>
#include <string>
#include <vector>

#include "phasesep/field.hpp"
#include "phasesep/polar_ops.hpp"
#include "phasesep/symmetry.hpp"

namespace phasesep {

struct FlowOptions {
  double dt_initial = 0.0;  // 0 selects dr^2/4
  double dt_growth = 2.0;
  double dt_max = 1e12;
  double dt_min_factor = 1e-12;  // floor is dt_min_factor * R^2
  double energy_slack = 1e-10;   // relative to max(1, E)
};

struct EnergySample {
  double t;
  double energy;
};

class FlowContext;

struct FlowState {
  explicit FlowState(FieldSet f) : fields(std::move(f)) {}

  FieldSet fields;
  double t = 0.0;
  double dt = 0.0;
  std::vector<EnergySample> energy_trace;
  double residual = 0.0;
  double clamped_mass = 0.0;
  int steps = 0;
  int rejected = 0;
  std::shared_ptr<FlowContext> context;
};

struct RelaxResult {
  explicit RelaxResult(FlowState s) : state(std::move(s)) {}

  FlowState state;
  bool converged = false;
  std::string diagnostic;
};

// The initial fields must be nonnegative and already symmetric; the outer
// ring is frozen from them. cap bounds every component from above.
FlowState make_flow_state(FieldSet initial, SymmetryClass symmetry, double cap,
                          FlowOptions options = {});

// One accepted step. Throws ConvergenceError when dt falls below its floor.
FlowState flow_step(const FlowState& s);

// Steps until the steady residual is at most tol or max_steps is reached.
RelaxResult flow_relax(FlowState s, double tol, int max_steps);

const SymmetryClass& flow_symmetry(const FlowState& s);
const PolarOperator& flow_operator(const FlowState& s);

}  // namespace phasesep
