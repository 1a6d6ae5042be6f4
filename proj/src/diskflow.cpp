#include "phasesep/diskflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phasesep/almgren.hpp"
#include "phasesep/error.hpp"

namespace phasesep {

FlowState init_state(int d, double R, const DiskGrid& grid, FlowOptions options) {
  require(d >= 1, "degree must be a positive integer");
  require(grid.compatible_with(Degree::integer(d)),
          "grid n_theta must be divisible by 4d for the reflections to act on nodes");
  require(std::abs(grid.radius() - R) <= 1e-12 * R, "grid radius does not match R");
  FieldSet f = harmonic_pair(grid, d);
  const double cap = std::max(f.max_value(0), f.max_value(1));
  return make_flow_state(std::move(f), dihedral_pair_class(grid, d), cap, options);
}

FlowState step(const FlowState& s) { return flow_step(s); }

RelaxResult relax(FlowState s, double tol, int max_steps) {
  return flow_relax(std::move(s), tol, max_steps);
}

Report verify_theorem4(const FieldSet& f, const Theorem4Options& options) {
  require(f.k() == 2, "verify_theorem4 expects two components");
  require(f.degree.is_integer(), "verify_theorem4 expects an integer degree");
  const int d = f.degree.as_integer();
  const DiskGrid& g = f.grid;
  const auto phi = sample_phi(g, d);
  const auto& u = f.components[0];
  const auto& v = f.components[1];

  Report rep;
  rep.title = "bounded-ball solution properties";

  std::size_t wrong = 0;
  std::size_t checked = 0;
  double worst_u = std::numeric_limits<double>::infinity();
  double worst_v = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < g.node_count(); ++p) {
    const double plus = std::max(phi[p], 0.0);
    const double minus = std::max(-phi[p], 0.0);
    worst_u = std::min(worst_u, u[p] - plus);
    worst_v = std::min(worst_v, v[p] - minus);
    if (p >= g.interior_count() || phi[p] == 0.0) continue;
    ++checked;
    const double diff = u[p] - v[p];
    if (!((phi[p] > 0.0 && diff > 0.0) || (phi[p] < 0.0 && diff < 0.0))) ++wrong;
  }
  rep.metrics["sign_nodes_checked"] = static_cast<double>(checked);
  rep.add({"sign", wrong == 0, static_cast<double>(wrong), 0.0,
           "interior nodes off the nodal lines where sign(u - v) != sign(Phi)"});
  const double worst = std::min(worst_u, worst_v);
  rep.metrics["min_u_minus_phi_plus"] = worst_u;
  rep.metrics["min_v_minus_phi_minus"] = worst_v;
  rep.add({"comparison", worst >= -options.comparison_slack, worst, -options.comparison_slack,
           "min of u - Phi^+ and v - Phi^-"});

  const double sym = dihedral_pair_class(g, d).residual(f.components);
  rep.add({"symmetry", sym <= options.symmetry_slack, sym, options.symmetry_slack,
           "max |u(T_i z) - v(z)|"});

  const auto ladder = options.ladder.empty() ? ring_ladder(g) : options.ladder;
  const AlmgrenTrace t = trace(f, ladder);
  double n_max = -std::numeric_limits<double>::infinity();
  for (const auto& row : t.rows) n_max = std::max(n_max, row.N);
  rep.metrics["N_max"] = n_max;
  rep.add({"frequency", n_max <= d + options.frequency_slack, n_max, d + options.frequency_slack,
           "max N(r) over the ladder"});
  return rep;
}

}  // namespace phasesep
