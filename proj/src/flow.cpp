#include "phasesep/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phasesep/error.hpp"
#include "phasesep/sparse_solver.hpp"

namespace phasesep {

class FlowContext {
 public:
  FlowContext(const DiskGrid& grid, SymmetryClass sym, double cap, FlowOptions options);

  PolarOperator op;
  SymmetryClass symmetry;
  double cap;
  FlowOptions options;
  CholeskySolver solver;
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<Eigen::Triplet<double>> stiffness;
  // Unknown index (one per interior orbit) of every interleaved slot p*k + c.
  std::vector<int> reduced;
  int unknowns = 0;

  // F_c = K u_c + W u_c sum_{e != c} u_e^2 on interior nodes, interleaved.
  Eigen::VectorXd force(const FieldSet& f) const;
  void assemble(const FieldSet& f, double dt, SparseMatrix& a);
};

FlowContext::FlowContext(const DiskGrid& grid, SymmetryClass sym, double cap, FlowOptions options)
    : op(grid), symmetry(std::move(sym)), cap(cap), options(options) {
  const std::size_t nodes = grid.node_count();
  const std::size_t interior = grid.interior_count();
  const int k = symmetry.components();
  const auto orbit = symmetry.orbit_ids();
  std::vector<int> compact(symmetry.orbit_count(), -1);
  reduced.resize(interior * k);
  for (std::size_t p = 0; p < interior; ++p) {
    for (int c = 0; c < k; ++c) {
      int& slot = compact[orbit[c * nodes + p]];
      if (slot < 0) slot = unknowns++;
      reduced[p * k + c] = slot;
    }
  }
}

Eigen::VectorXd FlowContext::force(const FieldSet& f) const {
  const int k = f.k();
  const std::size_t interior = f.grid.interior_count();
  Eigen::VectorXd out(static_cast<Eigen::Index>(interior) * k);
  std::vector<double> ku(f.grid.node_count());
  const auto& w = op.weights();
  for (int c = 0; c < k; ++c) {
    op.stiffness(f.components[c], ku);
    for (std::size_t p = 0; p < interior; ++p) {
      double s = 0.0;
      for (int e = 0; e < k; ++e) {
        if (e != c) s += f.components[e][p] * f.components[e][p];
      }
      out[static_cast<Eigen::Index>(p) * k + c] = ku[p] + w[p] * f.components[c][p] * s;
    }
  }
  return out;
}

void FlowContext::assemble(const FieldSet& f, double dt, SparseMatrix& a) {
  const int k = f.k();
  const auto& w = op.weights();
  const std::size_t interior = f.grid.interior_count();
  std::vector<double> diag_k;
  op.stiffness_entries(f.grid.rings(), stiffness, diag_k);

  triplets.clear();
  triplets.reserve(stiffness.size() * k + interior * k * k);
  for (const auto& t : stiffness) {
    for (int c = 0; c < k; ++c) triplets.emplace_back(t.row() * k + c, t.col() * k + c, t.value());
  }
  for (std::size_t p = 0; p < interior; ++p) {
    double total = 0.0;
    for (int e = 0; e < k; ++e) total += f.components[e][p] * f.components[e][p];
    const int base = static_cast<int>(p) * k;
    for (int c = 0; c < k; ++c) {
      const double uc = f.components[c][p];
      const double others = total - uc * uc;
      triplets.emplace_back(base + c, base + c, diag_k[p] + w[p] * (1.0 / dt + others));
      for (int e = c + 1; e < k; ++e) {
        triplets.emplace_back(base + e, base + c, 2.0 * w[p] * uc * f.components[e][p]);
      }
    }
  }
  for (auto& t : triplets) {
    int r = reduced[t.row()];
    int c = reduced[t.col()];
    double v = t.value();
    if (t.row() != t.col() && r == c) v *= 2.0;
    if (r < c) std::swap(r, c);
    t = Eigen::Triplet<double>(r, c, v);
  }
  a.resize(unknowns, unknowns);
  a.setFromTriplets(triplets.begin(), triplets.end());
}

FlowState make_flow_state(FieldSet initial, SymmetryClass symmetry, double cap,
                          FlowOptions options) {
  require(symmetry.nodes() == initial.grid.node_count() && symmetry.components() == initial.k(),
          "symmetry class does not match the field set");
  require(initial.min_value() >= 0.0, "initial fields must be nonnegative");
  require(cap > 0.0, "upper barrier must be positive");
  FlowState s(std::move(initial));
  s.context = std::make_shared<FlowContext>(s.fields.grid, std::move(symmetry), cap, options);
  const double h = s.fields.grid.dr();
  s.dt = options.dt_initial > 0.0 ? options.dt_initial : 0.25 * h * h;
  s.energy_trace.push_back({0.0, s.context->op.total_energy(s.fields)});
  s.residual = s.context->op.steady_residual(s.fields);
  return s;
}

const SymmetryClass& flow_symmetry(const FlowState& s) { return s.context->symmetry; }
const PolarOperator& flow_operator(const FlowState& s) { return s.context->op; }

FlowState flow_step(const FlowState& s) {
  FlowContext& ctx = *s.context;
  const int k = s.fields.k();
  const std::size_t interior = s.fields.grid.interior_count();
  const double radius = s.fields.grid.radius();
  const double dt_min = ctx.options.dt_min_factor * radius * radius;
  const double e0 = s.energy_trace.back().energy;
  const Eigen::VectorXd f = ctx.force(s.fields);

  FlowState next = s;
  double dt = s.dt;
  SparseMatrix a;
  while (true) {
    if (dt < dt_min) {
      std::ostringstream msg;
      msg << "flow step size fell below " << dt_min << " at t = " << s.t;
      throw ConvergenceError(msg.str(), s.residual);
    }
    ctx.assemble(s.fields, dt, a);
    if (!ctx.solver.factorize(a)) {
      dt *= 0.5;
      ++next.rejected;
      continue;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ctx.unknowns);
    for (Eigen::Index m = 0; m < f.size(); ++m) rhs[ctx.reduced[m]] -= f[m];
    const Eigen::VectorXd delta = ctx.solver.solve(rhs);
    FieldSet trial = s.fields;
    double clamped = 0.0;
    for (std::size_t p = 0; p < interior; ++p) {
      for (int c = 0; c < k; ++c) {
        double v = trial.components[c][p] + delta[ctx.reduced[p * k + c]];
        if (v < 0.0) {
          clamped -= v;
          v = 0.0;
        } else if (v > ctx.cap) {
          clamped += v - ctx.cap;
          v = ctx.cap;
        }
        trial.components[c][p] = v;
      }
    }
    ctx.symmetry.project(trial.components);
    const double e1 = ctx.op.total_energy(trial);
    if (e1 <= e0 + ctx.options.energy_slack * std::max(1.0, std::abs(e0))) {
      next.fields = std::move(trial);
      next.t = s.t + dt;
      next.dt = std::min(dt * ctx.options.dt_growth, ctx.options.dt_max);
      next.energy_trace.push_back({next.t, e1});
      next.residual = ctx.op.steady_residual(next.fields);
      next.clamped_mass = s.clamped_mass + clamped;
      ++next.steps;
      return next;
    }
    dt *= 0.5;
    ++next.rejected;
  }
}

RelaxResult flow_relax(FlowState s, double tol, int max_steps) {
  require(tol > 0.0, "relaxation tolerance must be positive");
  require(max_steps >= 0, "max_steps must be nonnegative");
  RelaxResult out(std::move(s));
  int taken = 0;
  while (out.state.residual > tol && taken < max_steps) {
    try {
      out.state = flow_step(out.state);
    } catch (const ConvergenceError& e) {
      out.diagnostic = e.what();
      return out;
    }
    ++taken;
  }
  out.converged = out.state.residual <= tol;
  if (!out.converged) {
    std::ostringstream msg;
    msg << "stopped after " << taken << " steps with residual " << out.state.residual;
    out.diagnostic = msg.str();
  }
  return out;
}

}  // namespace phasesep
