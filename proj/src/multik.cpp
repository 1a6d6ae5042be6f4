#include "phasesep/multik.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phasesep/almgren.hpp"
#include "phasesep/error.hpp"

namespace phasesep {

MultiState init_multik(Degree d, int k, double R, const DiskGrid& grid, FlowOptions options) {
  require(k >= 2, "at least two components are needed");
  require(d.twice() % k == 0, "2d must be a multiple of k");
  require(grid.compatible_with(d),
          "grid n_theta must be divisible by 4d for the rotation by pi/d to act on nodes");
  require(std::abs(grid.radius() - R) <= 1e-12 * R, "grid radius does not match R");
  FieldSet f = psi_components(grid, d, k);
  double cap = 0.0;
  for (int c = 0; c < k; ++c) cap = std::max(cap, f.max_value(c));
  MultiState s(make_flow_state(std::move(f), rotation_class(grid, d, k), cap, options));
  s.h = d.twice() / k;
  return s;
}

MultiRelaxResult relax_multik(MultiState s, double tol, int max_steps) {
  const int h = s.h;
  RelaxResult r = flow_relax(std::move(s.flow), tol, max_steps);
  MultiRelaxResult out{MultiState(std::move(r.state))};
  out.state.h = h;
  out.converged = r.converged;
  out.diagnostic = r.diagnostic;
  return out;
}

std::vector<LadderRow> b_ladder(const FieldSet& f, const std::vector<double>& radii) {
  const AlmgrenTrace t = trace(f, radii);
  const double d = f.degree.value();
  std::vector<LadderRow> out;
  for (const auto& row : t.rows) out.push_back({row.r, row.H / std::pow(row.r, 2.0 * d), row.N});
  return out;
}

Report verify_theorem15(const FieldSet& f, const Theorem15Options& options) {
  const int k = f.k();
  const Degree d = f.degree;
  const DiskGrid& g = f.grid;
  require(k >= 2 && d.twice() % k == 0, "2d must be a multiple of k >= 2");
  Report rep;
  rep.title = "k-component solution properties";

  const auto rot = rotation_map(g, d, 1).permutation;
  const auto rot_k = rotation_map(g, d, k).permutation;
  const auto conj = conjugation_map(g).permutation;
  double r_rot = 0.0, r_conj = 0.0, r_period = 0.0;
  for (int c = 0; c < k; ++c) {
    const auto& a = f.components[c];
    const auto& next = f.components[(c + 1) % k];
    const auto& mirror = f.components[(k - c) % k];
    for (std::size_t p = 0; p < g.node_count(); ++p) {
      r_rot = std::max(r_rot, std::abs(next[p] - a[rot[p]]));
      r_conj = std::max(r_conj, std::abs(mirror[p] - a[conj[p]]));
      r_period = std::max(r_period, std::abs(a[p] - a[rot_k[p]]));
    }
  }
  rep.add({"rotation", r_rot <= options.symmetry_slack, r_rot, options.symmetry_slack,
           "max |u_{i+1}(z) - u_i(G z)|"});
  rep.add({"conjugation", r_conj <= options.symmetry_slack, r_conj, options.symmetry_slack,
           "max |u_{-i}(z) - u_i(conj z)|"});
  rep.add({"period", r_period <= options.symmetry_slack, r_period, options.symmetry_slack,
           "max |u_i(z) - u_i(G^k z)|"});

  double min_interior = std::numeric_limits<double>::infinity();
  for (const auto& c : f.components) {
    for (std::size_t p = 0; p < g.interior_count(); ++p) min_interior = std::min(min_interior, c[p]);
  }
  rep.add({"positive", min_interior > 0.0, min_interior, 0.0, "min over interior nodes"});

  const auto ladder = options.ladder.empty() ? ring_ladder(g) : options.ladder;
  const auto rows = b_ladder(f, ladder);
  double n_max = -std::numeric_limits<double>::infinity();
  for (const auto& row : rows) n_max = std::max(n_max, row.N);
  rep.add({"frequency", n_max <= d.value() + options.frequency_slack, n_max,
           d.value() + options.frequency_slack, "max N(r) over the ladder"});

  const double top = rows.empty() ? 0.0 : rows.back().r;
  double bmin = std::numeric_limits<double>::infinity();
  double bmax = 0.0;
  for (const auto& row : rows) {
    if (row.r < 0.5 * top) continue;
    bmin = std::min(bmin, row.b);
    bmax = std::max(bmax, row.b);
  }
  const double spread = bmax / bmin - 1.0;
  rep.metrics["b_top"] = rows.empty() ? 0.0 : rows.back().b;
  rep.metrics["N_top"] = rows.empty() ? 0.0 : rows.back().N;
  rep.add({"b_plateau", spread <= options.plateau_band, spread, options.plateau_band,
           "(max b / min b) - 1 over the top octave"});
  return rep;
}

}  // namespace phasesep
