#include "phasesep/almgren.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "phasesep/error.hpp"
#include "phasesep/polar_ops.hpp"

namespace phasesep {

namespace {

struct Bracket {
  int ring;   // lower ring
  double s;   // fraction toward ring + 1
};

Bracket locate(const DiskGrid& g, double r) {
  require(r > 0.0 && r <= g.radius() * (1.0 + 1e-14), "radius outside (0, R]");
  const double x = r / g.dr();
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-10 * std::max(1.0, x)) {
    return {static_cast<int>(nearest), 0.0};
  }
  const int i = std::min(static_cast<int>(std::floor(x)), g.rings() - 1);
  return {i, x - i};
}

double ring_value(const FieldSet& f, int c, int ring, int j) {
  return ring == 0 ? f.components[c][0] : f.components[c][f.grid.index(ring, j)];
}

struct Parts {
  double dirichlet;
  double coupling;
};

Parts parts_at_ring(const FieldSet& f, int ring) {
  const PolarOperator op(f.grid);
  Parts p{0.0, op.coupling_integral(f, ring)};
  for (const auto& c : f.components) p.dirichlet += op.dirichlet_energy(c, ring);
  return p;
}

Parts parts_at(const FieldSet& f, double r) {
  const Bracket b = locate(f.grid, r);
  const Parts lo = parts_at_ring(f, b.ring);
  if (b.s == 0.0) return lo;
  const Parts hi = parts_at_ring(f, b.ring + 1);
  return {lo.dirichlet + b.s * (hi.dirichlet - lo.dirichlet),
          lo.coupling + b.s * (hi.coupling - lo.coupling)};
}

}  // namespace

double H_of_r(const FieldSet& f, double r) {
  const Bracket b = locate(f.grid, r);
  const PolarOperator op(f.grid);
  if (b.s == 0.0) return op.ring_mass(f, b.ring);
  const int n = f.grid.angles();
  double s = 0.0;
  for (int c = 0; c < f.k(); ++c) {
    for (int j = 0; j < n; ++j) {
      const double v = (1.0 - b.s) * ring_value(f, c, b.ring, j) + b.s * ring_value(f, c, b.ring + 1, j);
      s += v * v;
    }
  }
  return f.grid.dtheta() * s;
}

double E_of_r(const FieldSet& f, double r) {
  const Parts p = parts_at(f, r);
  return p.dirichlet + p.coupling;
}

double Ehat_of_r(const FieldSet& f, double r) {
  const Parts p = parts_at(f, r);
  return p.dirichlet + 2.0 * p.coupling;
}

double N_of_r(const FieldSet& f, double r) {
  const double h = H_of_r(f, r);
  if (!(h > 0.0)) throw InvalidArgument("H(r) vanishes: degenerate field");
  return E_of_r(f, r) / h;
}

std::vector<double> ring_ladder(const DiskGrid& grid, int first, int stride) {
  require(first >= 1 && stride >= 1, "ring ladder needs first >= 1 and stride >= 1");
  std::vector<double> out;
  for (int i = first; i <= grid.rings(); i += stride) out.push_back(grid.ring_radius(i));
  return out;
}

AlmgrenTrace trace(const FieldSet& f, const std::vector<double>& radii) {
  AlmgrenTrace t;
  t.n = 2;
  t.d = f.degree.value();
  const PolarOperator op(f.grid);
  double prev = 0.0;
  for (double r : radii) {
    require(r > prev, "trace radii must be strictly increasing");
    prev = r;
    AlmgrenRow row;
    row.r = r;
    row.H = H_of_r(f, r);
    const Parts p = parts_at(f, r);
    row.E = p.dirichlet + p.coupling;
    row.Ehat = p.dirichlet + 2.0 * p.coupling;
    if (!(row.H > 0.0)) throw InvalidArgument("H(r) vanishes: degenerate field");
    row.N = row.E / row.H;
    row.coupling = 2.0 * p.coupling / (r * row.H);
    t.rows.push_back(row);
  }
  return t;
}

Report check_monotone(const AlmgrenTrace& t, double slack) {
  Report rep;
  rep.title = "frequency monotonicity";
  double worst = 0.0;
  double at = 0.0;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const double drop = t.rows[i - 1].N - t.rows[i].N;
    if (drop > worst) {
      worst = drop;
      at = t.rows[i].r;
    }
  }
  std::ostringstream msg;
  msg << "largest decrease of N at r = " << at;
  rep.add({"nondecreasing", worst <= slack, worst, slack, msg.str()});
  return rep;
}

Report check_remainder(const AlmgrenTrace& t, double slack) {
  Report rep;
  rep.title = "remainder inequality";
  double integral = 0.0;
  double r_prev = 0.0;
  double c_prev = 0.0;
  double worst = 0.0;
  bool ok = true;
  for (const auto& row : t.rows) {
    integral += 0.5 * (row.r - r_prev) * (row.coupling + c_prev);
    r_prev = row.r;
    c_prev = row.coupling;
    if (integral > row.N * (1.0 + slack)) ok = false;
    if (row.N > 0.0) worst = std::max(worst, integral / row.N);
  }
  rep.metrics["integral"] = integral;
  rep.add({"integral_below_N", ok, worst, 1.0 + slack, "max of integral / N(r)"});
  return rep;
}

Report check_doubling(const AlmgrenTrace& t, double d, double slack) {
  Report rep;
  rep.title = "doubling";
  const double n_last = t.rows.empty() ? 0.0 : t.rows.back().N;
  rep.add({"hypothesis_N_le_d", n_last <= d * (1.0 + slack), n_last, d * (1.0 + slack),
           "N at the largest radius"});
  double worst = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].r <= 1.0) continue;
    for (std::size_t j = i; j < t.rows.size(); ++j) {
      const double bound = std::exp(d) * std::pow(t.rows[j].r / t.rows[i].r, 2.0 * d);
      worst = std::max(worst, t.rows[j].H / t.rows[i].H / bound);
      ++pairs;
    }
  }
  rep.metrics["pairs"] = static_cast<double>(pairs);
  rep.add({"ratio_bound", worst <= 1.0 + slack, worst, 1.0 + slack,
           "max of H(r2)/H(r1) / (e^d (r2/r1)^{2d})"});
  return rep;
}

Report check_growth(const AlmgrenTrace& t, double d, bool symmetric, double slack, double r_min,
                    double c_cap) {
  Report rep;
  rep.title = "energy growth";
  rep.add({"symmetric_fields", symmetric, symmetric ? 1.0 : 0.0, 1.0,
           "the growth bound assumes the symmetric class"});
  if (!symmetric) return rep;
  std::vector<const AlmgrenRow*> rows;
  for (const auto& row : t.rows) {
    if (row.r >= r_min && row.Ehat > 0.0) rows.push_back(&row);
  }
  const auto q = [d](const AlmgrenRow* row) {
    return std::log(row->Ehat) - 2.0 * d * std::log(row->r);
  };
  double c = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double dq = q(rows[i]) - q(rows[i - 1]);
    const double dw = 2.0 * (1.0 / std::sqrt(rows[i - 1]->r) - 1.0 / std::sqrt(rows[i]->r));
    if (dq < 0.0) c = std::max(c, -dq / dw);
  }
  double worst = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double g0 = q(rows[i - 1]) - 2.0 * c / std::sqrt(rows[i - 1]->r);
    const double g1 = q(rows[i]) - 2.0 * c / std::sqrt(rows[i]->r);
    worst = std::max(worst, g0 - g1);
  }
  double ratio_constant = 0.0;
  if (!rows.empty()) {
    ratio_constant = std::exp(-2.0 * c * (1.0 / std::sqrt(rows.front()->r) - 1.0 / std::sqrt(rows.back()->r)));
  }
  rep.metrics["C"] = c;
  rep.metrics["ratio_constant"] = ratio_constant;
  rep.add({"fitted_C_bounded", c <= c_cap, c, c_cap, "smallest admissible C"});
  rep.add({"monotone_with_C", worst <= slack, worst, slack,
           "largest decrease of log(r^{-2d} Ehat) - 2C r^{-1/2}"});
  rep.add({"ratio_constant_positive", ratio_constant > 0.0, ratio_constant, 0.0,
           "Ehat(r2)/Ehat(r1) >= K (r2/r1)^{2d} with this K"});
  return rep;
}

Report check_all(const AlmgrenTrace& t, double d, bool symmetric, const AlmgrenSlack& slack) {
  Report rep;
  rep.title = "almgren checks";
  rep.merge(check_monotone(t, slack.monotone), "monotone/");
  rep.merge(check_remainder(t, slack.remainder), "remainder/");
  rep.merge(check_doubling(t, d, slack.doubling), "doubling/");
  rep.merge(check_growth(t, d, symmetric, slack.growth, slack.growth_r_min, slack.growth_c_cap),
            "growth/");
  return rep;
}

}  // namespace phasesep
