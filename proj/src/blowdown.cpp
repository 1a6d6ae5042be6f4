#include "phasesep/blowdown.hpp"

#include <algorithm>
#include <cmath>

#include "phasesep/error.hpp"
#include "phasesep/polar_ops.hpp"

namespace phasesep {

namespace {

// Value on the ray of angle j at ring i; negative rings continue through
// the center onto the opposite ray.
double ray_value(const FieldSet& f, int c, int i, int j) {
  const DiskGrid& g = f.grid;
  if (i == 0) return f.components[c][0];
  if (i < 0) {
    i = -i;
    j = (j + g.angles() / 2) % g.angles();
  }
  return f.components[c][g.index(i, j)];
}

double value_at(const FieldSet& f, int c, double s, int j) {
  const DiskGrid& g = f.grid;
  const double t = s / g.dr();
  const double nearest = std::round(t);
  if (std::abs(t - nearest) <= 1e-9 * std::max(1.0, t)) {
    return ray_value(f, c, static_cast<int>(nearest), j);
  }
  int i0 = static_cast<int>(std::floor(t)) - 1;
  i0 = std::min(i0, g.rings() - 3);
  double out = 0.0;
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b != a) l *= (t - (i0 + b)) / static_cast<double>(a - b);
    }
    out += l * ray_value(f, c, i0 + a, j);
  }
  return out;
}

}  // namespace

BlowdownResult blow_down(const FieldSet& f, double R, int n_r) {
  require(f.k() == 2, "blow-down needs a two-component field set");
  const DiskGrid& g = f.grid;
  require(R > 0.0 && R <= g.radius() * (1.0 + 1e-12), "R must lie in (0, grid radius]");
  require(g.angles() % 2 == 0, "n_theta must be even");
  if (n_r <= 0) n_r = std::max(1, static_cast<int>(std::lround(R / g.dr())));
  require(n_r >= 1, "unit grid needs at least one ring");

  const DiskGrid unit(1.0, n_r, g.angles());
  FieldSet out(unit, f.degree, 2);
  for (int c = 0; c < 2; ++c) {
    out.components[c][0] = f.components[c][0];
    for (int i = 1; i <= n_r; ++i) {
      const double s = R * unit.ring_radius(i);
      for (int j = 0; j < unit.angles(); ++j) out.components[c][unit.index(i, j)] = value_at(f, c, s, j);
    }
  }

  const double d = f.degree.value();
  double reference = 0.0;
  for (int j = 0; j < unit.angles(); ++j) {
    const double x = std::cos(d * unit.angle(j));
    reference += x * x;
  }
  reference *= unit.dtheta();
  const PolarOperator op(unit);
  const double raw = op.ring_mass(out, n_r);
  if (!(raw > 0.0)) throw InvalidArgument("H(R) vanishes: the field is zero on the sphere of radius R");

  BlowdownResult b(std::move(out));
  b.R = R;
  b.L = std::sqrt(raw / reference);
  for (auto& comp : b.rescaled.components) {
    for (double& x : comp) x /= b.L;
  }
  b.degree = d;
  b.reference_mass = reference;
  b.boundary_mass = op.ring_mass(b.rescaled, n_r);
  b.center_value = std::max(b.rescaled.components[0][0], b.rescaled.components[1][0]);

  const double coupling = b.L * b.L * R * R;
  const auto& u = b.rescaled.components[0];
  const auto& v = b.rescaled.components[1];
  std::vector<double> lu(unit.node_count()), lv(unit.node_count());
  op.laplacian(u, lu);
  op.laplacian(v, lv);
  double eu = 0.0;
  double ev = 0.0;
  for (std::size_t p = 0; p < unit.interior_count(); ++p) {
    eu = std::max(eu, std::abs(lu[p] - coupling * u[p] * v[p] * v[p]));
    ev = std::max(ev, std::abs(lv[p] - coupling * v[p] * u[p] * u[p]));
  }
  b.equation_residual = eu + ev;

  const HarmonicFit fit = harmonic_fit(b, d);
  b.c = fit.c;
  b.residual = fit.residual;
  return b;
}

HarmonicFit harmonic_fit(const BlowdownResult& b, double d) {
  const DiskGrid& g = b.rescaled.grid;
  const int m = g.rings();
  double gc = 0.0;
  double cc = 0.0;
  double gg = 0.0;
  for (int j = 0; j < g.angles(); ++j) {
    const std::size_t p = g.index(m, j);
    const double diff = b.rescaled.components[0][p] - b.rescaled.components[1][p];
    const double basis = std::cos(d * g.angle(j));
    gc += diff * basis;
    cc += basis * basis;
    gg += diff * diff;
  }
  HarmonicFit fit;
  fit.c = gc / cc;
  double miss = 0.0;
  for (int j = 0; j < g.angles(); ++j) {
    const std::size_t p = g.index(m, j);
    const double diff = b.rescaled.components[0][p] - b.rescaled.components[1][p];
    const double e = diff - fit.c * std::cos(d * g.angle(j));
    miss += e * e;
  }
  fit.residual = gg > 0.0 ? std::sqrt(miss / gg) : 0.0;
  return fit;
}

PlateauEstimate frequency_plateau(const AlmgrenTrace& t, double band) {
  require(!t.rows.empty(), "empty trace");
  PlateauEstimate e;
  const auto& rows = t.rows;
  e.N_max = rows.back().N;
  const double half = 0.5 * rows.back().r;
  if (half <= rows.front().r) {
    e.N_half = rows.front().N;
  } else {
    std::size_t i = 1;
    while (rows[i].r < half) ++i;
    const double s = (half - rows[i - 1].r) / (rows[i].r - rows[i - 1].r);
    e.N_half = (1.0 - s) * rows[i - 1].N + s * rows[i].N;
  }
  e.estimate = static_cast<int>(std::lround(e.N_max));
  e.flatness = std::abs(e.N_max - e.N_half);
  e.confident = e.flatness <= band;
  return e;
}

PlateauEstimate frequency_plateau(const FieldSet& f, const std::vector<double>& ladder, double band) {
  return frequency_plateau(trace(f, ladder), band);
}

Report blowdown_ladder(const FieldSet& f, const std::vector<double>& radii, BlowdownOptions options,
                       std::vector<BlowdownRow>* rows) {
  require(!radii.empty(), "empty blow-down ladder");
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end());
  const double d = f.degree.value();
  const PlateauEstimate plateau = frequency_plateau(f, ring_ladder(f.grid), options.plateau_band);

  Report rep;
  rep.title = "blowdown";
  double norm_err = 0.0;
  double min_c = INFINITY;
  double worst_step = -INFINITY;
  double ratio_min = INFINITY;
  double ratio_max = 0.0;
  double previous = INFINITY;
  for (double R : rs) {
    const BlowdownResult b = blow_down(f, R);
    norm_err = std::max(norm_err, std::abs(b.boundary_mass / b.reference_mass - 1.0));
    min_c = std::min(min_c, b.c);
    if (previous < INFINITY) worst_step = std::max(worst_step, b.residual - previous);
    previous = b.residual;
    const double ratio = b.L / std::pow(R, d);
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
    const std::string tag = "(" + std::to_string(R) + ")";
    rep.metrics["L" + tag] = b.L;
    rep.metrics["c" + tag] = b.c;
    rep.metrics["residual" + tag] = b.residual;
    rep.metrics["center" + tag] = b.center_value;
    rep.metrics["equation_residual" + tag] = b.equation_residual;
    if (rows) rows->push_back({R, b.L, b.c, b.residual, plateau.estimate});
  }
  const int expected = options.expected_degree.value_or(static_cast<int>(std::lround(d)));
  rep.add({"normalization", norm_err <= options.normalization, norm_err, options.normalization,
           "relative boundary-mass mismatch"});
  rep.add({"fit_positive", min_c > 0.0, min_c, 0.0, "smallest fit coefficient"});
  if (rs.size() > 1) {
    rep.add({"residual_decreasing", worst_step < 0.0, worst_step, 0.0,
             "largest change of the fit residual between consecutive radii"});
  } else {
    rep.add({"residual_decreasing", true, 0.0, 0.0, "single radius"});
  }
  const double spread = ratio_max / ratio_min - 1.0;
  rep.add({"ratio_band", spread <= options.band, spread, options.band, "spread of L_R/R^d"});
  rep.add({"plateau", plateau.confident && plateau.estimate == expected,
           static_cast<double>(plateau.estimate), static_cast<double>(expected),
           "flatness " + std::to_string(plateau.flatness)});
  rep.metrics["N_max"] = plateau.N_max;
  rep.metrics["N_half"] = plateau.N_half;
  rep.metrics["flatness"] = plateau.flatness;
  return rep;
}

}  // namespace phasesep
