#pragma once

// Blow-down u_R(x) = u(Rx)/L_R, v_R(x) = v(Rx)/L_R with L_R fixed by
//   int_{dB_1} (u_R^2 + v_R^2) = int_{dB_1} Phi^2,
// both integrals taken with the same angular trapezoid rule.

#include <optional>
#include <vector>

#include "phasesep/almgren.hpp"
#include "phasesep/field.hpp"
#include "phasesep/report.hpp"

namespace phasesep {

struct BlowdownResult {
  explicit BlowdownResult(FieldSet f) : rescaled(std::move(f)) {}

  double R = 0.0;
  double L = 0.0;
  FieldSet rescaled;  // on the unit disk
  double c = 0.0;
  double residual = 0.0;
  double degree = 0.0;
  double reference_mass = 0.0;  // int_{dB_1} Phi^2
  double boundary_mass = 0.0;   // int_{dB_1} (u_R^2 + v_R^2)
  double center_value = 0.0;    // max(u_R(0), v_R(0))
  // sup |Delta_h u_R - L^2 R^2 u_R v_R^2| + same for v_R on interior nodes
  double equation_residual = 0.0;
};

// Two-component fields only. The unit grid has `n_r` rings (0 picks the
// number of original rings inside B_R) and the original angular nodes;
// values at radius rho*R are cubic in r along each ray, exact on rings.
BlowdownResult blow_down(const FieldSet& f, double R, int n_r = 0);

struct HarmonicFit {
  double c = 0.0;
  double residual = 0.0;
};

// Least squares of (u_R - v_R) on the unit circle against c cos(d theta);
// residual is the relative L2 misfit.
HarmonicFit harmonic_fit(const BlowdownResult& b, double d);

struct PlateauEstimate {
  int estimate = 0;
  double N_max = 0.0;
  double N_half = 0.0;
  double flatness = 0.0;
  bool confident = false;
};

// round(N(r_max)) and |N(r_max) - N(r_max/2)|, N at r_max/2 interpolated
// linearly between rows. Confident when the flatness is at most `band`.
PlateauEstimate frequency_plateau(const AlmgrenTrace& t, double band = 0.25);
PlateauEstimate frequency_plateau(const FieldSet& f, const std::vector<double>& ladder,
                                  double band = 0.25);

struct BlowdownOptions {
  double band = 0.15;            // allowed spread of L_R/R^d
  double normalization = 1e-10;  // relative
  double plateau_band = 0.25;
  std::optional<int> expected_degree;
};

struct BlowdownRow {
  double R = 0.0;
  double L = 0.0;
  double c = 0.0;
  double residual = 0.0;
  int N_plateau = 0;
};

// Blow-downs along the ladder with checks "normalization",
// "fit_positive", "residual_decreasing", "ratio_band", "plateau".
Report blowdown_ladder(const FieldSet& f, const std::vector<double>& radii,
                       BlowdownOptions options = {}, std::vector<BlowdownRow>* rows = nullptr);

}  // namespace phasesep
