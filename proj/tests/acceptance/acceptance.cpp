// Acceptance suite: one line per criterion, exit status 1 when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "phasesep/almgren.hpp"
#include "phasesep/blowdown.hpp"
#include "phasesep/diskflow.hpp"
#include "phasesep/eigencircle.hpp"
#include "phasesep/error.hpp"
#include "phasesep/multik.hpp"
#include "phasesep/profile1d.hpp"
#include "phasesep/stability.hpp"

using namespace phasesep;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what, double value) {
    if (!ok) passed = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << "=" << value << (ok ? "" : " (failed)");
  }
  void merge(const Report& r, const std::string& label) {
    for (const auto& c : r.checks) {
      if (!c.passed) {
        passed = false;
        detail << (detail.tellp() > 0 ? "; " : "") << label << "/" << c.name << "=" << c.value
               << " limit " << c.limit << " (failed)";
      }
    }
  }
};

int ntheta_for(int d) { return d == 3 ? 516 : 512; }

const FieldSet& steady(int d, double R) {
  static std::map<std::pair<int, double>, FieldSet> cache;
  const auto key = std::make_pair(d, R);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const DiskGrid g = make_disk_grid(R, 256, ntheta_for(d), Degree::integer(d));
    const RelaxResult r = relax(init_state(d, R, g), 1e-8, 500);
    if (!r.converged) throw ConvergenceError("flow d=" + std::to_string(d) + " R=" + std::to_string(R) +
                                             " did not converge: " + r.diagnostic, r.state.residual);
    it = cache.emplace(key, r.state.fields).first;
  }
  return it->second;
}

const std::vector<std::pair<int, double>> kCases{{1, 8.0}, {2, 16.0}, {3, 16.0}};

void harmonic_oracle(Outcome& o) {
  double worst_h = 0.0, worst_e = 0.0, worst_n = 0.0;
  for (int d : {1, 2, 3}) {
    const DiskGrid g = make_disk_grid(16.0, 256, ntheta_for(d), Degree::integer(d));
    const FieldSet f = harmonic_pair(g, d);
    for (double r : ring_ladder(g, 64)) {
      const double p = std::numbers::pi * std::pow(r, 2 * d);
      worst_h = std::max(worst_h, std::abs(H_of_r(f, r) - p) / p);
      worst_e = std::max(worst_e, std::abs(E_of_r(f, r) - d * p) / (d * p));
      worst_n = std::max(worst_n, std::abs(N_of_r(f, r) - d));
    }
  }
  o.require(worst_h <= 1e-3, "H rel err", worst_h);
  o.require(worst_e <= 1e-3, "E rel err", worst_e);
  o.require(worst_n <= 1e-3, "|N-d|", worst_n);
}

void steady_states(Outcome& o) {
  for (const auto& [d, R] : kCases) {
    const Report r = verify_theorem4(steady(d, R));
    o.merge(r, "d" + std::to_string(d));
    o.require(r.passed(), "d" + std::to_string(d) + " checks", static_cast<double>(r.checks.size()));
  }
}

void inequalities(Outcome& o) {
  for (const auto& [d, R] : kCases) {
    const FieldSet& f = steady(d, R);
    const Report r = check_all(trace(f, ring_ladder(f.grid)), d, true);
    o.merge(r, "d" + std::to_string(d));
    o.require(r.passed(), "d" + std::to_string(d) + " checks", static_cast<double>(r.checks.size()));
  }
}

void frequency_trend(Outcome& o) {
  double previous = -INFINITY;
  bool increasing = true;
  double n16 = 0.0;
  for (double R : {8.0, 12.0, 16.0}) {
    const double n = N_of_r(steady(2, R), 0.9 * R);
    increasing = increasing && n > previous;
    previous = n;
    n16 = n;
    o.detail << (o.detail.tellp() > 0 ? "; " : "") << "N(0.9*" << R << ")=" << n;
  }
  o.require(n16 >= 1.8, "N(14.4)", n16);
  o.require(increasing, "increasing", increasing ? 1.0 : 0.0);
}

void profile_uniqueness(Outcome& o) {
  const Profile1D a = normalize(solve_profile(1.0, 40.0, 4096, 1e-10, 1));
  const Profile1D b = normalize(solve_profile(1.0, 40.0, 4096, 1e-10, 2));
  const SlidingResult s = sliding_compare(a, b);
  o.require(s.gap <= 1e-6, "sliding gap", s.gap);
  const double shot = std::abs(a.u_at(0.0) - shoot_profile().u0);
  o.require(shot <= 1e-6, "shooting", shot);
  const double n = almgren_1d(a, 32.0);
  o.require(n >= 0.95 && n <= 1.0, "N(32)", n);
}

void eigen_asymptotics(Outcome& o) {
  const std::vector<double> lambdas{1e2, 1e3, 1e4, 1e5, 1e6};
  for (int d : {2, 3}) {
    double bound = -INFINITY, gap = 0.0;
    std::vector<double> values;
    for (double lam : lambdas) {
      CircleConfig c;
      c.d = d;
      c.Lambda = lam;
      c.n = 4608;
      const EigenResult x = minimize_L(c, 1);
      const EigenResult y = minimize_L_newton(c, 1);
      if (!x.converged || !y.converged) o.require(false, "converged at Lambda", lam);
      bound = std::max(bound, x.value - d * d);
      gap = std::max(gap, std::abs(x.value - y.value));
      values.push_back(x.value);
    }
    const GapFit fit = fit_gap(d, lambdas, values);
    const std::string tag = "d" + std::to_string(d) + " ";
    o.require(bound <= 1e-6, tag + "max L-d^2", bound);
    o.require(fit.valid && fit.slope >= -0.35 && fit.slope <= -0.15, tag + "slope", fit.slope);
    o.require(gap <= 1e-6, tag + "agreement", gap);
  }
}

void stability(Outcome& o) {
  constexpr double j01 = 2.404825557695773;
  const DiskGrid g(20.0, 128, 256);
  const std::vector<double> radii{5.0, 10.0, 20.0};
  double bessel = 0.0;
  const FieldSet zero = zero_background(g);
  for (double R : radii) {
    const double exact = j01 * j01 / (R * R);
    bessel = std::max(bessel, std::abs(first_eigenvalue(zero, R).lambda - exact) / exact);
  }
  o.require(bessel <= 1e-3, "Bessel rel err", bessel);

  const FieldSet bg = profile_background(normalize(solve_profile(1.0, 40.0, 4096, 1e-10, 1)), g);
  std::vector<LambdaRow> rows;
  const Report mono = lambda_monotone(bg, radii, {}, 1e-8, &rows);
  double lowest = INFINITY;
  for (const auto& r : rows) lowest = std::min(lowest, r.lambda);
  o.require(lowest >= -1e-6, "min lambda", lowest);
  o.require(mono.passed(), "nonincreasing", mono.check("nonincreasing").value);
  double grad = 0.0;
  bool grad_ok = true;
  for (double R : radii) {
    const Report r = gradient_check(bg, R, 1);
    grad = std::max(grad, r.check("gradient").value);
    grad_ok = grad_ok && r.passed();
  }
  o.require(grad_ok, "gradient mismatch", grad);
}

void blowdown(Outcome& o) {
  BlowdownOptions opt;
  opt.expected_degree = 2;
  std::vector<BlowdownRow> rows;
  const Report r = blowdown_ladder(steady(2, 16.0), {4.0, 8.0, 12.0}, opt, &rows);
  o.require(r.check("residual_decreasing").passed, "residual increase", r.check("residual_decreasing").value);
  o.require(r.check("plateau").passed, "plateau", static_cast<double>(rows.empty() ? 0 : rows.back().N_plateau));
  o.require(r.check("ratio_band").passed, "L_R/R^d spread", r.check("ratio_band").value);
  o.merge(r, "blowdown");
}

void multik(Outcome& o) {
  const Degree d = Degree::integer(3);
  const DiskGrid g = make_disk_grid(16.0, 256, 516, d);
  const MultiRelaxResult r = relax_multik(init_multik(d, 3, 16.0, g), 1e-8, 500);
  o.require(r.converged, "converged", r.state.flow.residual);
  o.require(r.state.h == 2, "h", r.state.h);
  const Report rep = verify_theorem15(r.state.fields());
  for (const char* name : {"rotation", "conjugation", "period"}) {
    o.require(rep.check(name).passed, name, rep.check(name).value);
  }
  o.require(rep.check("frequency").passed, "max N", rep.check("frequency").value);
  o.require(rep.check("b_plateau").passed, "b spread", rep.check("b_plateau").value);
  o.merge(rep, "multik");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"harmonic-pair oracle", harmonic_oracle},
      {"steady-state ordering, symmetry and frequency", steady_states},
      {"frequency inequalities on steady states", inequalities},
      {"frequency trend for d=2", frequency_trend},
      {"one-dimensional uniqueness", profile_uniqueness},
      {"eigenvalue asymptotics on the circle", eigen_asymptotics},
      {"linearized stability", stability},
      {"blow-down limit", blowdown},
      {"multi-component states", multik},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << (o.detail.tellp() > 0 ? "; " : "") << "aborted: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.passed) ++failed;
    std::printf("%s criterion %zu: %s [%s] (%.1f s)\n", o.passed ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
