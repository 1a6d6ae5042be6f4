#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>
#include <vector>

#include "phasesep/almgren.hpp"
#include "phasesep/blowdown.hpp"
#include "phasesep/diskflow.hpp"
#include "phasesep/eigencircle.hpp"
#include "phasesep/error.hpp"
#include "phasesep/io.hpp"
#include "phasesep/multik.hpp"
#include "phasesep/profile1d.hpp"
#include "phasesep/stability.hpp"

namespace phasesep::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}
std::string fmt(int x) { return std::to_string(x); }
std::string fmt(std::uint64_t x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "true" : "false"; }
std::string fmt(const std::string& x) { return x; }
std::string fmt(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + fmt(xs[i]);
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Options of one subcommand that double as config keys.
class Keys {
 public:
  explicit Keys(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& key, T& var, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + key, var, help);
    if constexpr (std::is_same_v<T, std::vector<double>>) opt->delimiter(',');
    entries_.push_back({key, opt, [&var] { return fmt(var); }});
    return opt;
  }

  void apply(const std::map<std::string, std::string>& config) {
    for (const auto& [key, value] : config) {
      const Entry* e = find(key);
      if (!e) throw InvalidArgument("unknown config key '" + key + "' for " + app_->get_name());
      try {
        e->option->default_val(value);
      } catch (const CLI::Error& err) {
        throw InvalidArgument("config key '" + key + "': " + err.what());
      }
    }
  }

  std::string resolved() const {
    std::string s;
    for (const auto& e : entries_) s += e.key + "=" + e.value() + "\n";
    return s;
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* option;
    std::function<std::string()> value;
  };
  const Entry* find(const std::string& key) const {
    for (const auto& e : entries_) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

  CLI::App* app_;
  std::vector<Entry> entries_;
};

class RunDir {
 public:
  explicit RunDir(fs::path root) : root_(std::move(root)) {}
  const fs::path& root() const { return root_; }
  fs::path operator/(const std::string& name) const { return root_ / name; }

  void csv(const std::string& name, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows) const {
    write_csv(root_ / name, header, rows);
  }
  void text(const std::string& name, const std::string& content) const {
    atomic_write(root_ / name, content);
  }

 private:
  fs::path root_;
};

std::vector<std::vector<double>> trace_rows(const AlmgrenTrace& t) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : t.rows) rows.push_back({r.r, r.H, r.E, r.Ehat, r.N, r.coupling});
  return rows;
}

const std::vector<std::string> kTraceHeader{"r", "H", "E", "Ehat", "N", "coupling"};

void write_flow_outputs(const RunDir& dir, const FlowState& s) {
  std::vector<std::vector<double>> energy;
  for (const auto& e : s.energy_trace) energy.push_back({e.t, e.energy});
  dir.csv("energy.csv", {"t", "E"}, energy);
  write_psfld1(dir / "fields.psfld", s.fields);
}

Check converged_check(bool converged, double residual, double tol, const std::string& diagnostic) {
  return {"converged", converged, residual, tol, diagnostic};
}

Check range_check(const std::string& name, double value, double lo, double hi) {
  return {name, value >= lo && value <= hi, value, hi,
          "expected in [" + fmt(lo) + ", " + fmt(hi) + "]"};
}

struct Command {
  CLI::App* app = nullptr;
  std::unique_ptr<Keys> keys;
  std::string out;
  std::string config;
  std::function<void()> validate;
  std::function<Report(const RunDir&)> execute;
};

// ---------------------------------------------------------------- profile

struct ProfileParams {
  double a = 1.0;
  double L = 40.0;
  int n = 4096;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  std::uint64_t seed2 = 2;
  bool compare = true;
  double sliding_tol = 1e-6;
  double shooting_tol = 1e-6;
  double N_radius = 32.0;
  double N_low = 0.95;
  double N_high = 1.0;
  double monotone_slack = 5e-3;
};

void setup_profile(Command& c, ProfileParams& p) {
  Keys& k = *c.keys;
  k.add("a", p.a, "asymptotic slope");
  k.add("L", p.L, "half-length of the interval");
  k.add("n", p.n, "number of intervals");
  k.add("tol", p.tol, "Newton tolerance");
  k.add("seed", p.seed, "seed of the initial perturbation");
  k.add("seed2", p.seed2, "seed of the comparison solve");
  k.add("compare", p.compare, "run the sliding comparison against seed2");
  k.add("sliding_tol", p.sliding_tol, "bound on the sliding gap");
  k.add("shooting_tol", p.shooting_tol, "bound on |u(0) - shooting u(0)|");
  k.add("N_radius", p.N_radius, "radius of the frequency check");
  k.add("N_low", p.N_low, "lower bound of N(N_radius)");
  k.add("N_high", p.N_high, "upper bound of N(N_radius)");
  k.add("monotone_slack", p.monotone_slack, "slack of the N monotonicity check");
  c.validate = [&p] {
    require(p.a > 0.0 && p.L > 0.0 && p.L >= 10.0 / p.a, "need a > 0 and L >= 10/a");
    require(p.n >= 512 && p.n % 2 == 0, "n must be even and at least 512");
    require(p.tol > 0.0, "tol must be positive");
    require(p.N_radius > 0.0 && p.N_radius < p.L * std::sqrt(p.a), "N_radius must lie inside the normalized interval");
  };
  c.execute = [&p](const RunDir& dir) {
    Report rep;
    rep.title = "profile";
    const Profile1D q = normalize(solve_profile(p.a, p.L, p.n, p.tol, p.seed));
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < q.size(); ++i) rows.push_back({q.x(i), q.u[i], q.v[i]});
    dir.csv("profile.csv", {"x", "u", "v"}, rows);

    std::vector<double> radii;
    for (double r = 0.5; r <= p.N_radius + 1e-12; r += 0.5) radii.push_back(r);
    const AlmgrenTrace t = trace_1d(q, radii);
    dir.csv("trace.csv", kTraceHeader, trace_rows(t));

    const double residual = profile_residual(q);
    rep.add({"residual", residual <= p.tol, residual, p.tol, "Numerov residual after normalization"});
    const ShootingResult shot = shoot_profile();
    const double u0 = q.u_at(0.0);
    rep.add({"shooting", std::abs(u0 - shot.u0) <= p.shooting_tol, std::abs(u0 - shot.u0),
             p.shooting_tol, "u(0) against the shooting oracle"});
    rep.add(range_check("N_range", t.rows.back().N, p.N_low, p.N_high));
    rep.merge(check_monotone(t, p.monotone_slack), "almgren/");
    if (p.compare) {
      const Profile1D q2 = normalize(solve_profile(p.a, p.L, p.n, p.tol, p.seed2));
      const SlidingResult s = sliding_compare(q, q2);
      rep.add({"sliding", s.gap <= p.sliding_tol, s.gap, p.sliding_tol, "t0 = " + fmt(s.t0)});
      rep.metrics["t0"] = s.t0;
    }
    rep.metrics["a"] = p.a;
    rep.metrics["A"] = deviation_constant(q);
    rep.metrics["residual"] = residual;
    rep.metrics["iterations"] = q.iterations;
    rep.metrics["u0"] = u0;
    rep.metrics["u0_shooting"] = shot.u0;
    for (const auto& row : t.rows) {
      if (std::abs(row.r - std::round(row.r)) < 1e-12) rep.metrics["N(" + fmt(row.r) + ")"] = row.N;
    }
    return rep;
  };
}

// ------------------------------------------------------------------- disk

struct DiskParams {
  int d = 2;
  double R = 16.0;
  int nr = 256;
  int ntheta = 512;
  double tol = 1e-8;
  int max_steps = 500;
  double comparison_slack = 1e-8;
  double symmetry_slack = 1e-12;
  double frequency_slack = 1e-2;
  double monotone_slack = 5e-3;
  double remainder_slack = 1e-2;
  double doubling_slack = 1e-2;
  double growth_slack = 1e-2;
};

void add_disk_keys(Keys& k, DiskParams& p) {
  k.add("d", p.d, "degree of the boundary data Re(z^d)");
  k.add("R", p.R, "disk radius");
  k.add("nr", p.nr, "radial cells");
  k.add("ntheta", p.ntheta, "angular nodes (divisible by 4d)");
  k.add("tol", p.tol, "steady residual tolerance");
  k.add("max_steps", p.max_steps, "maximum flow steps");
}

FlowState relax_disk(const DiskParams& p, Report& rep) {
  const DiskGrid g = make_disk_grid(p.R, p.nr, p.ntheta, Degree::integer(p.d));
  const RelaxResult r = relax(init_state(p.d, p.R, g), p.tol, p.max_steps);
  rep.add(converged_check(r.converged, r.state.residual, p.tol, r.diagnostic));
  rep.metrics["steps"] = r.state.steps;
  rep.metrics["energy"] = r.state.energy_trace.back().energy;
  return r.state;
}

void setup_disk(Command& c, DiskParams& p) {
  Keys& k = *c.keys;
  add_disk_keys(k, p);
  k.add("comparison_slack", p.comparison_slack, "slack of u >= Phi^+");
  k.add("symmetry_slack", p.symmetry_slack, "bound on the symmetry residual");
  k.add("frequency_slack", p.frequency_slack, "slack of N <= d");
  k.add("monotone_slack", p.monotone_slack, "slack of N nondecreasing");
  k.add("remainder_slack", p.remainder_slack, "slack of the remainder inequality");
  k.add("doubling_slack", p.doubling_slack, "slack of the doubling bound");
  k.add("growth_slack", p.growth_slack, "slack of the growth bound");
  c.validate = [&p] {
    require(p.d >= 1, "d must be at least 1");
    make_disk_grid(p.R, p.nr, p.ntheta, Degree::integer(p.d));
    require(p.tol > 0.0 && p.max_steps > 0, "tol and max_steps must be positive");
  };
  c.execute = [&p](const RunDir& dir) {
    Report rep;
    rep.title = "disk";
    const FlowState s = relax_disk(p, rep);
    write_flow_outputs(dir, s);
    const AlmgrenTrace t = trace(s.fields, ring_ladder(s.fields.grid));
    dir.csv("trace.csv", kTraceHeader, trace_rows(t));
    Theorem4Options opt;
    opt.comparison_slack = p.comparison_slack;
    opt.symmetry_slack = p.symmetry_slack;
    opt.frequency_slack = p.frequency_slack;
    rep.merge(verify_theorem4(s.fields, opt), "theorem4/");
    AlmgrenSlack slack;
    slack.monotone = p.monotone_slack;
    slack.remainder = p.remainder_slack;
    slack.doubling = p.doubling_slack;
    slack.growth = p.growth_slack;
    rep.merge(check_all(t, p.d, true, slack), "almgren/");
    rep.metrics["N(0.9R)"] = N_of_r(s.fields, 0.9 * p.R);
    return rep;
  };
}

// ----------------------------------------------------------------- multik

struct MultikParams {
  double d = 3.0;
  int k = 3;
  double R = 16.0;
  int nr = 256;
  int ntheta = 516;
  double tol = 1e-8;
  int max_steps = 500;
  double symmetry_slack = 1e-12;
  double frequency_slack = 1e-2;
  double plateau_band = 0.1;
};

void setup_multik(Command& c, MultikParams& p) {
  Keys& k = *c.keys;
  k.add("d", p.d, "degree (integer or half-integer)");
  k.add("k", p.k, "number of components");
  k.add("R", p.R, "disk radius");
  k.add("nr", p.nr, "radial cells");
  k.add("ntheta", p.ntheta, "angular nodes (divisible by 4d)");
  k.add("tol", p.tol, "steady residual tolerance");
  k.add("max_steps", p.max_steps, "maximum flow steps");
  k.add("symmetry_slack", p.symmetry_slack, "bound on the symmetry residuals");
  k.add("frequency_slack", p.frequency_slack, "slack of N <= d");
  k.add("plateau_band", p.plateau_band, "allowed spread of the b-ladder on the top octave");
  c.validate = [&p] {
    const Degree d = Degree::from_value(p.d);
    require(p.k >= 2 && d.twice() % p.k == 0, "k must be at least 2 and divide 2d");
    make_disk_grid(p.R, p.nr, p.ntheta, d);
    require(p.tol > 0.0 && p.max_steps > 0, "tol and max_steps must be positive");
  };
  c.execute = [&p](const RunDir& dir) {
    Report rep;
    rep.title = "multik";
    const Degree d = Degree::from_value(p.d);
    const DiskGrid g = make_disk_grid(p.R, p.nr, p.ntheta, d);
    const MultiRelaxResult r = relax_multik(init_multik(d, p.k, p.R, g), p.tol, p.max_steps);
    rep.add(converged_check(r.converged, r.state.flow.residual, p.tol, r.diagnostic));
    write_flow_outputs(dir, r.state.flow);
    const auto ladder = ring_ladder(g);
    const AlmgrenTrace t = trace(r.state.fields(), ladder);
    dir.csv("trace.csv", kTraceHeader, trace_rows(t));
    std::vector<std::vector<double>> rows;
    for (const auto& row : b_ladder(r.state.fields(), ladder)) rows.push_back({row.r, row.b, row.N});
    dir.csv("b_ladder.csv", {"r", "b", "N"}, rows);
    Theorem15Options opt;
    opt.symmetry_slack = p.symmetry_slack;
    opt.frequency_slack = p.frequency_slack;
    opt.plateau_band = p.plateau_band;
    rep.merge(verify_theorem15(r.state.fields(), opt), "theorem15/");
    rep.metrics["h"] = r.state.h;
    rep.metrics["steps"] = r.state.flow.steps;
    return rep;
  };
}

// ---------------------------------------------------------------- almgren

struct AlmgrenParams {
  std::string input;
  double d = 0.0;
  bool symmetric = true;
  int first = 1;
  int stride = 1;
  double monotone_slack = 5e-3;
  double remainder_slack = 1e-2;
  double doubling_slack = 1e-2;
  double growth_slack = 1e-2;
};

void setup_almgren(Command& c, AlmgrenParams& p) {
  Keys& k = *c.keys;
  k.add("input", p.input, "PSFLD1 field dump");
  k.add("d", p.d, "degree for the doubling and growth checks (0 takes the dump's)");
  k.add("symmetric", p.symmetric, "fields carry the dihedral symmetry");
  k.add("first", p.first, "first ring of the ladder");
  k.add("stride", p.stride, "ring stride of the ladder");
  k.add("monotone_slack", p.monotone_slack, "slack of N nondecreasing");
  k.add("remainder_slack", p.remainder_slack, "slack of the remainder inequality");
  k.add("doubling_slack", p.doubling_slack, "slack of the doubling bound");
  k.add("growth_slack", p.growth_slack, "slack of the growth bound");
  c.validate = [&p] {
    require(!p.input.empty(), "input is required");
    require(fs::exists(p.input), "input " + p.input + " does not exist");
    require(p.first >= 1 && p.stride >= 1, "first and stride must be positive");
    require(p.d >= 0.0, "d must be nonnegative");
  };
  c.execute = [&p](const RunDir& dir) {
    Report rep;
    rep.title = "almgren";
    const FieldSet f = read_psfld1(p.input);
    const double d = p.d > 0.0 ? p.d : f.degree.value();
    const AlmgrenTrace t = trace(f, ring_ladder(f.grid, p.first, p.stride));
    dir.csv("trace.csv", kTraceHeader, trace_rows(t));
    AlmgrenSlack slack;
    slack.monotone = p.monotone_slack;
    slack.remainder = p.remainder_slack;
    slack.doubling = p.doubling_slack;
    slack.growth = p.growth_slack;
    rep.merge(check_all(t, d, p.symmetric, slack), "");
    rep.metrics["N_max"] = t.rows.back().N;
    return rep;
  };
}

// ------------------------------------------------------------------ eigen

struct EigenParams {
  int d = 2;
  std::vector<double> lambdas{0, 10, 100, 1000, 10000, 100000, 1000000};
  int n = 4608;
  double tol = 1e-9;
  int max_iterations = 20000;
  std::uint64_t seed = 1;
  double agreement = 1e-6;
  double bound_slack = 1e-6;
  double slope_low = -0.35;
  double slope_high = -0.15;
  double conservation_tol = 1e-6;
  double conservation_max_Lambda = 10.0;
};

void setup_eigen(Command& c, EigenParams& p) {
  Keys& k = *c.keys;
  k.add("d", p.d, "number of components");
  k.add("lambdas", p.lambdas, "comma-separated Lambda ladder");
  k.add("n", p.n, "nodes on the circle (divisible by 4 and 2d)");
  k.add("tol", p.tol, "Euler-Lagrange residual tolerance");
  k.add("max_iterations", p.max_iterations, "iteration cap of the gradient optimizer");
  k.add("seed", p.seed, "seed of the initial guess");
  k.add("agreement", p.agreement, "bound on the gap between the two optimizers");
  k.add("bound_slack", p.bound_slack, "slack of L <= d^2");
  k.add("slope_low", p.slope_low, "lower end of the allowed log-log slope");
  k.add("slope_high", p.slope_high, "upper end of the allowed log-log slope");
  k.add("conservation_tol", p.conservation_tol, "bound on the spread of the conserved quantity");
  k.add("conservation_max_Lambda", p.conservation_max_Lambda, "largest Lambda of the conservation check");
  c.validate = [&p] {
    require(p.d >= 1, "d must be at least 1");
    require(p.n >= 16 && p.n % 4 == 0 && p.n % (2 * p.d) == 0, "n must be divisible by 4 and 2d");
    require(!p.lambdas.empty(), "lambdas must not be empty");
    for (double l : p.lambdas) require(l >= 0.0, "Lambda must be nonnegative");
    require(p.tol > 0.0 && p.max_iterations > 0, "tol and max_iterations must be positive");
  };
  c.execute = [&p](const RunDir& dir) {
    Report rep;
    rep.title = "eigen";
    std::vector<std::vector<double>> rows_a, rows_b;
    std::vector<double> values;
    bool all_converged = true;
    double worst_residual = 0.0;
    double worst_gap = 0.0;
    double worst_bound = -INFINITY;
    double worst_conservation = 0.0;
    const double limit = static_cast<double>(p.d) * p.d;
    for (double lam : p.lambdas) {
      CircleConfig cfg;
      cfg.d = p.d;
      cfg.Lambda = lam;
      cfg.n = p.n;
      cfg.tol = p.tol;
      cfg.max_iterations = p.max_iterations;
      const EigenResult a = minimize_L(cfg, p.seed);
      const EigenResult b = minimize_L_newton(cfg, p.seed);
      all_converged = all_converged && a.converged && b.converged;
      worst_residual = std::max({worst_residual, a.residual, b.residual});
      worst_gap = std::max(worst_gap, std::abs(a.value - b.value));
      worst_bound = std::max(worst_bound, a.value - limit);
      if (lam <= p.conservation_max_Lambda) {
        worst_conservation = std::max(worst_conservation, conservation_spread(a, lam));
      }
      values.push_back(a.value);
      rows_a.push_back({static_cast<double>(p.d), lam, a.value, a.lagrange,
                        static_cast<double>(a.iterations), a.residual});
      rows_b.push_back({static_cast<double>(p.d), lam, b.value, b.lagrange,
                        static_cast<double>(b.iterations), b.residual});
    }
    const std::vector<std::string> header{"d", "Lambda", "L_value", "lambda_mult", "iterations", "residual"};
    dir.csv("eigen.csv", header, rows_a);
    dir.csv("eigen_newton.csv", header, rows_b);

    rep.add(converged_check(all_converged, worst_residual, p.tol, "both optimizers on every Lambda"));
    rep.add({"bound", worst_bound <= p.bound_slack, worst_bound, p.bound_slack, "max of L - d^2"});
    rep.add({"agreement", worst_gap <= p.agreement, worst_gap, p.agreement,
             "max gap between the two optimizers"});
    rep.add({"conservation", worst_conservation <= p.conservation_tol, worst_conservation,
             p.conservation_tol, "Lambda <= " + fmt(p.conservation_max_Lambda)});
    const GapFit fit = fit_gap(p.d, p.lambdas, values);
    if (fit.used >= 2) {
      rep.add({"slope", fit.valid && fit.slope >= p.slope_low && fit.slope <= p.slope_high, fit.slope,
               p.slope_high, "expected in [" + fmt(p.slope_low) + ", " + fmt(p.slope_high) + "]"});
    }
    rep.metrics["fit_C"] = fit.C;
    rep.metrics["fit_slope"] = fit.slope;
    rep.metrics["fit_points"] = fit.used;
    return rep;
  };
}

// -------------------------------------------------------------- stability

struct StabilityParams {
  std::string background = "profile";
  std::vector<double> radii{5, 10, 20};
  double grid_radius = 20.0;
  int nr = 128;
  int ntheta = 256;
  double a = 1.0;
  double L = 40.0;
  int n = 4096;
  double profile_tol = 1e-10;
  double tol = 1e-9;
  int max_iterations = 2000;
  std::uint64_t seed = 1;
  double lambda_floor = -1e-6;
  double monotone_slack = 1e-8;
  double bessel_tol = 1e-3;
  double gradient_tol = 1e-6;
  bool dump = true;
};

void setup_stability(Command& c, StabilityParams& p) {
  Keys& k = *c.keys;
  k.add("background", p.background, "profile or zero")->check(CLI::IsMember({"profile", "zero"}));
  k.add("radii", p.radii, "comma-separated ball radii (ring radii of the grid)");
  k.add("grid_radius", p.grid_radius, "radius of the background grid");
  k.add("nr", p.nr, "radial cells");
  k.add("ntheta", p.ntheta, "angular nodes");
  k.add("a", p.a, "slope of the profile background");
  k.add("L", p.L, "half-length of the profile interval");
  k.add("n", p.n, "profile intervals");
  k.add("profile_tol", p.profile_tol, "profile Newton tolerance");
  k.add("tol", p.tol, "eigen-pair residual tolerance");
  k.add("max_iterations", p.max_iterations, "iteration cap of the minimizer");
  k.add("seed", p.seed, "seed of the initial pair and the gradient check");
  k.add("lambda_floor", p.lambda_floor, "lower bound of lambda on the profile background");
  k.add("monotone_slack", p.monotone_slack, "slack of lambda nonincreasing");
  k.add("bessel_tol", p.bessel_tol, "relative tolerance against (j01/R)^2");
  k.add("gradient_tol", p.gradient_tol, "relative tolerance of the gradient check");
  k.add("dump", p.dump, "write (phi, psi) field dumps");
  c.validate = [&p] {
    const DiskGrid g(p.grid_radius, p.nr, p.ntheta);
    require(!p.radii.empty(), "radii must not be empty");
    for (double R : p.radii) ring_for_radius(g, R);
    if (p.background == "profile") {
      require(p.a > 0.0 && p.L >= 10.0 / p.a && p.n >= 512 && p.n % 2 == 0, "invalid profile parameters");
      require(p.grid_radius < p.L * std::sqrt(p.a), "grid must fit inside the profile interval");
    }
  };
  c.execute = [&p](const RunDir& dir) {
    Report rep;
    rep.title = "stability";
    const DiskGrid g(p.grid_radius, p.nr, p.ntheta);
    const bool profile = p.background == "profile";
    const FieldSet bg = profile ? profile_background(normalize(solve_profile(p.a, p.L, p.n, p.profile_tol, p.seed)), g)
                                : zero_background(g);
    std::vector<double> radii = p.radii;
    std::sort(radii.begin(), radii.end());
    StabilityOptions opt;
    opt.tol = p.tol;
    opt.max_iterations = p.max_iterations;
    opt.seed = p.seed;

    constexpr double j01 = 2.404825557695773;
    std::vector<std::vector<double>> rows;
    double min_lambda = INFINITY;
    double worst_increase = -INFINITY;
    double worst_bessel = 0.0;
    double previous = INFINITY;
    double min_margin = INFINITY;
    for (double R : radii) {
      const LinearizedPair pair = first_eigenvalue(bg, R, opt);
      rows.push_back({R, pair.lambda, static_cast<double>(pair.iterations), pair.residual});
      min_lambda = std::min(min_lambda, pair.lambda);
      if (previous < INFINITY) worst_increase = std::max(worst_increase, pair.lambda - previous);
      previous = pair.lambda;
      const double exact = j01 * j01 / (R * R);
      worst_bessel = std::max(worst_bessel, std::abs(pair.lambda - exact) / exact);
      if (profile) {
        const Report s = sign_structure(pair);
        min_margin = std::min(min_margin, s.metrics.at("margin"));
      }
      rep.metrics["lambda(" + fmt(R) + ")"] = pair.lambda;
      if (p.dump) {
        write_psfld1(dir / ("pair_R" + fmt(R) + ".psfld"),
                     FieldSet(g, Degree::integer(1), {pair.phi, pair.psi}));
      }
    }
    dir.csv("stability.csv", {"R", "lambda", "iterations", "residual"}, rows);

    if (radii.size() > 1) {
      rep.add({"nonincreasing", worst_increase <= p.monotone_slack, worst_increase, p.monotone_slack,
               "max increase of lambda along R"});
    } else {
      rep.add({"nonincreasing", true, 0.0, p.monotone_slack, "single radius"});
    }
    if (profile) {
      rep.add({"nonnegative", min_lambda >= p.lambda_floor, min_lambda, p.lambda_floor, "min lambda"});
      rep.add({"signs", min_margin > 0.0, min_margin, 0.0, "min over R of min(phi, -psi) inside B_R"});
    } else {
      rep.add({"bessel", worst_bessel <= p.bessel_tol, worst_bessel, p.bessel_tol,
               "relative error against (j01/R)^2"});
    }
    rep.merge(gradient_check(bg, radii.front(), p.seed, 10, p.gradient_tol), "");
    return rep;
  };
}

// --------------------------------------------------------------- blowdown

struct BlowdownParams {
  std::string input;
  DiskParams disk;
  std::vector<double> radii{4, 8, 12};
  double band = 0.15;
  double plateau_band = 0.25;
  int expected_degree = 0;
};

void setup_blowdown(Command& c, BlowdownParams& p) {
  Keys& k = *c.keys;
  k.add("input", p.input, "PSFLD1 dump of a steady pair (empty: relax one)");
  add_disk_keys(k, p.disk);
  k.add("radii", p.radii, "comma-separated blow-down radii");
  k.add("band", p.band, "allowed spread of L_R/R^d");
  k.add("plateau_band", p.plateau_band, "allowed flatness |N(r) - N(r/2)|");
  k.add("expected_degree", p.expected_degree, "expected plateau (0 takes d)");
  c.validate = [&p] {
    if (p.input.empty()) {
      require(p.disk.d >= 1, "d must be at least 1");
      make_disk_grid(p.disk.R, p.disk.nr, p.disk.ntheta, Degree::integer(p.disk.d));
    } else {
      require(fs::exists(p.input), "input " + p.input + " does not exist");
    }
    require(!p.radii.empty(), "radii must not be empty");
    for (double r : p.radii) require(r > 0.0, "radii must be positive");
  };
  c.execute = [&p](const RunDir& dir) {
    Report rep;
    rep.title = "blowdown";
    std::unique_ptr<FieldSet> f;
    if (p.input.empty()) {
      const FlowState s = relax_disk(p.disk, rep);
      write_flow_outputs(dir, s);
      f = std::make_unique<FieldSet>(s.fields);
    } else {
      f = std::make_unique<FieldSet>(read_psfld1(p.input));
    }
    for (double r : p.radii) require(r <= f->grid.radius(), "blow-down radius exceeds the grid");
    BlowdownOptions opt;
    opt.band = p.band;
    opt.plateau_band = p.plateau_band;
    if (p.expected_degree > 0) opt.expected_degree = p.expected_degree;
    std::vector<BlowdownRow> rows;
    rep.merge(blowdown_ladder(*f, p.radii, opt, &rows), "");
    std::vector<std::vector<double>> out;
    for (const auto& r : rows) out.push_back({r.R, r.L, r.c, r.residual, static_cast<double>(r.N_plateau)});
    dir.csv("blowdown.csv", {"R", "L_R", "c", "residual", "N_plateau"}, out);
    return rep;
  };
}

// ---------------------------------------------------------------- driver

std::string version_string() { return std::string("phasesep ") + PHASESEP_VERSION; }

// The subcommand name and --config path, looked up before CLI11 parses.
void prescan(int argc, const char* const* argv, std::string& sub, std::string& config) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (sub.empty() && !a.empty() && a[0] != '-') sub = a;
    if (a == "--config" && i + 1 < argc) config = argv[i + 1];
    if (a.rfind("--config=", 0) == 0) config = a.substr(9);
  }
}

json document(const std::string& name, const Report& rep) {
  json j = report_json(rep);
  j["command"] = name;
  j["version"] = PHASESEP_VERSION;
  return j;
}

}  // namespace

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(number) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw InvalidArgument("config line " + std::to_string(number) + ": empty key");
    if (!out.emplace(key, value).second) {
      throw InvalidArgument("config line " + std::to_string(number) + ": repeated key '" + key + "'");
    }
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-separation laboratory: solvers and checks for Delta u = u v^2, Delta v = v u^2"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  ProfileParams profile;
  DiskParams disk;
  MultikParams multik;
  AlmgrenParams almgren;
  EigenParams eigen;
  StabilityParams stability;
  BlowdownParams blowdown;

  std::map<std::string, Command> commands;
  auto make = [&](const std::string& name, const std::string& help) -> Command& {
    Command& c = commands[name];
    c.app = app.add_subcommand(name, help);
    c.keys = std::make_unique<Keys>(c.app);
    c.keys->add("out", c.out, "output directory (default runs/" + name + ")");
    c.app->add_option("--config", c.config, "key=value config file; flags override it");
    return c;
  };
  setup_profile(make("profile", "1D profile solve, normalization, shooting and sliding checks"), profile);
  setup_disk(make("disk", "steady pair on a disk with harmonic boundary data"), disk);
  setup_multik(make("multik", "k-component steady state with rotational symmetry"), multik);
  setup_almgren(make("almgren", "frequency checks on a PSFLD1 dump"), almgren);
  setup_eigen(make("eigen", "circle eigenvalue ladder and gap fit"), eigen);
  setup_stability(make("stability", "first linearized eigenvalue on growing balls"), stability);
  setup_blowdown(make("blowdown", "blow-down ladder, harmonic fits and frequency plateau"), blowdown);

  std::string sub, config_path;
  prescan(argc, argv, sub, config_path);
  try {
    if (!config_path.empty()) {
      const auto it = commands.find(sub);
      if (it == commands.end()) throw InvalidArgument("--config needs a subcommand");
      std::ifstream in(config_path);
      if (!in) throw InvalidArgument("cannot read config " + config_path);
      std::stringstream text;
      text << in.rdbuf();
      it->second.keys->apply(parse_config(text.str()));
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidConfig;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPassed : kInvalidConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  Command& cmd = commands.at(name);
  try {
    cmd.validate();
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidConfig;
  }

  const RunDir dir(cmd.out.empty() ? fs::path("runs") / name : fs::path(cmd.out));
  Report rep;
  try {
    fs::create_directories(dir.root());
    dir.text("config.txt", cmd.keys->resolved());
    dir.text("VERSION", version_string() + "\n");
    rep = cmd.execute(dir);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const std::exception& e) {
    rep.title = name;
    json j = document(name, rep);
    j["passed"] = false;
    j["error"] = e.what();
    if (const auto* ce = dynamic_cast<const ConvergenceError*>(&e)) j["final_residual"] = ce->final_residual();
    write_json(dir / "report.json", j);
    err << "aborted: " << e.what() << "\n";
    return kRunAborted;
  }
  write_json(dir / "report.json", document(name, rep));

  for (const auto& c : rep.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << fmt(c.value) << "  limit=" << fmt(c.limit);
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << "\n";
  }
  out << (rep.passed() ? "all checks passed" : "some checks failed") << "; artifacts in " << dir.root().string()
      << "\n";
  return rep.passed() ? kPassed : kChecksFailed;
}

}  // namespace phasesep::cli
