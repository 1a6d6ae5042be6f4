#include "phasesep/eigencircle.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "phasesep/error.hpp"
#include "phasesep/sparse_solver.hpp"

namespace phasesep {

namespace {

struct Circle {
  int d;
  int n;
  double h;
  int shift;  // nodes per pi/d
  int cell;   // n/4: the cell is nodes 0..cell

  Circle(int d_, int n_) : d(d_), n(n_), h(2.0 * std::numbers::pi / n_), shift(n_ / (2 * d_)), cell(n_ / 4) {}

  int wrap(long j) const {
    const long m = j % n;
    return static_cast<int>(m < 0 ? m + n : m);
  }
  // Cell node representing node j under evenness and pi-periodicity.
  int rep(int j) const {
    const int half = n / 2;
    const int m = j % half;
    return std::min(m, half - m);
  }

  std::vector<double> others(const std::vector<double>& u) const {
    std::vector<double> w(n, 0.0);
    for (int l = 1; l < d; ++l) {
      for (int j = 0; j < n; ++j) {
        const double v = u[wrap(static_cast<long>(j) - static_cast<long>(l) * shift)];
        w[j] += v * v;
      }
    }
    return w;
  }

  // Exact orbit mean over x -> -x, x -> x + pi.
  void symmetrize(std::vector<double>& u) const {
    std::vector<double> sum(cell + 1, 0.0);
    std::vector<int> count(cell + 1, 0);
    for (int j = 0; j < n; ++j) {
      sum[rep(j)] += u[j];
      ++count[rep(j)];
    }
    for (int j = 0; j < n; ++j) u[j] = sum[rep(j)] / count[rep(j)];
  }

  double mass(const std::vector<double>& u) const {
    double s = 0.0;
    for (double v : u) s += v * v;
    return d * h * s;
  }

  void normalize(std::vector<double>& u) const {
    const double m = mass(u);
    for (double& v : u) v /= std::sqrt(m);
  }

  double dirichlet(const std::vector<double>& u) const {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double g = u[wrap(j + 1)] - u[j];
      s += g * g;
    }
    return s / h;
  }

  double coupling(const std::vector<double>& u, const std::vector<double>& w) const {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += u[j] * u[j] * w[j];
    return h * s;
  }

  // L for a normalized u: d (int u'^2 + Lambda/2 int u^2 W).
  double value(const std::vector<double>& u, double lambda_big) const {
    return d * (dirichlet(u) + 0.5 * lambda_big * coupling(u, others(u)));
  }

  // -D^2 u + Lambda W u
  std::vector<double> apply(const std::vector<double>& u, const std::vector<double>& w,
                            double lambda_big) const {
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
      out[j] = (2.0 * u[j] - u[wrap(j - 1)] - u[wrap(j + 1)]) / (h * h) + lambda_big * w[j] * u[j];
    }
    return out;
  }

  SparseMatrix shifted_operator(const std::vector<double>& w, double lambda_big, double sigma) const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(3 * n);
    for (int j = 0; j < n; ++j) {
      t.emplace_back(j, j, 2.0 / (h * h) + lambda_big * w[j] + sigma);
      t.emplace_back(j, wrap(j - 1), -1.0 / (h * h));
      t.emplace_back(j, wrap(j + 1), -1.0 / (h * h));
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    return a;
  }

  std::vector<double> initial(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    std::vector<double> u(n);
    for (int j = 0; j < n; ++j) {
      // Distance to the nearest multiple of pi: the bump sits on the lobes
      // of u_1 at 0 and pi.
      const double y = std::abs(std::remainder(h * j, std::numbers::pi));
      const double bump = y < std::numbers::pi / (2.0 * d) ? std::cos(d * y) : 0.0;
      u[j] = 0.2 + bump + jitter(rng);
    }
    symmetrize(u);
    normalize(u);
    return u;
  }

  double residual(const std::vector<double>& u, double lambda_big, double mu) const {
    const auto w = others(u);
    const auto au = apply(u, w, lambda_big);
    double r = 0.0;
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      r = std::max(r, std::abs(au[j] - mu * u[j]));
      s = std::max(s, std::abs(u[j]));
    }
    return r / s;
  }

  double rayleigh(const std::vector<double>& u, double lambda_big) const {
    const auto w = others(u);
    double num = dirichlet(u) + lambda_big * coupling(u, w);
    double den = 0.0;
    for (double v : u) den += v * v;
    return num / (h * den);
  }

  EigenResult finish(const std::vector<double>& u, double lambda_big, int iterations,
                     double res, double tol) const {
    EigenResult r;
    r.value = value(u, lambda_big);
    r.lagrange = rayleigh(u, lambda_big);
    r.iterations = iterations;
    r.residual = res;
    r.converged = res <= tol;
    for (int i = 0; i < d; ++i) {
      std::vector<double> c(n);
      for (int j = 0; j < n; ++j) c[j] = u[wrap(static_cast<long>(j) - static_cast<long>(i) * shift)];
      r.minimizer.push_back(std::move(c));
    }
    return r;
  }
};

void validate(const CircleConfig& c) {
  require(c.d >= 1, "d must be a positive integer");
  require(c.Lambda >= 0.0, "Lambda must be nonnegative");
  require(c.n >= 16 && c.n % 4 == 0 && c.n % (2 * c.d) == 0,
          "n must be divisible by 4 and by 2d");
  require(c.tol > 0.0, "tolerance must be positive");
}

}  // namespace

EigenResult minimize_L(const CircleConfig& c, std::uint64_t seed) {
  validate(c);
  const Circle circ(c.d, c.n);
  std::vector<double> u = circ.initial(seed);
  double f = circ.value(u, c.Lambda);
  double alpha = 1.0;
  double res = 0.0;
  int it = 0;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  for (; it < c.max_iterations; ++it) {
    const auto w = circ.others(u);
    const auto au = circ.apply(u, w, c.Lambda);
    double uu = 0.0, uau = 0.0;
    for (int j = 0; j < c.n; ++j) {
      uu += u[j] * u[j];
      uau += u[j] * au[j];
    }
    const double mu = uau / uu;
    std::vector<double> g(c.n);
    double gmax = 0.0, umax = 0.0;
    for (int j = 0; j < c.n; ++j) {
      g[j] = au[j] - mu * u[j];
      gmax = std::max(gmax, std::abs(g[j]));
      umax = std::max(umax, std::abs(u[j]));
    }
    res = gmax / umax;
    if (res <= c.tol) break;

    // Shift close to -mu once the iterate is near an eigenvector; fall back
    // to a positive shift while the shifted operator is indefinite.
    SparseMatrix a = circ.shifted_operator(w, c.Lambda, 0.05 * std::max(mu, 1.0) - mu);
    if (it == 0) ldlt.analyzePattern(a);
    ldlt.factorize(a);
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0) {
      a = circ.shifted_operator(w, c.Lambda, std::max(mu, 1.0));
      ldlt.factorize(a);
    }
    const Eigen::VectorXd pg = ldlt.solve(Eigen::Map<const Eigen::VectorXd>(g.data(), c.n));
    std::vector<double> p(pg.data(), pg.data() + c.n);
    double pu = 0.0, gp = 0.0;
    for (int j = 0; j < c.n; ++j) pu += p[j] * u[j];
    for (int j = 0; j < c.n; ++j) {
      p[j] -= pu / uu * u[j];
      gp += g[j] * p[j];
    }
    circ.symmetrize(p);

    // The gradient of L on the sphere is 2 d h g.
    const double slope = 2.0 * c.d * circ.h * gp;
    alpha = std::min(2.0 * alpha, 4.0);
    bool accepted = false;
    while (alpha > 1e-14) {
      std::vector<double> trial(c.n);
      for (int j = 0; j < c.n; ++j) trial[j] = u[j] - alpha * p[j];
      circ.normalize(trial);
      const double ft = circ.value(trial, c.Lambda);
      // Below rounding level of L the decrease test is blind; use the
      // residual instead.
      const bool blind = alpha * slope <= 1e-13 * std::max(1.0, std::abs(f));
      const bool ok = blind ? circ.residual(trial, c.Lambda, circ.rayleigh(trial, c.Lambda)) < res
                            : ft <= f - 1e-4 * alpha * slope;
      if (ok) {
        u = std::move(trial);
        f = ft;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  const double mu = circ.rayleigh(u, c.Lambda);
  return circ.finish(u, c.Lambda, it, circ.residual(u, c.Lambda, mu), c.tol);
}

EigenResult minimize_L_newton(const CircleConfig& c, std::uint64_t seed) {
  validate(c);
  const Circle circ(c.d, c.n);
  std::vector<double> u = circ.initial(seed);

  // Self-consistent inverse iteration: ground state of -D^2 + Lambda W(u).
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  int it = 0;
  double mu = circ.rayleigh(u, c.Lambda);
  for (int sweep = 0; sweep < 40; ++sweep, ++it) {
    const auto w = circ.others(u);
    const SparseMatrix a = circ.shifted_operator(w, c.Lambda, 1.0);
    if (sweep == 0) ldlt.analyzePattern(a);
    ldlt.factorize(a);
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(u.data(), c.n);
    for (int k = 0; k < 5; ++k) x = ldlt.solve(x).normalized();
    std::vector<double> next(x.data(), x.data() + c.n);
    if (next[0] < 0.0) {
      for (double& v : next) v = -v;
    }
    circ.normalize(next);
    for (int j = 0; j < c.n; ++j) next[j] = 0.5 * (next[j] + u[j]);
    circ.symmetrize(next);
    circ.normalize(next);
    u = std::move(next);
    mu = circ.rayleigh(u, c.Lambda);
    if (circ.residual(u, c.Lambda, mu) < 1e-3) break;
  }

  // Newton on (cell values, lambda).
  const int m = circ.cell + 1;
  std::vector<int> multiplicity(m, 0);
  for (int j = 0; j < c.n; ++j) ++multiplicity[circ.rep(j)];
  double res = circ.residual(u, c.Lambda, mu);
  for (int newton = 0; newton < 60 && res > c.tol; ++newton, ++it) {
    const auto w = circ.others(u);
    const auto au = circ.apply(u, w, c.Lambda);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs(m + 1);
    const double ih2 = 1.0 / (circ.h * circ.h);
    for (int row = 0; row < m; ++row) {
      rhs[row] = -(au[row] - mu * u[row]);
      jac(row, circ.rep(row)) += 2.0 * ih2 + c.Lambda * w[row] - mu;
      jac(row, circ.rep(circ.wrap(row - 1))) -= ih2;
      jac(row, circ.rep(circ.wrap(row + 1))) -= ih2;
      for (int l = 1; l < c.d; ++l) {
        const int j = circ.wrap(static_cast<long>(row) - static_cast<long>(l) * circ.shift);
        jac(row, circ.rep(j)) += 2.0 * c.Lambda * u[row] * u[j];
      }
      jac(row, m) = -u[row];
    }
    double mass = 0.0;
    for (int q = 0; q < m; ++q) {
      jac(m, q) = 2.0 * c.d * circ.h * multiplicity[q] * u[q];
      mass += multiplicity[q] * u[q] * u[q];
    }
    rhs[m] = -(c.d * circ.h * mass - 1.0);
    const Eigen::VectorXd delta = jac.partialPivLu().solve(rhs);
    for (int j = 0; j < c.n; ++j) u[j] += delta[circ.rep(j)];
    mu += delta[m];
    res = circ.residual(u, c.Lambda, mu);
  }
  circ.normalize(u);
  mu = circ.rayleigh(u, c.Lambda);
  return circ.finish(u, c.Lambda, it, circ.residual(u, c.Lambda, mu), c.tol);
}

double lagrange_multiplier(const EigenResult& r, double Lambda) {
  const int d = static_cast<int>(r.minimizer.size());
  const int n = static_cast<int>(r.minimizer[0].size());
  const double h = 2.0 * std::numbers::pi / n;
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int l = i + 1; l < d; ++l) {
      for (int j = 0; j < n; ++j) {
        const double a = r.minimizer[i][j];
        const double b = r.minimizer[l][j];
        s += a * a * b * b;
      }
    }
  }
  return r.value + Lambda * h * s;
}

double euler_lagrange_residual(const EigenResult& r, double Lambda) {
  const int d = static_cast<int>(r.minimizer.size());
  const int n = static_cast<int>(r.minimizer[0].size());
  const double h = 2.0 * std::numbers::pi / n;
  const double lambda = lagrange_multiplier(r, Lambda);
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < d; ++i) {
    const auto& u = r.minimizer[i];
    for (int j = 0; j < n; ++j) {
      double w = 0.0;
      for (int l = 0; l < d; ++l) {
        if (l != i) w += r.minimizer[l][j] * r.minimizer[l][j];
      }
      const double upp = (u[(j + n - 1) % n] - 2.0 * u[j] + u[(j + 1) % n]) / (h * h);
      worst = std::max(worst, std::abs(upp - Lambda * u[j] * w + lambda * u[j]));
      scale = std::max(scale, std::abs(u[j]));
    }
  }
  return worst / scale;
}

double conservation_spread(const EigenResult& r, double Lambda) {
  const int d = static_cast<int>(r.minimizer.size());
  const int n = static_cast<int>(r.minimizer[0].size());
  const double h = 2.0 * std::numbers::pi / n;
  const double lambda = lagrange_multiplier(r, Lambda);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int j = 0; j < n; ++j) {
    const int k = (j + 1) % n;
    double grad = 0.0, mass = 0.0, coup = 0.0;
    std::vector<double> prod(d);
    for (int i = 0; i < d; ++i) {
      const double g = (r.minimizer[i][k] - r.minimizer[i][j]) / h;
      grad += g * g;
      prod[i] = r.minimizer[i][k] * r.minimizer[i][j];
      mass += prod[i];
    }
    for (int i = 0; i < d; ++i) {
      for (int l = i + 1; l < d; ++l) coup += prod[i] * prod[l];
    }
    const double value = grad + lambda * mass - Lambda * coup;
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  return hi - lo;
}

GapFit fit_gap(int d, const std::vector<double>& lambdas, const std::vector<double>& values) {
  require(lambdas.size() == values.size(), "Lambda and value lists differ in length");
  GapFit fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double target = static_cast<double>(d) * d;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double gap = target - values[i];
    if (gap <= 0.0) fit.valid = false;
    if (lambdas[i] <= 10.0 || gap <= 0.0) continue;
    const double x = std::log(lambdas[i]);
    const double y = std::log(gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.used;
  }
  if (fit.used < 2) {
    fit.valid = false;
    return fit;
  }
  const double k = fit.used;
  fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  fit.C = std::exp((sy - fit.slope * sx) / k);
  return fit;
}

}  // namespace phasesep
