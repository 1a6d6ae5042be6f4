#include "phasesep/profile1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "phasesep/error.hpp"
#include "phasesep/sparse_solver.hpp"

namespace phasesep {

namespace {

double cubic(const std::vector<double>& f, double x0, double h, double x) {
  const std::size_t n = f.size();
  const double s = (x - x0) / h;
  const double nearest = std::round(s);
  if (std::abs(s - nearest) <= 1e-12 && nearest >= 0.0 && nearest <= n - 1.0) {
    return f[static_cast<std::size_t>(nearest)];
  }
  long i = static_cast<long>(std::floor(s)) - 1;
  i = std::clamp(i, 0L, static_cast<long>(n) - 4);
  const double t = s - static_cast<double>(i);
  const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
  const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
  const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
  return w0 * f[i] + w1 * f[i + 1] + w2 * f[i + 2] + w3 * f[i + 3];
}

// Fourth-order first derivative at node i.
double derivative(const std::vector<double>& f, double h, std::size_t i) {
  const std::size_t n = f.size();
  if (i >= 2 && i + 2 < n) {
    return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
  }
  if (i < 2) {
    return (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] - 3.0 * f[i + 4]) /
           (12.0 * h);
  }
  return (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] + 3.0 * f[i - 4]) /
         (12.0 * h);
}

// Numerov residual of u with v = mirror(u), rows 1..n-1, and the slope
// condition as row n.
Eigen::VectorXd residual_vector(const std::vector<double>& u, double h, double a) {
  const std::size_t n = u.size() - 1;
  std::vector<double> f(n + 1);
  for (std::size_t i = 0; i <= n; ++i) f[i] = u[i] * u[n - i] * u[n - i];
  Eigen::VectorXd r(static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) {
    r[i - 1] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (h * h) -
               (f[i - 1] + 10.0 * f[i] + f[i + 1]) / 12.0;
  }
  r[n - 1] = (u[n] - u[n - 1]) / h - a + h * (2.0 * f[n] + f[n - 1]) / 6.0;
  return r;
}

SparseMatrix jacobian(const std::vector<double>& u, double h) {
  const std::size_t n = u.size() - 1;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(12 * n);
  // Column of unknown u_m is m - 1; u_0 is fixed.
  const auto add = [&](std::size_t row, std::size_t m, double value) {
    if (m >= 1) trip.emplace_back(static_cast<int>(row), static_cast<int>(m - 1), value);
  };
  // d f_j / d u: f_j = u_j u_{n-j}^2.
  const auto add_f = [&](std::size_t row, std::size_t j, double scale) {
    const double uj = u[j];
    const double vj = u[n - j];
    add(row, j, scale * vj * vj);
    add(row, n - j, scale * 2.0 * uj * vj);
  };
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t row = i - 1;
    add(row, i - 1, 1.0 / (h * h));
    add(row, i, -2.0 / (h * h));
    add(row, i + 1, 1.0 / (h * h));
    add_f(row, i - 1, -1.0 / 12.0);
    add_f(row, i, -10.0 / 12.0);
    add_f(row, i + 1, -1.0 / 12.0);
  }
  const std::size_t row = n - 1;
  add(row, n, 1.0 / h);
  add(row, n - 1, -1.0 / h);
  add_f(row, n, h / 3.0);
  add_f(row, n - 1, h / 6.0);
  SparseMatrix j(static_cast<int>(n), static_cast<int>(n));
  j.setFromTriplets(trip.begin(), trip.end());
  return j;
}

}  // namespace

double Profile1D::u_at(double xq) const {
  if (xq > right()) return u.back() + a * (xq - right());
  if (xq < left()) return u.front();
  return cubic(u, x0, h, xq);
}

double Profile1D::v_at(double xq) const {
  if (xq < left()) return v.front() + a * (left() - xq);
  if (xq > right()) return v.back();
  return cubic(v, x0, h, xq);
}

Profile1D solve_profile(double a, double L, int n, double tol, std::uint64_t seed,
                        ProfileOptions options) {
  require(a > 0.0, "slope a must be positive");
  require(L >= 10.0 / a, "half-length L must be at least 10/a");
  require(n >= 512 && n % 2 == 0, "node count n must be even and at least 512");
  require(tol > 0.0, "tolerance must be positive");

  Profile1D p;
  p.a = a;
  p.x0 = -L;
  p.h = 2.0 * L / n;
  std::mt19937_64 rng(seed);
  const double width = std::uniform_real_distribution<double>(0.5, 2.0)(rng) / a;
  std::vector<double> u(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = p.x(i);
    u[i] = 0.5 * a * (x + std::sqrt(x * x + width * width));
  }
  u[0] = 0.0;

  Eigen::SparseLU<SparseMatrix> lu;
  Eigen::VectorXd r = residual_vector(u, p.h, a);
  double norm = r.lpNorm<Eigen::Infinity>();
  int it = 0;
  for (; it < options.max_iterations && norm > tol; ++it) {
    const SparseMatrix j = jacobian(u, p.h);
    if (it == 0) lu.analyzePattern(j);
    lu.factorize(j);
    if (lu.info() != Eigen::Success) throw ConvergenceError("singular Newton matrix", norm);
    const Eigen::VectorXd delta = lu.solve(-r);
    double step = 1.0;
    bool accepted = false;
    while (step > 1e-10) {
      std::vector<double> trial = u;
      for (int i = 1; i <= n; ++i) trial[i] = std::max(0.0, u[i] + step * delta[i - 1]);
      const Eigen::VectorXd rt = residual_vector(trial, p.h, a);
      const double nt = rt.lpNorm<Eigen::Infinity>();
      if (nt < (1.0 - 1e-4 * step) * norm || (step == 1.0 && nt <= tol)) {
        u = std::move(trial);
        r = rt;
        norm = nt;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  if (norm > tol) {
    throw ConvergenceError("profile Newton iteration stopped with residual " + std::to_string(norm),
                           norm);
  }
  p.u = u;
  p.v.assign(u.rbegin(), u.rend());
  p.iterations = it;
  p.residual = profile_residual(p);
  return p;
}

double profile_residual(const Profile1D& p) {
  const std::size_t n = p.size() - 1;
  double worst = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const auto fu = [&](std::size_t j) { return p.u[j] * p.v[j] * p.v[j]; };
    const auto fv = [&](std::size_t j) { return p.v[j] * p.u[j] * p.u[j]; };
    const double h2 = p.h * p.h;
    const double ru = (p.u[i - 1] - 2.0 * p.u[i] + p.u[i + 1]) / h2 -
                      (fu(i - 1) + 10.0 * fu(i) + fu(i + 1)) / 12.0;
    const double rv = (p.v[i - 1] - 2.0 * p.v[i] + p.v[i + 1]) / h2 -
                      (fv(i - 1) + 10.0 * fv(i) + fv(i + 1)) / 12.0;
    worst = std::max({worst, std::abs(ru), std::abs(rv)});
  }
  return worst;
}

double crossing_point(const Profile1D& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p.u[i] - p.v[i];
    if (d == 0.0) return p.x(i);
    if (d > 0.0) {
      if (i == 0) break;
      const double d0 = p.u[i - 1] - p.v[i - 1];
      return p.x(i - 1) + p.h * d0 / (d0 - d);
    }
  }
  throw InvalidArgument("profile has no crossing u = v");
}

Profile1D normalize(const Profile1D& p) {
  const double xc = crossing_point(p);
  if (xc == 0.0 && p.a == 1.0) return p;
  const double lambda = 1.0 / std::sqrt(p.a);
  const double half = std::min(xc - p.left(), p.right() - xc) / lambda;
  const std::size_t n = p.size() - 1;
  Profile1D q;
  q.a = 1.0;
  q.x0 = -half;
  q.h = 2.0 * half / static_cast<double>(n);
  q.u.resize(n + 1);
  q.v.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double y = i == n / 2 && n % 2 == 0 ? 0.0 : q.x(i);
    q.u[i] = lambda * p.u_at(xc + lambda * y);
    q.v[i] = lambda * p.v_at(xc + lambda * y);
  }
  q.iterations = p.iterations;
  q.residual = profile_residual(q);
  return q;
}

Profile1D shifted(const Profile1D& p, double s) {
  Profile1D q = p;
  q.x0 = p.x0 - s;
  return q;
}

double deviation_constant(const Profile1D& p, double half_width) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p.x(i);
    if (half_width > 0.0 && std::abs(x) > half_width) continue;
    const double dev = std::abs(p.u[i] - p.a * std::max(x, 0.0)) +
                       std::abs(p.v[i] - p.a * std::max(-x, 0.0));
    worst = std::max(worst, dev);
  }
  return worst;
}

namespace {

bool ordered(const Profile1D& p1, const Profile1D& p2, double t, double eps) {
  for (std::size_t i = 0; i < p2.size(); ++i) {
    const double x = p2.x(i);
    if (p1.u_at(x + t) < p2.u[i] - eps || p1.v_at(x + t) > p2.v[i] + eps) return false;
  }
  return true;
}

double gap_at(const Profile1D& p1, const Profile1D& p2, double t) {
  double gu = 0.0;
  double gv = 0.0;
  for (std::size_t i = 0; i < p2.size(); ++i) {
    const double x = p2.x(i);
    gu = std::max(gu, std::abs(p1.u_at(x + t) - p2.u[i]));
    gv = std::max(gv, std::abs(p1.v_at(x + t) - p2.v[i]));
  }
  return gu + gv;
}

}  // namespace

SlidingResult sliding_compare(const Profile1D& p1, const Profile1D& p2, double tolerance) {
  require(std::abs(p1.a - p2.a) <= 1e-12 * p1.a, "profiles must share the slope a");
  SlidingResult res;
  const double big_a = std::max(deviation_constant(p1), deviation_constant(p2));
  res.t_start = 16.0 * big_a / p1.a;
  res.ordered_at_start = ordered(p1, p2, res.t_start, tolerance);
  if (!res.ordered_at_start) {
    res.t0 = res.t_start;
    res.gap = gap_at(p1, p2, res.t_start);
    return res;
  }
  const double dx = p2.h;
  double ok = res.t_start;
  double bad = ok;
  const double floor = -res.t_start - (p2.right() - p2.left());
  while (true) {
    const double t = ok - dx;
    if (t < floor || !ordered(p1, p2, t, tolerance)) {
      bad = t;
      break;
    }
    ok = t;
  }
  for (int it = 0; it < 60 && ok - bad > 1e-15 * std::max(1.0, std::abs(ok)); ++it) {
    const double mid = 0.5 * (ok + bad);
    if (ordered(p1, p2, mid, tolerance)) {
      ok = mid;
    } else {
      bad = mid;
    }
  }
  res.t0 = ok;
  res.gap = gap_at(p1, p2, ok);
  return res;
}

namespace {

// (int_{-r}^{r} u'^2 + v'^2, int_{-r}^{r} u^2 v^2) by composite Simpson on
// cubic interpolants of the nodal integrands.
std::pair<double, double> bulk_integrals(const Profile1D& p, double r) {
  const std::size_t n = p.size();
  std::vector<double> grad(n), coup(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double du = derivative(p.u, p.h, i);
    const double dv = derivative(p.v, p.h, i);
    grad[i] = du * du + dv * dv;
    coup[i] = p.u[i] * p.u[i] * p.v[i] * p.v[i];
  }
  int m = 2 * static_cast<int>(std::ceil(r / p.h));
  if (m % 2) ++m;
  const double step = 2.0 * r / m;
  double sg = 0.0;
  double sc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double x = -r + step * i;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sg += w * cubic(grad, p.x0, p.h, x);
    sc += w * cubic(coup, p.x0, p.h, x);
  }
  return {sg * step / 3.0, sc * step / 3.0};
}

double boundary_sum(const Profile1D& p, double r) {
  const double a = p.u_at(r), b = p.v_at(r), c = p.u_at(-r), d = p.v_at(-r);
  return a * a + b * b + c * c + d * d;
}

}  // namespace

double almgren_1d(const Profile1D& p, double r) {
  require(r > 0.0 && r < std::min(-p.left(), p.right()), "radius outside (0, L)");
  const auto [grad, coup] = bulk_integrals(p, r);
  return r * (grad + coup) / boundary_sum(p, r);
}

AlmgrenTrace trace_1d(const Profile1D& p, const std::vector<double>& radii) {
  AlmgrenTrace t;
  t.n = 1;
  t.d = 1.0;
  double prev = 0.0;
  for (double r : radii) {
    require(r > prev, "trace radii must be strictly increasing");
    require(r < std::min(-p.left(), p.right()), "radius outside (0, L)");
    prev = r;
    const auto [grad, coup] = bulk_integrals(p, r);
    AlmgrenRow row;
    row.r = r;
    row.H = boundary_sum(p, r);
    row.E = r * (grad + coup);
    row.Ehat = r * (grad + 2.0 * coup);
    row.N = row.E / row.H;
    row.coupling = 2.0 * coup / row.H;
    t.rows.push_back(row);
  }
  return t;
}

double decay_rate(const Profile1D& p, double x_from) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p.x(i);
    if (x < x_from || !(p.v[i] > 1e-280)) continue;
    const double y = std::log(p.v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return 0.0;
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return -slope;
}

namespace {

enum class Fate { Crosses, TurnsUp, Settles };

struct Shot {
  Fate fate;
  double slope;
};

Shot shoot(double s, double step, double x_max) {
  // y = (u, u', v, v')
  std::array<double, 4> y{1.0, s, 1.0, -s};
  const auto rhs = [](const std::array<double, 4>& q) {
    return std::array<double, 4>{q[1], q[0] * q[2] * q[2], q[3], q[2] * q[0] * q[0]};
  };
  const int steps = static_cast<int>(std::ceil(x_max / step));
  for (int i = 0; i < steps; ++i) {
    const auto k1 = rhs(y);
    std::array<double, 4> t;
    for (int c = 0; c < 4; ++c) t[c] = y[c] + 0.5 * step * k1[c];
    const auto k2 = rhs(t);
    for (int c = 0; c < 4; ++c) t[c] = y[c] + 0.5 * step * k2[c];
    const auto k3 = rhs(t);
    for (int c = 0; c < 4; ++c) t[c] = y[c] + step * k3[c];
    const auto k4 = rhs(t);
    for (int c = 0; c < 4; ++c) y[c] += step / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    if (y[2] < 0.0) return {Fate::Crosses, y[1]};
    if (y[3] > 0.0) return {Fate::TurnsUp, y[1]};
  }
  return {Fate::Settles, y[1]};
}

}  // namespace

ShootingResult shoot_profile(double step, double x_max) {
  require(step > 0.0 && x_max > 0.0, "shooting step and range must be positive");
  double lo = 0.0;  // turns up
  double hi = 1.0;  // crosses
  while (shoot(hi, step, x_max).fate != Fate::Crosses) hi *= 2.0;
  double slope = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Shot s = shoot(mid, step, x_max);
    if (s.fate == Fate::Crosses) {
      hi = mid;
    } else {
      lo = mid;
    }
    slope = s.slope;
  }
  slope = shoot(lo, step, x_max).slope;
  return {1.0 / std::sqrt(slope), slope};
}

}  // namespace phasesep
