#include "phasesep/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "phasesep/error.hpp"
#include "phasesep/polar_ops.hpp"
#include "phasesep/sparse_solver.hpp"

namespace phasesep {

namespace {

using Eigen::VectorXd;

// Unknowns: phi on nodes 0..n-1 followed by psi on the same nodes.
struct Problem {
  int ring = 0;
  int n = 0;
  SparseMatrix stiffness;  // full symmetric K restricted to the ball
  VectorXd w, uu, vv, uv;

  Problem(const FieldSet& bg, double R) {
    require(bg.k() == 2, "the background must have two components");
    const DiskGrid& g = bg.grid;
    ring = ring_for_radius(g, R);
    PolarOperator op(g);
    std::vector<Eigen::Triplet<double>> lower;
    std::vector<double> diag;
    op.stiffness_entries(ring, lower, diag);
    n = static_cast<int>(diag.size());
    std::vector<Eigen::Triplet<double>> full;
    full.reserve(2 * lower.size() + n);
    for (const auto& t : lower) {
      full.push_back(t);
      full.emplace_back(t.col(), t.row(), t.value());
    }
    for (int p = 0; p < n; ++p) full.emplace_back(p, p, diag[p]);
    stiffness.resize(n, n);
    stiffness.setFromTriplets(full.begin(), full.end());

    w.resize(n);
    uu.resize(n);
    vv.resize(n);
    uv.resize(n);
    for (int p = 0; p < n; ++p) {
      w[p] = g.node_weight(g.ring_of(p), ring);
      const double u = bg.components[0][p];
      const double v = bg.components[1][p];
      uu[p] = u * u;
      vv[p] = v * v;
      uv[p] = u * v;
    }
  }

  VectorXd apply(const VectorXd& x) const {
    VectorXd y(2 * n);
    const auto phi = x.head(n);
    const auto psi = x.tail(n);
    y.head(n) = stiffness * phi;
    y.tail(n) = stiffness * psi;
    y.head(n).array() += w.array() * (vv.array() * phi.array() + 2.0 * uv.array() * psi.array());
    y.tail(n).array() += w.array() * (uu.array() * psi.array() + 2.0 * uv.array() * phi.array());
    return y;
  }

  VectorXd mass(const VectorXd& x) const {
    VectorXd y(2 * n);
    y.head(n) = w.cwiseProduct(x.head(n));
    y.tail(n) = w.cwiseProduct(x.tail(n));
    return y;
  }

  double dot(const VectorXd& a, const VectorXd& b) const { return a.dot(mass(b)); }

  double strong_residual(const VectorXd& x, double lambda) const {
    const VectorXd r = apply(x) - lambda * mass(x);
    double a = 0.0;
    double b = 0.0;
    for (int p = 0; p < n; ++p) {
      a = std::max(a, std::abs(r[p] / w[p]));
      b = std::max(b, std::abs(r[n + p] / w[p]));
    }
    return a + b;
  }

  VectorXd restrict(std::span<const double> phi, std::span<const double> psi) const {
    VectorXd x(2 * n);
    for (int p = 0; p < n; ++p) {
      x[p] = phi[p];
      x[n + p] = psi[p];
    }
    return x;
  }
};

// M-orthonormalizes the columns in place and drops dependent ones.
Eigen::MatrixXd orthonormal_basis(const Problem& pb, std::vector<VectorXd> cols) {
  std::vector<VectorXd> kept;
  for (auto& c : cols) {
    const double scale = std::sqrt(pb.dot(c, c));
    if (!(scale > 0.0)) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : kept) c -= pb.dot(q, c) * q;
    }
    const double len = std::sqrt(pb.dot(c, c));
    if (len <= 1e-10 * scale) continue;
    kept.push_back(c / len);
  }
  Eigen::MatrixXd s(2 * pb.n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) s.col(static_cast<Eigen::Index>(i)) = kept[i];
  return s;
}

// Block-diagonal part of the operator, K + w v^2 and K + w u^2, shifted by
// the mass matrix.
struct Preconditioner {
  CholeskySolver phi_solver;
  CholeskySolver psi_solver;
  int n;

  Preconditioner(const Problem& pb) : n(pb.n) {
    const SparseMatrix k = pb.stiffness.triangularView<Eigen::Lower>();
    SparseMatrix tp = k;
    SparseMatrix tq = k;
    for (int p = 0; p < pb.n; ++p) {
      tp.coeffRef(p, p) += pb.w[p] * (pb.vv[p] + 2.0 * std::abs(pb.uv[p]) + 1.0);
      tq.coeffRef(p, p) += pb.w[p] * (pb.uu[p] + 2.0 * std::abs(pb.uv[p]) + 1.0);
    }
    if (!phi_solver.factorize(tp) || !psi_solver.factorize(tq)) {
      throw ConvergenceError("preconditioner factorization failed", 0.0);
    }
  }

  VectorXd apply(const VectorXd& r) const {
    VectorXd z(2 * n);
    z.head(n) = phi_solver.solve(r.head(n));
    z.tail(n) = psi_solver.solve(r.tail(n));
    return z;
  }
};

struct Iteration {
  VectorXd x;
  double lambda = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

void minimize(const Problem& pb, const Preconditioner& pre, Iteration& it, double tol,
              int max_iterations) {
  it.x /= std::sqrt(pb.dot(it.x, it.x));
  VectorXd dir;
  for (; it.iterations < max_iterations; ++it.iterations) {
    const VectorXd ax = pb.apply(it.x);
    it.lambda = it.x.dot(ax);
    it.residual = pb.strong_residual(it.x, it.lambda);
    if (it.residual <= tol) {
      it.converged = true;
      return;
    }
    const VectorXd r = ax - it.lambda * pb.mass(it.x);
    std::vector<VectorXd> cols{it.x, pre.apply(r)};
    if (dir.size() > 0) cols.push_back(dir);
    const Eigen::MatrixXd s = orthonormal_basis(pb, cols);
    Eigen::MatrixXd as(s.rows(), s.cols());
    for (Eigen::Index j = 0; j < s.cols(); ++j) as.col(j) = pb.apply(s.col(j));
    Eigen::MatrixXd h = s.transpose() * as;
    h = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const VectorXd c = es.eigenvectors().col(0);
    VectorXd next = s * c;
    next /= std::sqrt(pb.dot(next, next));
    dir = next - pb.dot(it.x, next) * it.x;
    it.x = next;
  }
  const VectorXd ax = pb.apply(it.x);
  it.lambda = it.x.dot(ax);
  it.residual = pb.strong_residual(it.x, it.lambda);
  it.converged = it.residual <= tol;
}

}  // namespace

FieldSet profile_background(const Profile1D& p, const DiskGrid& grid) {
  FieldSet f(grid, Degree::integer(1), 2);
  for (std::size_t q = 0; q < grid.node_count(); ++q) {
    const double x = grid.node(q).x;
    f.components[0][q] = p.u_at(x);
    f.components[1][q] = p.v_at(x);
  }
  return f;
}

FieldSet zero_background(const DiskGrid& grid) { return FieldSet(grid, Degree::integer(1), 2); }

int ring_for_radius(const DiskGrid& grid, double R) {
  require(R > 0.0 && R <= grid.radius() * (1.0 + 1e-12), "R must lie in (0, grid radius]");
  const int m = static_cast<int>(std::lround(R / grid.dr()));
  require(m >= 2 && std::abs(m * grid.dr() - R) <= 1e-9 * R,
          "R = " + std::to_string(R) + " is not a ring radius of the grid");
  return m;
}

LinearizedPair first_eigenvalue(const FieldSet& background, double R, StabilityOptions options) {
  require(options.tol > 0.0, "tolerance must be positive");
  const Problem pb(background, R);
  const Preconditioner pre(pb);
  const DiskGrid& g = background.grid;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  Iteration it;
  it.x.resize(2 * pb.n);
  for (int p = 0; p < pb.n; ++p) {
    const double r = g.ring_radius(g.ring_of(p)) / R;
    const double bump = 1.0 - r * r;
    it.x[p] = bump * (1.0 + jitter(rng));
    it.x[pb.n + p] = -bump * (1.0 + jitter(rng));
  }
  minimize(pb, pre, it, options.tol, options.max_iterations);
  if (!it.converged) {
    throw ConvergenceError("linearized eigenvalue did not converge at R = " + std::to_string(R),
                           it.residual);
  }
  if (it.x.head(pb.n).sum() < 0.0) it.x = -it.x;
  it.x.head(pb.n) = it.x.head(pb.n).cwiseAbs();
  it.x.tail(pb.n) = -it.x.tail(pb.n).cwiseAbs();
  it.converged = false;
  minimize(pb, pre, it, options.tol, it.iterations + options.max_iterations);
  if (!it.converged) {
    throw ConvergenceError("linearized eigenvalue did not converge at R = " + std::to_string(R),
                           it.residual);
  }

  LinearizedPair out(g);
  out.ring = pb.ring;
  out.R = R;
  out.phi.assign(g.node_count(), 0.0);
  out.psi.assign(g.node_count(), 0.0);
  for (int p = 0; p < pb.n; ++p) {
    out.phi[p] = it.x[p];
    out.psi[p] = it.x[pb.n + p];
  }
  out.lambda = it.lambda;
  out.iterations = it.iterations;
  out.residual = it.residual;
  out.converged = true;
  return out;
}

double rayleigh_quotient(const FieldSet& background, double R, std::span<const double> phi,
                         std::span<const double> psi) {
  const Problem pb(background, R);
  const VectorXd x = pb.restrict(phi, psi);
  const double norm2 = pb.dot(x, x);
  require(norm2 > 0.0, "the pair vanishes inside B_R");
  return x.dot(pb.apply(x)) / norm2;
}

void quotient_gradient(const FieldSet& background, double R, std::span<const double> phi,
                       std::span<const double> psi, std::vector<double>& g_phi,
                       std::vector<double>& g_psi) {
  const Problem pb(background, R);
  const VectorXd x = pb.restrict(phi, psi);
  const double norm2 = pb.dot(x, x);
  require(norm2 > 0.0, "the pair vanishes inside B_R");
  const VectorXd ax = pb.apply(x);
  const double q = x.dot(ax) / norm2;
  const VectorXd grad = 2.0 * (ax - q * pb.mass(x)) / norm2;
  g_phi.assign(background.grid.node_count(), 0.0);
  g_psi.assign(background.grid.node_count(), 0.0);
  for (int p = 0; p < pb.n; ++p) {
    g_phi[p] = grad[p];
    g_psi[p] = grad[pb.n + p];
  }
}

Report gradient_check(const FieldSet& background, double R, std::uint64_t seed, int directions,
                      double tol) {
  const Problem pb(background, R);
  const std::size_t nodes = background.grid.node_count();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto random_field = [&] {
    std::vector<double> f(nodes, 0.0);
    for (int p = 0; p < pb.n; ++p) f[p] = uni(rng);
    return f;
  };
  const std::vector<double> phi = random_field();
  const std::vector<double> psi = random_field();
  std::vector<double> g_phi, g_psi;
  quotient_gradient(background, R, phi, psi, g_phi, g_psi);

  double worst = 0.0;
  for (int k = 0; k < directions; ++k) {
    const std::vector<double> e_phi = random_field();
    const std::vector<double> e_psi = random_field();
    double exact = 0.0;
    for (int p = 0; p < pb.n; ++p) exact += g_phi[p] * e_phi[p] + g_psi[p] * e_psi[p];
    auto q_at = [&](double t) {
      std::vector<double> a_phi(phi), a_psi(psi);
      for (int p = 0; p < pb.n; ++p) {
        a_phi[p] += t * e_phi[p];
        a_psi[p] += t * e_psi[p];
      }
      return rayleigh_quotient(background, R, a_phi, a_psi);
    };
    const double eps = 1e-3;
    const double fd =
        (8.0 * (q_at(eps) - q_at(-eps)) - (q_at(2.0 * eps) - q_at(-2.0 * eps))) / (12.0 * eps);
    worst = std::max(worst, std::abs(fd - exact) / std::max(std::abs(exact), 1e-300));
  }
  Report rep;
  rep.title = "gradient_check";
  rep.add({"gradient", worst <= tol, worst, tol, "max relative mismatch of directional derivatives"});
  return rep;
}

double linearized_residual(const FieldSet& background, const LinearizedPair& p) {
  const Problem pb(background, p.R);
  return pb.strong_residual(pb.restrict(p.phi, p.psi), p.lambda);
}

double dense_first_eigenvalue(const FieldSet& background, double R) {
  const Problem pb(background, R);
  require(pb.n <= 4000, "dense oracle is limited to small grids");
  const int m = 2 * pb.n;
  Eigen::MatrixXd a(m, m);
  VectorXd e = VectorXd::Zero(m);
  for (int j = 0; j < m; ++j) {
    e[j] = 1.0;
    a.col(j) = pb.apply(e);
    e[j] = 0.0;
  }
  VectorXd s(m);
  s.head(pb.n) = pb.w.cwiseSqrt().cwiseInverse();
  s.tail(pb.n) = s.head(pb.n);
  Eigen::MatrixXd b = s.asDiagonal() * a * s.asDiagonal();
  b = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

Report lambda_monotone(const FieldSet& background, const std::vector<double>& R_list,
                       StabilityOptions options, double slack, std::vector<LambdaRow>* rows) {
  Report rep;
  rep.title = "lambda_monotone";
  std::vector<double> radii = R_list;
  std::sort(radii.begin(), radii.end());
  double worst = 0.0;
  double previous = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const LinearizedPair p = first_eigenvalue(background, radii[i], options);
    if (rows) rows->push_back({radii[i], p.lambda, p.iterations, p.residual});
    rep.metrics["lambda(" + std::to_string(radii[i]) + ")"] = p.lambda;
    if (i > 0) worst = std::max(worst, p.lambda - previous);
    previous = p.lambda;
  }
  rep.add({"nonincreasing", worst <= slack, worst, slack, "max increase of lambda along R"});
  return rep;
}

Report sign_structure(const LinearizedPair& p) {
  Report rep;
  rep.title = "sign_structure";
  double sum = 0.0;
  for (double x : p.phi) sum += x;
  const double sign = sum < 0.0 ? -1.0 : 1.0;
  double min_phi = INFINITY;
  double max_psi = -INFINITY;
  for (std::size_t q = 0; q < p.grid.node_count(); ++q) {
    if (p.grid.ring_of(q) >= p.ring) continue;
    min_phi = std::min(min_phi, sign * p.phi[q]);
    max_psi = std::max(max_psi, sign * p.psi[q]);
  }
  rep.add({"phi_positive", min_phi > 0.0, min_phi, 0.0, "min phi over interior nodes"});
  rep.add({"psi_negative", max_psi < 0.0, max_psi, 0.0, "max psi over interior nodes"});
  rep.metrics["margin"] = std::min(min_phi, -max_psi);
  return rep;
}

}  // namespace phasesep
