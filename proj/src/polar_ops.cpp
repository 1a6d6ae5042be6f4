#include "phasesep/polar_ops.hpp"

#include <algorithm>
#include <cmath>

#include "phasesep/error.hpp"
#include "phasesep/simd.hpp"

namespace phasesep {

PolarOperator::PolarOperator(DiskGrid grid) : grid_(std::move(grid)) {
  weights_.resize(grid_.node_count());
  for (std::size_t p = 0; p < weights_.size(); ++p) {
    weights_[p] = grid_.node_weight(grid_.ring_of(p), grid_.rings());
  }
  ones_.assign(grid_.angles(), 1.0);
}

double PolarOperator::radial_coefficient(int i) const {
  return (i + 0.5) * grid_.dtheta();
}

double PolarOperator::angular_coefficient(int i, int outer_ring) const {
  if (i < 1 || i > outer_ring) return 0.0;
  const double extent = i < outer_ring ? grid_.dr() : 0.5 * grid_.dr();
  return extent / (grid_.ring_radius(i) * grid_.dtheta());
}

void PolarOperator::stiffness(std::span<const double> u, std::span<double> out) const {
  const auto& kern = simd::kernels();
  const int n = grid_.angles();
  const int nr = grid_.rings();
  const std::vector<double> center(n, u[0]);
  {
    double s = 0.0;
    const double* r1 = u.data() + grid_.index(1, 0);
    for (int j = 0; j < n; ++j) s += u[0] - r1[j];
    out[0] = radial_coefficient(0) * s;
  }
  for (int i = 1; i < nr; ++i) {
    const double* inner = i == 1 ? center.data() : u.data() + grid_.index(i - 1, 0);
    kern.ring_stiffness(inner, u.data() + grid_.index(i, 0), u.data() + grid_.index(i + 1, 0),
                        out.data() + grid_.index(i, 0), n, radial_coefficient(i - 1),
                        radial_coefficient(i), angular_coefficient(i, nr));
  }
  std::fill(out.begin() + grid_.index(nr, 0), out.end(), 0.0);
}

void PolarOperator::stiffness_entries(int outer_ring, std::vector<Eigen::Triplet<double>>& lower,
                                      std::vector<double>& diagonal) const {
  require(outer_ring >= 1 && outer_ring <= grid_.rings(), "ring index out of range");
  const int n = grid_.angles();
  lower.clear();
  diagonal.assign(grid_.index(outer_ring, 0), 0.0);
  diagonal[0] = radial_coefficient(0) * n;
  for (int i = 1; i < outer_ring; ++i) {
    const double cin = radial_coefficient(i - 1);
    const double cout = radial_coefficient(i);
    const double cang = angular_coefficient(i, outer_ring);
    for (int j = 0; j < n; ++j) {
      const int p = static_cast<int>(grid_.index(i, j));
      diagonal[p] = cin + cout + 2.0 * cang;
      const int inner = i == 1 ? 0 : static_cast<int>(grid_.index(i - 1, j));
      lower.emplace_back(p, inner, -cin);
      if (j > 0) lower.emplace_back(p, p - 1, -cang);
      if (j == n - 1) lower.emplace_back(p, static_cast<int>(grid_.index(i, 0)), -cang);
    }
  }
}

void PolarOperator::laplacian(std::span<const double> u, std::span<double> out) const {
  stiffness(u, out);
  const std::size_t interior = grid_.interior_count();
  for (std::size_t p = 0; p < interior; ++p) out[p] = -out[p] / weights_[p];
}

double PolarOperator::dirichlet_energy(std::span<const double> u, int outer_ring) const {
  require(outer_ring >= 0 && outer_ring <= grid_.rings(), "ring index out of range");
  const auto& kern = simd::kernels();
  const std::size_t n = grid_.angles();
  double e = 0.0;
  if (outer_ring == 0) return 0.0;
  const std::vector<double> center(n, u[0]);
  for (int i = 0; i < outer_ring; ++i) {
    const double* inner = i == 0 ? center.data() : u.data() + grid_.index(i, 0);
    e += radial_coefficient(i) * kern.squared_difference(u.data() + grid_.index(i + 1, 0), inner, n);
  }
  for (int i = 1; i <= outer_ring; ++i) {
    e += angular_coefficient(i, outer_ring) *
         kern.cyclic_squared_increment(u.data() + grid_.index(i, 0), n);
  }
  return e;
}

double PolarOperator::mass(std::span<const double> u, int outer_ring) const {
  const auto& kern = simd::kernels();
  const std::size_t n = grid_.angles();
  if (outer_ring == 0) return 0.0;
  double s = grid_.node_weight(0, outer_ring) * u[0] * u[0];
  for (int i = 1; i <= outer_ring; ++i) {
    const double* r = u.data() + grid_.index(i, 0);
    s += grid_.node_weight(i, outer_ring) * kern.weighted_dot(ones_.data(), r, r, n);
  }
  return s;
}

double PolarOperator::coupling_integral(const FieldSet& f, int outer_ring) const {
  const auto& kern = simd::kernels();
  const std::size_t n = grid_.angles();
  if (outer_ring == 0) return 0.0;
  double s = 0.0;
  for (int c = 0; c < f.k(); ++c) {
    for (int e = c + 1; e < f.k(); ++e) {
      const auto& a = f.components[c];
      const auto& b = f.components[e];
      double part = grid_.node_weight(0, outer_ring) * a[0] * a[0] * b[0] * b[0];
      for (int i = 1; i <= outer_ring; ++i) {
        const std::size_t off = grid_.index(i, 0);
        part += grid_.node_weight(i, outer_ring) *
                kern.weighted_square_product(ones_.data(), a.data() + off, b.data() + off, n);
      }
      s += part;
    }
  }
  return s;
}

double PolarOperator::ring_mass(const FieldSet& f, int ring) const {
  const auto& kern = simd::kernels();
  if (ring == 0) {
    double s = 0.0;
    for (const auto& c : f.components) s += c[0] * c[0];
    return 2.0 * std::acos(-1.0) * s;
  }
  const std::size_t n = grid_.angles();
  double s = 0.0;
  for (int c = 0; c < f.k(); ++c) {
    const double* r = f.components[c].data() + grid_.index(ring, 0);
    s += kern.weighted_dot(ones_.data(), r, r, n);
  }
  return grid_.dtheta() * s;
}

double PolarOperator::total_energy(const FieldSet& f) const {
  double e = coupling_integral(f, grid_.rings());
  for (const auto& c : f.components) e += dirichlet_energy(c, grid_.rings());
  return e;
}

double PolarOperator::steady_residual(const FieldSet& f) const {
  const std::size_t interior = grid_.interior_count();
  std::vector<double> lap(grid_.node_count());
  std::vector<double> others(grid_.node_count());
  double worst = 0.0;
  for (int c = 0; c < f.k(); ++c) {
    laplacian(f.components[c], lap);
    std::fill(others.begin(), others.end(), 0.0);
    for (int e = 0; e < f.k(); ++e) {
      if (e == c) continue;
      for (std::size_t p = 0; p < interior; ++p) others[p] += f.components[e][p] * f.components[e][p];
    }
    double part = 0.0;
    for (std::size_t p = 0; p < interior; ++p) {
      part = std::max(part, std::abs(lap[p] - f.components[c][p] * others[p]));
    }
    worst += part;
  }
  return worst;
}

}  // namespace phasesep
