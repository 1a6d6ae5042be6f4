#include "phasesep/field.hpp"

#include <algorithm>
#include <limits>

#include "phasesep/error.hpp"

namespace phasesep {

FieldSet::FieldSet(DiskGrid g, Degree d, int k) : grid(std::move(g)), degree(d) {
  require(k >= 1, "a field set needs at least one component");
  components.assign(k, std::vector<double>(grid.node_count(), 0.0));
}

FieldSet::FieldSet(DiskGrid g, Degree d, std::vector<std::vector<double>> values)
    : grid(std::move(g)), degree(d), components(std::move(values)) {
  require(!components.empty(), "a field set needs at least one component");
  for (const auto& c : components) {
    require(c.size() == grid.node_count(), "component size does not match the grid");
  }
}

std::span<const double> FieldSet::ring(int c, int i) const {
  const auto& v = components[c];
  if (i == 0) return {v.data(), 1};
  return {v.data() + grid.index(i, 0), static_cast<std::size_t>(grid.angles())};
}

std::span<double> FieldSet::ring(int c, int i) {
  auto& v = components[c];
  if (i == 0) return {v.data(), 1};
  return {v.data() + grid.index(i, 0), static_cast<std::size_t>(grid.angles())};
}

double FieldSet::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : components) m = std::min(m, *std::min_element(c.begin(), c.end()));
  return m;
}

double FieldSet::max_value(int c) const {
  return *std::max_element(components[c].begin(), components[c].end());
}

FieldSet harmonic_pair(const DiskGrid& grid, int d) {
  const auto phi = sample_phi(grid, d);
  std::vector<double> plus(phi.size()), minus(phi.size());
  for (std::size_t p = 0; p < phi.size(); ++p) {
    plus[p] = phi[p] > 0.0 ? phi[p] : 0.0;
    minus[p] = phi[p] < 0.0 ? -phi[p] : 0.0;
  }
  return FieldSet(grid, Degree::integer(d), {std::move(plus), std::move(minus)});
}

FieldSet psi_components(const DiskGrid& grid, Degree d, int k) {
  std::vector<std::vector<double>> values;
  for (int c = 0; c < k; ++c) values.push_back(sample_psi(grid, d, k, c));
  return FieldSet(grid, d, std::move(values));
}

}  // namespace phasesep
