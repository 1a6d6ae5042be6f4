#pragma once

#include <span>
#include <vector>

#include "phasesep/geometry.hpp"

namespace phasesep {

// k nonnegative scalar fields on a disk grid. The outer ring carries the
// Dirichlet data and is never written by the solvers.
struct FieldSet {
  DiskGrid grid;
  Degree degree;
  std::vector<std::vector<double>> components;

  FieldSet(DiskGrid g, Degree d, int k);
  FieldSet(DiskGrid g, Degree d, std::vector<std::vector<double>> values);

  int k() const { return static_cast<int>(components.size()); }
  std::span<const double> ring(int c, int i) const;
  std::span<double> ring(int c, int i);

  double min_value() const;
  double max_value(int c) const;
};

// (Phi^+, Phi^-) sampled on the grid.
FieldSet harmonic_pair(const DiskGrid& grid, int d);
// Psi∘G^c for c = 0..k-1.
FieldSet psi_components(const DiskGrid& grid, Degree d, int k);

}  // namespace phasesep
