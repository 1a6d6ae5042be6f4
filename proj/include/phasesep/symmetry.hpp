#pragma once

// Symmetry classes of k-component fields on a grid, expressed as equality
// relations between "slots" (component, node). Projection replaces every
// slot by the mean over its orbit, summed in a canonical order so that all
// members of an orbit receive the bit-identical value.

#include <cstdint>
#include <span>
#include <vector>

#include "phasesep/geometry.hpp"

namespace phasesep {

class SymmetryClass {
 public:
  // value(left, p) == value(right, permutation[p]) for every node p.
  struct Relation {
    int left;
    int right;
    std::vector<std::uint32_t> permutation;
  };

  SymmetryClass() = default;
  SymmetryClass(std::size_t nodes, int components, std::vector<Relation> relations);

  std::size_t nodes() const { return nodes_; }
  int components() const { return components_; }
  std::size_t orbit_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  const std::vector<Relation>& relations() const { return relations_; }

  // Orbit index of every slot c*nodes() + p.
  std::vector<std::uint32_t> orbit_ids() const;

  // fields[c] has nodes() entries. Exact: residual() is 0 afterwards, and
  // orbits that are already constant are left untouched.
  void project(std::vector<std::vector<double>>& fields) const;
  double residual(const std::vector<std::vector<double>>& fields) const;

 private:
  std::size_t nodes_ = 0;
  int components_ = 0;
  std::vector<Relation> relations_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> members_;  // slot ids c*nodes + p, sorted per orbit
};

// u(T_i z) = v(z) for every nodal-line reflection T_i of Re(z^d).
SymmetryClass dihedral_pair_class(const DiskGrid& grid, int d);

// k-component class generated by G (rotation by pi/d) and conjugation:
// u_{c+1}(z) = u_c(G z) (indices mod k) and u_{-c}(z) = u_c(conj z).
SymmetryClass rotation_class(const DiskGrid& grid, Degree d, int k);

}  // namespace phasesep
