#include "phasesep/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "phasesep/error.hpp"

namespace phasesep {
namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::uint32_t{0});
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  }
  std::vector<std::uint32_t> parent;
};

}  // namespace

SymmetryClass::SymmetryClass(std::size_t nodes, int components, std::vector<Relation> relations)
    : nodes_(nodes), components_(components), relations_(std::move(relations)) {
  require(components >= 1, "symmetry class needs at least one component");
  const std::size_t slots = nodes * static_cast<std::size_t>(components);
  DisjointSets sets(slots);
  for (const auto& rel : relations_) {
    require(rel.left >= 0 && rel.left < components && rel.right >= 0 && rel.right < components,
            "relation refers to a missing component");
    require(rel.permutation.size() == nodes, "relation permutation has the wrong size");
    for (std::size_t p = 0; p < nodes; ++p) {
      sets.unite(static_cast<std::uint32_t>(rel.left * nodes + p),
                 static_cast<std::uint32_t>(rel.right * nodes + rel.permutation[p]));
    }
  }
  // Bucket slots by root; slots are visited in increasing order, so each
  // bucket is already sorted.
  std::vector<std::uint32_t> root_of(slots);
  std::vector<std::size_t> count(slots, 0);
  for (std::size_t s = 0; s < slots; ++s) {
    root_of[s] = sets.find(static_cast<std::uint32_t>(s));
    ++count[root_of[s]];
  }
  std::vector<std::size_t> start(slots, 0);
  offsets_.push_back(0);
  for (std::size_t s = 0; s < slots; ++s) {
    if (root_of[s] == s) {
      start[s] = offsets_.back();
      offsets_.push_back(offsets_.back() + count[s]);
    }
  }
  members_.resize(slots);
  std::vector<std::size_t> fill(slots, 0);
  for (std::size_t s = 0; s < slots; ++s) {
    const std::uint32_t r = root_of[s];
    members_[start[r] + fill[r]++] = static_cast<std::uint32_t>(s);
  }
}

std::vector<std::uint32_t> SymmetryClass::orbit_ids() const {
  std::vector<std::uint32_t> out(members_.size());
  for (std::size_t o = 0; o + 1 < offsets_.size(); ++o) {
    for (std::size_t m = offsets_[o]; m < offsets_[o + 1]; ++m) {
      out[members_[m]] = static_cast<std::uint32_t>(o);
    }
  }
  return out;
}

void SymmetryClass::project(std::vector<std::vector<double>>& fields) const {
  require(fields.size() == static_cast<std::size_t>(components_),
          "field count does not match the symmetry class");
  auto at = [&](std::uint32_t slot) -> double& {
    return fields[slot / nodes_][slot % nodes_];
  };
  for (std::size_t o = 0; o + 1 < offsets_.size(); ++o) {
    const std::size_t b = offsets_[o];
    const std::size_t e = offsets_[o + 1];
    if (e - b == 1) continue;
    const double first = at(members_[b]);
    bool uniform = true;
    for (std::size_t m = b + 1; m < e && uniform; ++m) uniform = at(members_[m]) == first;
    if (uniform) continue;
    double sum = 0.0;
    for (std::size_t m = b; m < e; ++m) sum += at(members_[m]);
    const double mean = sum / static_cast<double>(e - b);
    for (std::size_t m = b; m < e; ++m) at(members_[m]) = mean;
  }
}

double SymmetryClass::residual(const std::vector<std::vector<double>>& fields) const {
  double worst = 0.0;
  for (const auto& rel : relations_) {
    const auto& a = fields[rel.left];
    const auto& b = fields[rel.right];
    for (std::size_t p = 0; p < nodes_; ++p) {
      worst = std::max(worst, std::abs(a[p] - b[rel.permutation[p]]));
    }
  }
  return worst;
}

SymmetryClass dihedral_pair_class(const DiskGrid& grid, int d) {
  std::vector<SymmetryClass::Relation> rel;
  for (int i = 1; i <= d; ++i) {
    rel.push_back({1, 0, reflection_map(grid, d, i).permutation});
  }
  return SymmetryClass(grid.node_count(), 2, std::move(rel));
}

SymmetryClass rotation_class(const DiskGrid& grid, Degree d, int k) {
  require(k >= 2 && d.twice() % k == 0, "2d must be a multiple of k >= 2");
  const auto g = rotation_map(grid, d, 1).permutation;
  const auto conj = conjugation_map(grid).permutation;
  std::vector<SymmetryClass::Relation> rel;
  for (int c = 0; c < k; ++c) {
    rel.push_back({(c + 1) % k, c, g});
    rel.push_back({(k - c) % k, c, conj});
  }
  return SymmetryClass(grid.node_count(), k, std::move(rel));
}

}  // namespace phasesep
