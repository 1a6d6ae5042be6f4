#pragma once

#include <map>
#include <string>
#include <vector>

namespace phasesep {

// One pass/fail check: `value` is the measured worst case and `limit` the
// bound it was compared against.
struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct Report {
  std::string title;
  std::vector<Check> checks;
  std::map<std::string, double> metrics;

  bool passed() const;
  // Throws InvalidArgument when no check has that name.
  const Check& check(const std::string& name) const;
  void add(Check c) { checks.push_back(std::move(c)); }
  // Appends the checks and metrics of another report, prefixing names.
  void merge(const Report& other, const std::string& prefix);
};

}  // namespace phasesep
