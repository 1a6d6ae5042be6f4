#include "phasesep/report.hpp"

#include <algorithm>

#include "phasesep/error.hpp"

namespace phasesep {

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check& Report::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw InvalidArgument("report '" + title + "' has no check named " + name);
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (auto c : other.checks) {
    c.name = prefix + c.name;
    checks.push_back(std::move(c));
  }
  for (const auto& [k, v] : other.metrics) metrics[prefix + k] = v;
}

}  // namespace phasesep
