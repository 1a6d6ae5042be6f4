#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace phasesep::cli {

enum ExitCode : int {
  kPassed = 0,
  kChecksFailed = 1,
  kInvalidConfig = 2,
  kRunAborted = 3,
};

// Parses `key = value` lines; '#' starts a comment. Throws InvalidArgument
// on a line without '=' or a repeated key.
std::map<std::string, std::string> parse_config(const std::string& text);

// Entry point of the phasesep tool; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phasesep::cli
