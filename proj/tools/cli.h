#pragma once

// Command-line front end: rate, verify, sweep, simulate. Every verb is a
// short composition of library calls plus formatting.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sosrate/rational.h"

namespace sosrate::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitNumerical = 4,
  kExitVerification = 5,
};

/// "v" or "start:stop[:count]" (count defaults to 10, evenly spaced,
/// endpoints included). Values are exact rationals.
std::vector<Rational> ParseRange(std::string_view text);

/// key = value lines; '#' starts a comment. Keys are kept verbatim.
std::map<std::string, std::string> ParseConfig(std::istream& in);

/// 9 significant digits.
std::string FormatFloat(double value);

/// args excludes the program name.
int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sosrate::cli
