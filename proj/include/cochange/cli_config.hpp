#pragma once

#include <string>
#include <vector>

#include "cochange/pipeline.hpp"

namespace cochange {

// Thrown by parse_config when --help is requested.
struct HelpRequested {
  std::string text;
};

// Turns command-line arguments (without the program name) into a validated
// AnalysisConfig. Precedence is flags > config file > defaults. Throws
// UsageError on unknown flags or out-of-range values.
AnalysisConfig parse_config(const std::vector<std::string>& args);

// Full CLI entry point: parse, run, map errors to exit codes.
//   0 success, 2 usage, 3 input parse, 4 empty result, 5 internal
int run_cli(int argc, const char* const* argv);

}  // namespace cochange
