#pragma once

#include <iosfwd>
#include <string>

#include "cli/spec.hpp"
#include "growthlab/cayley.hpp"

namespace growthlab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitBudget = 2,
  kExitHypothesis = 3,
  kExitParse = 64,
};

struct Artifact {
  std::string filename;  // e.g. growth.csv
  std::string content;
  int exit_code = kExitOk;
  /// Set when the artifact holds partial results of a budget overrun.
  std::string budget_message;
};

/// Runs the experiment and renders its artifact; library errors propagate.
Artifact execute(const ExperimentSpec& spec);

/// execute() plus output handling: writes to --out, else $GROWTHLAB_OUT, else
/// `out`. Every error becomes one JSON line on `diag` and an exit code.
int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& diag);

/// Parses argv-style arguments (without the program name) and runs them.
int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& diag);

/// Reads `radius,count` rows; `#` lines and a non-numeric header are skipped.
GrowthTable read_growth_csv(std::istream& in);

}  // namespace growthlab::cli
