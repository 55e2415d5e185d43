#pragma once

#include <string>
#include <vector>

#include "josephson/io/config.hpp"

namespace josephson::io {

inline constexpr int kExitPass = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct RunOutcome {
  int exit_code = kExitPass;
  std::string status;                 // pass | invariant_violation | config_error | ...
  std::string reason;                 // empty on pass
  std::vector<std::string> violated;  // invariant names
  std::vector<std::string> files;     // written, relative to the output directory
};

// Runs the configured experiment and writes into config.output.directory:
//   result.csv  (format csv|both) with the fixed schema of the kind,
//   plot.gp     (whenever result.csv is written),
//   summary.json (always; carries the data arrays too for json|both).
// Errors are mapped to exit codes and recorded in summary.json, not thrown.
RunOutcome run(const ExperimentConfig& config);

// summary.json for failures that happen before a config exists.
void write_failure_summary(const std::string& directory, const std::string& command,
                           int exit_code, const std::string& status,
                           const std::vector<std::string>& errors);

}  // namespace josephson::io
