#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "josephson/errors.hpp"
#include "josephson/experiments/sweep.hpp"
#include "josephson/junction/spec.hpp"

namespace josephson::io {

enum class ExperimentKind { dc, ac, energy, odlro, validate, oracle };
enum class OutputFormat { csv, json, both };

const char* to_string(ExperimentKind k);
const char* to_string(OutputFormat f);
std::optional<ExperimentKind> parse_kind(std::string_view s);
std::optional<OutputFormat> parse_format(std::string_view s);

struct ExperimentBlock {
  ExperimentKind kind = ExperimentKind::dc;
  experiments::Engine engine = experiments::Engine::meanfield;
  int grid = 17;             // Δθ points on [0, 2π)
  double tolerance = 1e-10;  // law and oracle thresholds
  double voltage = 0.25;
  double theta0 = 0.0;
  double duration = 0.0;  // 0: 16 periods of 2|e|V
  double sample_step = 0.0;
  double integrator_tol = 1e-10;
  double target_gap = 0.0;  // odlro: > 0 fixes region 1's gap instead of g11
};

struct OutputBlock {
  std::string directory = ".";
  OutputFormat format = OutputFormat::both;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  junction::JunctionSpec model;
  ExperimentBlock experiment;
  OutputBlock output;
};

// All problems found in one pass over the text.
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

// Flat `section.key = value` lines; `#` starts a comment; blank lines are
// ignored. experiment.kind is required unless `kind` is given; when both
// are present they must agree. Throws ConfigError listing every syntax,
// duplicate, unknown-key and range error.
ExperimentConfig parse_config(std::string_view text,
                              std::optional<ExperimentKind> kind = std::nullopt);

// Reads the file and parses it; unreadable files raise ConfigError.
ExperimentConfig load_config(const std::string& path,
                             std::optional<ExperimentKind> kind = std::nullopt);

// The config as `section.key = value` lines in a fixed order.
std::string format_config(const ExperimentConfig& c);

}  // namespace josephson::io
