// Batch front end: one subcommand per experiment kind.
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "josephson/io/config.hpp"
#include "josephson/io/run.hpp"

using namespace josephson;

int main(int argc, char** argv) {
  CLI::App app{"Two-region superconducting junction experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kToolVersion));

  const std::map<std::string, std::pair<io::ExperimentKind, std::string>> commands = {
      {"validate", {io::ExperimentKind::validate, "Run the full invariant suite"}},
      {"dc-sweep", {io::ExperimentKind::dc, "Current vs phase difference"}},
      {"ac-run", {io::ExperimentKind::ac, "Current under a constant voltage"}},
      {"energy-sweep", {io::ExperimentKind::energy, "Junction energy vs phase difference"}},
      {"odlro-scan", {io::ExperimentKind::odlro, "Pair correlation vs separation"}},
      {"oracle-check", {io::ExperimentKind::oracle, "Mean-field vs exact current"}},
  };

  std::string config_path;
  std::string out_dir;
  std::string format;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config", config_path, "Config file (section.key = value)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides output.directory)");
    sub->add_option("--format", format, "csv | json | both (overrides output.format)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? io::kExitPass : io::kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const auto kind = commands.at(name).first;

  io::ExperimentConfig config;
  try {
    config = config_path.empty() ? io::parse_config("", kind) : io::load_config(config_path, kind);
  } catch (const io::ConfigError& e) {
    std::cerr << e.what() << "\n";
    if (!out_dir.empty()) {
      io::write_failure_summary(out_dir, name, io::kExitUsage, "config_error", e.errors());
    }
    return io::kExitUsage;
  }
  if (!out_dir.empty()) config.output.directory = out_dir;
  if (!format.empty()) config.output.format = *io::parse_format(format);

  const auto outcome = io::run(config);
  std::printf("%s: %s (exit %d)\n", name.c_str(), outcome.status.c_str(), outcome.exit_code);
  if (!outcome.reason.empty()) std::printf("  %s\n", outcome.reason.c_str());
  for (const auto& f : outcome.files) {
    std::printf("  wrote %s/%s\n", config.output.directory.c_str(), f.c_str());
  }
  return outcome.exit_code;
}
