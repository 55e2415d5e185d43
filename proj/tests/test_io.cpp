#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "josephson/io/config.hpp"
#include "josephson/io/run.hpp"

using namespace josephson;
using namespace josephson::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch_root() {
  return fs::temp_directory_path() / ("josephson_test_io_" + std::to_string(::getpid()));
}

// Removes the per-process scratch tree at exit.
struct ScratchCleanup {
  ~ScratchCleanup() {
    std::error_code ec;
    fs::remove_all(scratch_root(), ec);
  }
} cleanup;

fs::path scratch_dir(const std::string& name) {
  const auto p = scratch_root() / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json summary(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "summary.json")); }

const char* kMinimalDc =
    "# two-site junction\n"
    "experiment.kind = dc\n"
    "model.L1 = 1\n"
    "model.L2 = 1   # one site each\n"
    "model.t_hop = 0\n"
    "model.g12 = 0.1\n"
    "experiment.grid = 17\n";

}  // namespace

TEST_CASE("parse_config: minimal dc config matches the defaults") {
  const auto c = parse_config(kMinimalDc);
  const junction::JunctionSpec defaults;
  CHECK(c.experiment.kind == ExperimentKind::dc);
  CHECK(c.model.L1 == defaults.L1);
  CHECK(c.model.L2 == defaults.L2);
  CHECK(c.model.g12 == defaults.g12);
  CHECK(c.model.g11 == defaults.g11);
  CHECK(c.model.mu == defaults.mu);
  CHECK(c.model.charge_unit == defaults.charge_unit);
  CHECK(c.model.t_hop == 0.0);
  CHECK(c.experiment.grid == 17);
  CHECK(c.output.format == OutputFormat::both);
}

TEST_CASE("parse_config: range rules") {
  CHECK(parse_config("experiment.kind = dc\nmodel.g12 = -0.1\n").model.g12 == -0.1);
  try {
    parse_config("experiment.kind = dc\nmodel.L1 = 0\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.errors().size() == 1);
    CHECK(e.errors()[0].find("model.L1") != std::string::npos);
    CHECK(e.errors()[0].find("line 2") != std::string::npos);
  }
}

TEST_CASE("parse_config: every error is reported") {
  const char* text =
      "experiment.kind = dc\n"
      "model.L1 = 0\n"
      "model.colour = red\n"
      "this line is wrong\n"
      "model.charge_unit = -1\n"
      "model.mu = abc\n"
      "model.mu = 1\n"
      "output.format = xml\n";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const auto& errs = e.errors();
    REQUIRE(errs.size() == 7);
    CHECK(errs[0].find("model.L1") != std::string::npos);
    CHECK(errs[1].find("unknown key 'model.colour'") != std::string::npos);
    CHECK(errs[2].find("line 4: syntax error") != std::string::npos);
    CHECK(errs[3].find("model.charge_unit") != std::string::npos);
    CHECK(errs[4].find("model.mu") != std::string::npos);
    CHECK(errs[5].find("duplicate key 'model.mu'") != std::string::npos);
    CHECK(errs[6].find("output.format") != std::string::npos);
    CHECK(std::string(e.what()).find("model.colour") != std::string::npos);
  }
}

TEST_CASE("parse_config: kind handling") {
  CHECK_THROWS_AS(parse_config("model.L1 = 2\n"), ConfigError);
  CHECK(parse_config("", ExperimentKind::ac).experiment.kind == ExperimentKind::ac);
  CHECK_THROWS_AS(parse_config("experiment.kind = dc\n", ExperimentKind::ac), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment.kind = dc\nmodel.L1 = 2\nmodel.L1 = 3\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("format_config round-trips") {
  auto c = parse_config(kMinimalDc);
  c.model.boundary = junction::Boundary::open;
  c.model.mu = 0.1 + 0.2;
  c.experiment.voltage = 1.0 / 3.0;
  c.output.seed = 42;
  const auto back = parse_config(format_config(c));
  CHECK(format_config(back) == format_config(c));
  CHECK(back.model.mu == c.model.mu);
  CHECK(back.experiment.voltage == c.experiment.voltage);
}

TEST_CASE("run: dc sweep artifacts") {
  auto c = parse_config(kMinimalDc);
  c.output.directory = scratch_dir("dc").string();
  const auto out = run(c);
  CHECK(out.exit_code == kExitPass);
  const fs::path dir(c.output.directory);
  const auto csv = slurp(dir / "result.csv");
  CHECK(csv.rfind("delta_theta,observable\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 18);
  CHECK(fs::exists(dir / "plot.gp"));
  const auto s = summary(dir);
  CHECK(s["schema_version"] == 1);
  CHECK(s["status"] == "pass");
  CHECK(std::abs(s["results"]["fit"]["sin"].get<double>() + 0.05) < 1e-12);
  CHECK(s["results"]["residual"].get<double>() < 1e-10);
  CHECK(s["config"]["model"]["g12"] == 0.1);
  CHECK(s["data"]["delta_theta"].size() == 17);

  // Determinism.
  auto again = c;
  again.output.directory = scratch_dir("dc_again").string();
  run(again);
  CHECK(slurp(fs::path(again.output.directory) / "result.csv") == csv);
}

TEST_CASE("run: output formats") {
  auto c = parse_config(kMinimalDc);
  c.output.format = OutputFormat::json;
  c.output.directory = scratch_dir("json_only").string();
  CHECK(run(c).exit_code == kExitPass);
  CHECK_FALSE(fs::exists(fs::path(c.output.directory) / "result.csv"));
  CHECK(summary(c.output.directory)["data"]["observable"].size() == 17);

  c.output.format = OutputFormat::csv;
  c.output.directory = scratch_dir("csv_only").string();
  CHECK(run(c).exit_code == kExitPass);
  CHECK(fs::exists(fs::path(c.output.directory) / "result.csv"));
  CHECK_FALSE(summary(c.output.directory).contains("data"));
}

TEST_CASE("run: failures exit nonzero and name the invariant") {
  SUBCASE("law violation") {
    auto c = parse_config(std::string(kMinimalDc) + "experiment.tolerance = 1e-300\n");
    c.output.directory = scratch_dir("law").string();
    const auto out = run(c);
    CHECK(out.exit_code == kExitInvariant);
    const auto s = summary(c.output.directory);
    CHECK(s["status"] == "invariant_violation");
    CHECK(s["violated"][0] == "dc_law");
    CHECK(s["exit_code"] == kExitInvariant);
  }
  SUBCASE("capacity") {
    auto c = parse_config("experiment.kind = dc\nexperiment.engine = exact\nmodel.L1 = 9\nmodel.L2 = 9\n");
    c.output.directory = scratch_dir("capacity").string();
    const auto out = run(c);
    CHECK(out.exit_code == kExitCapacity);
    const auto s = summary(c.output.directory);
    CHECK(s["status"] == "capacity_error");
    CHECK(s["reason"].get<std::string>().find("2^36") != std::string::npos);
  }
  SUBCASE("insufficient ac period coverage") {
    auto c = parse_config("experiment.kind = ac\nexperiment.duration = 5\n");
    c.output.directory = scratch_dir("ac_short").string();
    CHECK(run(c).exit_code == kExitUsage);
    CHECK(summary(c.output.directory)["status"] == "config_error");
  }
  SUBCASE("config errors before a run") {
    const auto dir = scratch_dir("bad_config");
    write_failure_summary(dir.string(), "dc-sweep", kExitUsage, "config_error",
                          {"line 1: model.L1: out of range"});
    const auto s = summary(dir);
    CHECK(s["exit_code"] == kExitUsage);
    CHECK(s["violated"][0] == "config");
    CHECK(s["errors"].size() == 1);
  }
}

TEST_CASE("run: ac, odlro, oracle and validate kinds") {
  SUBCASE("ac at V = 0.25") {
    auto c = parse_config(
        "experiment.kind = ac\nmodel.t_hop = 0\nmodel.g12 = 0.02\nexperiment.voltage = 0.25\n"
        "experiment.theta0 = 0.5\n");
    c.output.directory = scratch_dir("ac").string();
    CHECK(run(c).exit_code == kExitPass);
    const auto s = summary(c.output.directory);
    const double peak = s["results"]["peak_omega"];
    CHECK(std::abs(peak - 0.5) <= s["results"]["bin_width"].get<double>());
    CHECK(slurp(fs::path(c.output.directory) / "result.csv").rfind("time,current,charge_region1\n", 0) == 0);
  }
  SUBCASE("odlro") {
    auto c = parse_config("experiment.kind = odlro\nmodel.L1 = 64\nmodel.L2 = 64\nmodel.mu = -1\n"
                          "experiment.target_gap = 1\n");
    c.output.directory = scratch_dir("odlro").string();
    CHECK(run(c).exit_code == kExitPass);
    const auto s = summary(c.output.directory);
    CHECK(s["results"]["plateau"].get<double>() == doctest::Approx(0.10103108770035769));
    CHECK(s["results"]["decay_ratio"].get<double>() >= 100.0);
    CHECK(slurp(fs::path(c.output.directory) / "result.csv")
              .rfind("separation,correlation_real,correlation_imag,plateau_deviation\n", 0) == 0);
  }
  SUBCASE("oracle") {
    auto c = parse_config("experiment.kind = oracle\nmodel.L1 = 2\nmodel.L2 = 2\nmodel.g11 = 4\nmodel.g22 = 4\n");
    c.output.directory = scratch_dir("oracle").string();
    CHECK(run(c).exit_code == kExitPass);
    CHECK(summary(c.output.directory)["results"]["max_discrepancy"].get<double>() < 1e-10);
  }
  SUBCASE("validate") {
    auto c = parse_config("experiment.kind = validate\n");
    c.output.directory = scratch_dir("validate").string();
    const auto out = run(c);
    CHECK(out.exit_code == kExitPass);
    CHECK(out.violated.empty());
    const auto s = summary(c.output.directory);
    CHECK(s["results"]["passed"] == true);
    CHECK(s["results"]["checks"].size() >= 15);
  }
}
