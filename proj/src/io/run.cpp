#include "josephson/io/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "josephson/bcs/gap.hpp"
#include "josephson/bcs/quasifree.hpp"
#include "josephson/errors.hpp"
#include "josephson/experiments/ac.hpp"
#include "josephson/experiments/sweep.hpp"
#include "josephson/experiments/validate.hpp"

namespace josephson::io {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using junction::Region;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

class Csv {
 public:
  explicit Csv(std::string header) : text_(std::move(header) + "\n") {}
  template <class... T>
  void row(const T&... cells) {
    std::string line;
    ((line += (line.empty() ? "" : ",") + cell(cells)), ...);
    text_ += line + "\n";
  }
  const std::string& text() const { return text_; }

 private:
  static std::string cell(double x) { return num(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(bool b) { return b ? "true" : "false"; }
  std::string text_;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw ValidationError("cannot write '" + p.string() + "'");
}

json config_json(const ExperimentConfig& c) {
  const auto& m = c.model;
  const auto& e = c.experiment;
  return {
      {"model",
       {{"L1", m.L1}, {"L2", m.L2}, {"t_hop", m.t_hop}, {"mu", m.mu}, {"g11", m.g11},
        {"g22", m.g22}, {"g12", m.g12}, {"charge_unit", m.charge_unit},
        {"boundary", m.boundary == junction::Boundary::periodic ? "periodic" : "open"},
        {"cross_hop", m.cross_hop}, {"volume_norm", m.volume_norm()}}},
      {"experiment",
       {{"kind", to_string(e.kind)}, {"engine", experiments::to_string(e.engine)},
        {"grid", e.grid}, {"tolerance", e.tolerance}, {"voltage", e.voltage},
        {"theta0", e.theta0}, {"duration", e.duration}, {"sample_step", e.sample_step},
        {"integrator_tol", e.integrator_tol}, {"target_gap", e.target_gap}}},
      {"output",
       {{"directory", c.output.directory}, {"format", to_string(c.output.format)},
        {"seed", c.output.seed}}},
  };
}

// What one experiment produced.
struct Product {
  std::string csv;
  std::string plot;  // gnuplot body, after the common preamble
  json results = json::object();
  json data = json::object();
  std::vector<std::string> violated;
  std::string reason;
};

std::string plot_preamble(const std::string& title) {
  return "# gnuplot script; run: gnuplot -p plot.gp\nset datafile separator ','\n"
         "set key autotitle columnhead\nset title '" + title + "'\nset grid\n";
}

Product sweep(const ExperimentConfig& c) {
  const auto& e = c.experiment;
  const auto grid = experiments::default_theta_grid(e.grid);
  const bool dc = e.kind == ExperimentKind::dc;
  const auto r = dc ? experiments::dc_sweep(c.model, grid, e.engine, e.tolerance)
                    : experiments::energy_sweep(c.model, grid, e.engine, e.tolerance);
  Product p;
  Csv csv("delta_theta,observable");
  for (std::size_t i = 0; i < r.grid.size(); ++i) csv.row(r.grid[i], r.values[i].real());
  p.csv = csv.text();
  p.results = {{"observable", r.observable},
               {"engine", experiments::to_string(e.engine)},
               {"grid_points", r.grid.size()},
               {"fit", {{"constant", r.fit.constant}, {"cos", r.fit.cos}, {"sin", r.fit.sin}}},
               {"residual", r.residual},
               {"max_imag", r.max_imag},
               {"tolerance", e.tolerance},
               {"law_holds", r.law_holds},
               {"law_report", r.law_report}};
  if (!dc) {
    p.results["cos_sign"] = r.fit.cos < 0 ? "negative" : (r.fit.cos > 0 ? "positive" : "zero");
  }
  p.data = {{"delta_theta", r.grid}, {"observable", r.real_values()}};
  if (!r.law_holds) {
    p.violated.push_back(dc ? "dc_law" : "energy_law");
    p.reason = r.law_report;
  }
  p.plot = "set xlabel 'delta theta'\nset ylabel '" + r.observable + "'\n" +
           "f(x) = " + num(r.fit.constant) + " + " + num(r.fit.cos) + "*cos(x) + " +
           num(r.fit.sin) + "*sin(x)\n" +
           "plot 'result.csv' using 1:2 with points pt 7, f(x) title 'fit' with lines\n";
  return p;
}

Product ac(const ExperimentConfig& c) {
  const auto& e = c.experiment;
  experiments::AcOptions o;
  o.voltage = e.voltage;
  o.theta0 = e.theta0;
  o.duration = e.duration;
  o.sample_step = e.sample_step;
  o.tol = e.integrator_tol;
  const auto r = experiments::ac_run(c.model, o);
  Product p;
  Csv csv("time,current,charge_region1");
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    csv.row(r.times[i], r.current[i], r.charge_region1[i]);
  }
  p.csv = csv.text();
  const double ehrenfest_limit = 100 * o.tol;
  p.results = {{"voltage", o.voltage},
               {"theta0", o.theta0},
               {"duration", r.options.duration},
               {"sample_step", r.options.sample_step},
               {"samples", r.times.size()},
               {"peak_omega", r.peak_omega},
               {"expected_omega", r.expected_omega},
               {"bin_width", r.bin_width},
               {"within_bin", r.within_bin},
               {"max_ehrenfest", r.max_ehrenfest},
               {"ehrenfest_threshold", ehrenfest_limit},
               {"current_spread", r.current_spread},
               {"accepted_steps", r.stats.accepted_steps},
               {"rejected_steps", r.stats.rejected_steps},
               {"matvecs", r.stats.matvecs}};
  p.data = {{"time", r.times}, {"current", r.current}, {"charge_region1", r.charge_region1},
            {"omega", r.omega}, {"power", r.power}};
  if (!(r.max_ehrenfest < ehrenfest_limit)) {
    p.violated.push_back("ehrenfest");
    p.reason = "Ehrenfest residual " + num(r.max_ehrenfest) + " exceeds " + num(ehrenfest_limit);
  }
  if (o.voltage != 0.0 && !r.within_bin) {
    p.violated.push_back("ac_frequency");
    p.reason += (p.reason.empty() ? "" : "; ") + std::string("spectral peak ") +
                num(r.peak_omega) + " not within one bin of " + num(r.expected_omega);
  }
  p.plot = "set xlabel 't'\nset multiplot layout 2,1\n"
           "plot 'result.csv' using 1:2 with lines\n"
           "plot 'result.csv' using 1:3 with lines\nunset multiplot\n";
  return p;
}

Product odlro(const ExperimentConfig& c) {
  const auto& m = c.model;
  auto s1 = bcs::region_solution(m, Region::one);
  if (c.experiment.target_gap > 0.0) {
    bcs::GapOptions go;
    go.boundary = m.boundary;
    const double g = bcs::coupling_for_gap(m.L1, m.t_hop, m.mu, c.experiment.target_gap,
                                           m.boundary);
    s1 = bcs::solve_gap(m.L1, m.t_hop, m.mu, g, go);
    s1.region = 1;
  }
  const auto s2 = bcs::region_solution(m, Region::two);
  const auto table = bcs::odlro_scan(bcs::covariance(s1, s2, m), m);
  Product p;
  Csv csv("separation,correlation_real,correlation_imag,plateau_deviation");
  json sep = json::array(), re = json::array(), im = json::array(), dev = json::array();
  for (const auto& row : table.rows) {
    csv.row(row.separation, row.correlation.real(), row.correlation.imag(), row.deviation);
    sep.push_back(row.separation);
    re.push_back(row.correlation.real());
    im.push_back(row.correlation.imag());
    dev.push_back(row.deviation);
  }
  p.csv = csv.text();
  const double d2 = table.rows.size() > 2 ? table.rows[2].deviation : std::nan("");
  const double dmax = table.rows.back().deviation;
  p.results = {{"gap", s1.gap},
               {"coupling", s1.coupling},
               {"filling", s1.filling()},
               {"pair_amplitude", {table.pair_amplitude.real(), table.pair_amplitude.imag()}},
               {"plateau", table.plateau},
               {"max_separation", table.rows.back().separation},
               {"deviation_at_2", finite_or_null(d2)},
               {"deviation_at_max", dmax},
               {"decay_ratio", finite_or_null(dmax > 0 ? d2 / dmax : INFINITY)},
               {"max_cross_deviation", table.max_cross_deviation}};
  p.data = {{"separation", sep}, {"correlation_real", re}, {"correlation_imag", im},
            {"plateau_deviation", dev}};
  if (!(table.max_cross_deviation < 1e-12)) {
    p.violated.push_back("cross_region_factorization");
    p.reason = "cross-region correlation deviates from Psi2* Psi1 by " +
               num(table.max_cross_deviation);
  }
  p.plot = "set xlabel 'separation'\nset ylabel 'deviation from plateau'\nset logscale y\n"
           "plot 'result.csv' using 1:($4 > 0 ? $4 : 1/0) with linespoints pt 7\n";
  return p;
}

Product oracle(const ExperimentConfig& c) {
  const auto grid = experiments::default_theta_grid(c.experiment.grid);
  Product p;
  try {
    const auto r = experiments::oracle_check(c.model, grid, c.experiment.tolerance);
    Csv csv("delta_theta,meanfield,exact");
    for (std::size_t i = 0; i < r.grid.size(); ++i) csv.row(r.grid[i], r.meanfield[i], r.exact[i]);
    p.csv = csv.text();
    p.results = {{"max_discrepancy", r.max_discrepancy}, {"tolerance", c.experiment.tolerance}};
    p.data = {{"delta_theta", r.grid}, {"meanfield", r.meanfield}, {"exact", r.exact}};
  } catch (const ImplementationDefectError& e) {
    p.violated.push_back("oracle_meanfield_vs_exact");
    p.reason = e.what();
  }
  p.plot = "set xlabel 'delta theta'\nset ylabel 'current'\n"
           "plot 'result.csv' using 1:2 with points pt 7, '' using 1:3 with lines\n";
  return p;
}

Product validate(const ExperimentConfig& c) {
  const auto checks = experiments::validation_suite(c.model, c.experiment.tolerance, c.output.seed);
  Product p;
  Csv csv("check,value,threshold,passed,skipped");
  json list = json::array();
  for (const auto& ch : checks) {
    csv.row(ch.name, ch.value, ch.threshold, ch.passed, ch.skipped);
    list.push_back({{"name", ch.name}, {"value", finite_or_null(ch.value)},
                    {"threshold", ch.threshold}, {"passed", ch.passed},
                    {"skipped", ch.skipped}, {"detail", ch.detail}});
    if (!ch.passed) {
      p.violated.push_back(ch.name);
      p.reason += (p.reason.empty() ? "" : "; ") + ch.name + ": " + ch.detail;
    }
  }
  p.csv = csv.text();
  p.results = {{"checks", list}, {"passed", p.violated.empty()}};
  p.plot = "set ylabel 'value'\nset logscale y\nset xtics rotate by -45\nset style fill solid\n"
           "plot 'result.csv' using 0:($2 > 0 ? $2 : 1e-18):xtic(1) with boxes notitle\n";
  return p;
}

json summary_skeleton(const std::string& kind) {
  return {{"schema_version", kSchemaVersion},
          {"tool", "josephson"},
          {"tool_version", kToolVersion},
          {"kind", kind}};
}

void finish(json& s, const RunOutcome& o) {
  s["status"] = o.status;
  s["exit_code"] = o.exit_code;
  s["reason"] = o.reason;
  s["violated"] = o.violated;
}

}  // namespace

RunOutcome run(const ExperimentConfig& c) {
  RunOutcome out;
  const fs::path dir(c.output.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    out.exit_code = kExitUsage;
    out.status = "config_error";
    out.reason = "cannot create output directory '" + dir.string() + "'";
    return out;
  }

  json summary = summary_skeleton(to_string(c.experiment.kind));
  summary["config"] = config_json(c);
  Product p;
  try {
    switch (c.experiment.kind) {
      case ExperimentKind::dc:
      case ExperimentKind::energy: p = sweep(c); break;
      case ExperimentKind::ac: p = ac(c); break;
      case ExperimentKind::odlro: p = odlro(c); break;
      case ExperimentKind::oracle: p = oracle(c); break;
      case ExperimentKind::validate: p = validate(c); break;
    }
    out.violated = p.violated;
    out.reason = p.reason;
    out.exit_code = p.violated.empty() ? kExitPass : kExitInvariant;
    out.status = p.violated.empty() ? "pass" : "invariant_violation";
  } catch (const CapacityError& e) {
    out = {kExitCapacity, "capacity_error", e.what(), {"capacity"}, {}};
  } catch (const IntegrationError& e) {
    out = {kExitCapacity, "integration_error", e.what(), {"integration"}, {}};
  } catch (const SolverError& e) {
    out = {kExitCapacity, "solver_error", e.what(), {"gap_solver"}, {}};
  } catch (const ValidationError& e) {
    out = {kExitUsage, "config_error", e.what(), {"config"}, {}};
  } catch (const std::exception& e) {
    out = {kExitInvariant, "invariant_violation", e.what(), {"internal"}, {}};
  }

  try {
    const bool csv = c.output.format != OutputFormat::json;
    const bool data_in_json = c.output.format != OutputFormat::csv;
    if (!p.csv.empty() && csv) {
      write_file(dir / "result.csv", p.csv);
      write_file(dir / "plot.gp",
                 plot_preamble(std::string("josephson ") + to_string(c.experiment.kind)) + p.plot);
      out.files = {"result.csv", "plot.gp"};
    }
    summary["results"] = p.results;
    if (data_in_json && !p.data.empty()) summary["data"] = p.data;
    out.files.push_back("summary.json");
    summary["files"] = out.files;
    finish(summary, out);
    write_file(dir / "summary.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    out.exit_code = kExitUsage;
    out.status = "config_error";
    out.reason = e.what();
  }
  return out;
}

void write_failure_summary(const std::string& directory, const std::string& command,
                           int exit_code, const std::string& status,
                           const std::vector<std::string>& errors) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  json s = summary_skeleton(command);
  RunOutcome o{exit_code, status, {}, {status == "config_error" ? "config" : status}, {}};
  for (const auto& e : errors) o.reason += (o.reason.empty() ? "" : "; ") + e;
  s["errors"] = errors;
  s["files"] = {"summary.json"};
  finish(s, o);
  std::ofstream(fs::path(directory) / "summary.json", std::ios::binary) << s.dump(2) << "\n";
}

}  // namespace josephson::io
