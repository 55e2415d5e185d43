#include "josephson/io/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace josephson::io {

using junction::Boundary;

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::dc: return "dc";
    case ExperimentKind::ac: return "ac";
    case ExperimentKind::energy: return "energy";
    case ExperimentKind::odlro: return "odlro";
    case ExperimentKind::validate: return "validate";
    case ExperimentKind::oracle: return "oracle";
  }
  return "?";
}

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::both: return "both";
  }
  return "?";
}

std::optional<ExperimentKind> parse_kind(std::string_view s) {
  for (auto k : {ExperimentKind::dc, ExperimentKind::ac, ExperimentKind::energy,
                 ExperimentKind::odlro, ExperimentKind::validate, ExperimentKind::oracle}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<OutputFormat> parse_format(std::string_view s) {
  for (auto f : {OutputFormat::csv, OutputFormat::json, OutputFormat::both}) {
    if (s == to_string(f)) return f;
  }
  return std::nullopt;
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += "\n  " + s;
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_double(std::string_view s) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return x;
}

std::optional<long long> to_integer(std::string_view s) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return x;
}

// A setter returns an error message, empty on success.
using Setter = std::function<std::string(ExperimentConfig&, std::string_view)>;

template <class Get>
Setter real_key(Get get, std::function<bool(double)> ok, const char* rule) {
  return [=](ExperimentConfig& c, std::string_view v) -> std::string {
    const auto x = to_double(v);
    if (!x) return "expected a number, got '" + std::string(v) + "'";
    if (!std::isfinite(*x) || !ok(*x)) return std::string("out of range: must be ") + rule;
    get(c) = *x;
    return {};
  };
}

template <class Get>
Setter int_key(Get get, long long lo, long long hi) {
  return [=](ExperimentConfig& c, std::string_view v) -> std::string {
    const auto x = to_integer(v);
    if (!x) return "expected an integer, got '" + std::string(v) + "'";
    if (*x < lo || *x > hi) {
      return "out of range: must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    }
    get(c) = static_cast<std::remove_reference_t<decltype(get(c))>>(*x);
    return {};
  };
}

const auto any = [](double) { return true; };
const auto positive = [](double x) { return x > 0.0; };
const auto non_negative = [](double x) { return x >= 0.0; };

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"model.L1", int_key([](ExperimentConfig& c) -> int& { return c.model.L1; }, 1, 64)},
      {"model.L2", int_key([](ExperimentConfig& c) -> int& { return c.model.L2; }, 1, 64)},
      {"model.t_hop", real_key([](ExperimentConfig& c) -> double& { return c.model.t_hop; }, any, "finite")},
      {"model.mu", real_key([](ExperimentConfig& c) -> double& { return c.model.mu; }, any, "finite")},
      {"model.g11", real_key([](ExperimentConfig& c) -> double& { return c.model.g11; }, non_negative, ">= 0")},
      {"model.g22", real_key([](ExperimentConfig& c) -> double& { return c.model.g22; }, non_negative, ">= 0")},
      {"model.g12", real_key([](ExperimentConfig& c) -> double& { return c.model.g12; }, any, "finite")},
      {"model.charge_unit", real_key([](ExperimentConfig& c) -> double& { return c.model.charge_unit; }, positive, "> 0")},
      {"model.cross_hop", real_key([](ExperimentConfig& c) -> double& { return c.model.cross_hop; }, any, "finite")},
      {"model.boundary",
       [](ExperimentConfig& c, std::string_view v) -> std::string {
         if (v == "periodic") c.model.boundary = Boundary::periodic;
         else if (v == "open") c.model.boundary = Boundary::open;
         else return "expected 'periodic' or 'open'";
         return {};
       }},
      {"experiment.kind",
       [](ExperimentConfig& c, std::string_view v) -> std::string {
         const auto k = parse_kind(v);
         if (!k) return "expected one of dc, ac, energy, odlro, validate, oracle";
         c.experiment.kind = *k;
         return {};
       }},
      {"experiment.engine",
       [](ExperimentConfig& c, std::string_view v) -> std::string {
         if (v == "meanfield") c.experiment.engine = experiments::Engine::meanfield;
         else if (v == "exact") c.experiment.engine = experiments::Engine::exact;
         else return "expected 'meanfield' or 'exact'";
         return {};
       }},
      {"experiment.grid", int_key([](ExperimentConfig& c) -> int& { return c.experiment.grid; }, 3, 100000)},
      {"experiment.tolerance", real_key([](ExperimentConfig& c) -> double& { return c.experiment.tolerance; }, positive, "> 0")},
      {"experiment.voltage", real_key([](ExperimentConfig& c) -> double& { return c.experiment.voltage; }, any, "finite")},
      {"experiment.theta0", real_key([](ExperimentConfig& c) -> double& { return c.experiment.theta0; }, any, "finite")},
      {"experiment.duration", real_key([](ExperimentConfig& c) -> double& { return c.experiment.duration; }, non_negative, ">= 0")},
      {"experiment.sample_step", real_key([](ExperimentConfig& c) -> double& { return c.experiment.sample_step; }, non_negative, ">= 0")},
      {"experiment.integrator_tol", real_key([](ExperimentConfig& c) -> double& { return c.experiment.integrator_tol; }, positive, "> 0")},
      {"experiment.target_gap", real_key([](ExperimentConfig& c) -> double& { return c.experiment.target_gap; }, non_negative, ">= 0")},
      {"output.directory",
       [](ExperimentConfig& c, std::string_view v) -> std::string {
         if (v.empty()) return "must not be empty";
         c.output.directory = std::string(v);
         return {};
       }},
      {"output.format",
       [](ExperimentConfig& c, std::string_view v) -> std::string {
         const auto f = parse_format(v);
         if (!f) return "expected 'csv', 'json' or 'both'";
         c.output.format = *f;
         return {};
       }},
      {"output.seed",
       [](ExperimentConfig& c, std::string_view v) -> std::string {
         const auto x = to_integer(v);
         if (!x || *x < 0) return "expected a non-negative integer";
         c.output.seed = static_cast<std::uint64_t>(*x);
         return {};
       }},
  };
  return table;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : ValidationError("invalid config:" + join(errors)), errors_(std::move(errors)) {}

ExperimentConfig parse_config(std::string_view text, std::optional<ExperimentKind> kind) {
  ExperimentConfig c;
  std::vector<std::string> errors;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(where + "syntax error: expected 'section.key = value'");
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string_view::npos || value.empty()) {
      errors.push_back(where + "syntax error: expected 'section.key = value'");
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) {
      errors.push_back(where + "unknown key '" + std::string(key) + "'");
      continue;
    }
    if (const auto prev = seen.find(key); prev != seen.end()) {
      errors.push_back(where + "duplicate key '" + std::string(key) + "' (first on line " +
                       std::to_string(prev->second) + ")");
      continue;
    }
    seen.emplace(std::string(key), line_no);
    if (auto msg = it->second(c, value); !msg.empty()) {
      errors.push_back(where + std::string(key) + ": " + msg);
    }
  }

  const bool has_kind = seen.count("experiment.kind") > 0;
  if (kind) {
    if (has_kind && c.experiment.kind != *kind) {
      errors.push_back(std::string("experiment.kind: config says '") + to_string(c.experiment.kind) +
                       "' but the command runs '" + to_string(*kind) + "'");
    }
    c.experiment.kind = *kind;
  } else if (!has_kind) {
    errors.push_back("experiment.kind: required key missing");
  }
  try {
    c.model.validate();
  } catch (const ValidationError& e) {
    errors.push_back(std::string("model: ") + e.what());
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

ExperimentConfig load_config(const std::string& path, std::optional<ExperimentKind> kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), kind);
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os.precision(17);
  const auto& m = c.model;
  const auto& e = c.experiment;
  os << "model.L1 = " << m.L1 << "\nmodel.L2 = " << m.L2 << "\nmodel.t_hop = " << m.t_hop
     << "\nmodel.mu = " << m.mu << "\nmodel.g11 = " << m.g11 << "\nmodel.g22 = " << m.g22
     << "\nmodel.g12 = " << m.g12 << "\nmodel.charge_unit = " << m.charge_unit
     << "\nmodel.boundary = " << (m.boundary == Boundary::periodic ? "periodic" : "open")
     << "\nmodel.cross_hop = " << m.cross_hop << "\nexperiment.kind = " << to_string(e.kind)
     << "\nexperiment.engine = " << experiments::to_string(e.engine)
     << "\nexperiment.grid = " << e.grid << "\nexperiment.tolerance = " << e.tolerance
     << "\nexperiment.voltage = " << e.voltage << "\nexperiment.theta0 = " << e.theta0
     << "\nexperiment.duration = " << e.duration << "\nexperiment.sample_step = " << e.sample_step
     << "\nexperiment.integrator_tol = " << e.integrator_tol
     << "\nexperiment.target_gap = " << e.target_gap << "\noutput.directory = " << c.output.directory
     << "\noutput.format = " << to_string(c.output.format) << "\noutput.seed = " << c.output.seed
     << "\n";
  return os.str();
}

}  // namespace josephson::io
