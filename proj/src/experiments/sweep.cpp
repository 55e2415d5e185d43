#include "josephson/experiments/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "josephson/bcs/quasifree.hpp"
#include "josephson/errors.hpp"
#include "josephson/junction/hamiltonian.hpp"
#include "parallel.hpp"

namespace josephson::experiments {

using junction::JunctionSpec;
using junction::Region;

const char* to_string(Engine e) { return e == Engine::exact ? "exact" : "meanfield"; }

FitCoefficients fit_trig(std::span<const double> grid, std::span<const double> values,
                         bool include_sin) {
  const int cols = include_sin ? 3 : 2;
  if (grid.size() != values.size() || static_cast<int>(grid.size()) < cols) {
    throw ValidationError("fit_trig: need matching grid and values with at least " +
                          std::to_string(cols) + " points");
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd a(n, cols);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = std::cos(grid[i]);
    if (include_sin) a(i, 2) = std::sin(grid[i]);
    b(i) = values[i];
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  FitCoefficients fit;
  fit.constant = x(0);
  fit.cos = x(1);
  if (include_sin) fit.sin = x(2);
  return fit;
}

double evaluate_fit(const FitCoefficients& fit, double theta) {
  return fit.constant + fit.cos * std::cos(theta) + fit.sin * std::sin(theta);
}

std::vector<double> SweepResult::real_values() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [](const complex& z) { return z.real(); });
  return out;
}

double SweepResult::recompute_residual() const {
  double r = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r = std::max(r, std::abs(values[i].real() - evaluate_fit(fit, grid[i])));
  }
  return r;
}

std::vector<double> default_theta_grid(int n) {
  if (n < 1) throw ValidationError("theta grid needs at least one point");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[i] = 2 * std::numbers::pi * i / n;
  return grid;
}

namespace {

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("theta grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw ValidationError("theta grid has a non-finite entry");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ValidationError("theta grid must be strictly increasing");
    }
  }
}

// Everything needed to evaluate one observable as a function of Δθ.
class PhaseEvaluator {
 public:
  PhaseEvaluator(const JunctionSpec& spec, Engine engine, const fock::Polynomial& observable,
                 bool exact_current)
      : spec_(spec),
        engine_(engine),
        s1_(bcs::region_solution(spec, Region::one)),
        s2_(bcs::region_solution(spec, Region::two)),
        poly_(observable) {
    if (engine == Engine::exact) {
      basis_.emplace(spec.n_modes());
      const auto split = junction::build_hamiltonian(spec, *basis_);
      if (exact_current) {
        op_ = junction::current_op(split, junction::charge_op(spec, *basis_, Region::one)).op;
      } else {
        op_ = split.h12;
      }
    }
  }

  complex operator()(double theta) const {
    const auto s1 = s1_.with_phase(theta);
    if (engine_ == Engine::meanfield) {
      return bcs::mean_field_expectation(bcs::covariance(s1, s2_, spec_), poly_,
                                         Execution::serial);
    }
    const auto v = bcs::embed_product_state(s1, s2_, spec_, *basis_);
    return fock::expectation(*op_, v, Execution::serial);
  }

 private:
  JunctionSpec spec_;
  Engine engine_;
  bcs::BcsSolution s1_;
  bcs::BcsSolution s2_;
  fock::Polynomial poly_;
  std::optional<fock::FockBasis> basis_;
  std::optional<fock::SparseOperator> op_;
};

SweepResult run_sweep(const JunctionSpec& spec, std::span<const double> grid, Engine engine,
                      double tolerance, bool current) {
  spec.validate();
  require_grid(grid);
  const auto poly = current ? junction::current_terms(spec)
                            : junction::hamiltonian_terms(spec).h12;
  const PhaseEvaluator eval(spec, engine, poly, current);

  SweepResult r;
  r.observable = current ? "current" : "junction_energy";
  r.grid.assign(grid.begin(), grid.end());
  r.values.resize(grid.size());
  detail::parallel_for(grid.size(), [&](std::size_t i) { r.values[i] = eval(grid[i]); });
  for (const auto& z : r.values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ImplementationDefectError("sweep produced a non-finite value");
    }
    r.max_imag = std::max(r.max_imag, std::abs(z.imag()));
  }
  r.metadata = {spec, engine, tolerance, 0};
  if (grid.size() >= (current ? 3u : 2u)) {
    const auto re = r.real_values();
    r.fit = fit_trig(r.grid, re, current);
    r.residual = r.recompute_residual();
  } else {
    r.residual = std::numeric_limits<double>::infinity();
  }
  return r;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

}  // namespace

SweepResult dc_sweep(const JunctionSpec& spec, std::span<const double> theta_grid, Engine engine,
                     double tolerance) {
  auto r = run_sweep(spec, theta_grid, engine, tolerance, true);
  std::vector<std::string> violations;
  if (!(r.residual < tolerance)) {
    violations.push_back("sinusoid fit residual " + format_double(r.residual));
  }
  if (!(std::abs(r.fit.constant) < tolerance)) {
    violations.push_back("constant coefficient " + format_double(r.fit.constant));
  }
  if (!(std::abs(r.fit.cos) < tolerance)) {
    violations.push_back("cos coefficient " + format_double(r.fit.cos));
  }
  if (!(r.max_imag < tolerance)) violations.push_back("imaginary part " + format_double(r.max_imag));
  r.law_holds = violations.empty();
  for (std::size_t i = 0; i < violations.size(); ++i) {
    r.law_report += (i ? "; " : "dc law violated: ") + violations[i];
  }
  return r;
}

SweepResult energy_sweep(const JunctionSpec& spec, std::span<const double> theta_grid,
                         Engine engine, double tolerance) {
  auto r = run_sweep(spec, theta_grid, engine, tolerance, false);
  std::vector<std::string> violations;
  if (!(r.residual < tolerance)) {
    violations.push_back("cosine fit residual " + format_double(r.residual));
  }
  if (spec.g12 != 0.0 && !(r.fit.cos * spec.g12 < 0.0)) {
    violations.push_back("cos coefficient " + format_double(r.fit.cos) +
                         " does not have the sign opposite to g12");
  }
  if (!(r.max_imag < tolerance)) violations.push_back("imaginary part " + format_double(r.max_imag));
  r.law_holds = violations.empty();
  for (std::size_t i = 0; i < violations.size(); ++i) {
    r.law_report += (i ? "; " : "energy law violated: ") + violations[i];
  }
  return r;
}

GaugeReport gauge_check(const JunctionSpec& spec, double phi, std::span<const double> theta_grid) {
  spec.validate();
  require_grid(theta_grid);
  const fock::FockBasis basis(spec.n_modes());
  const auto split = junction::build_hamiltonian(spec, basis);
  const auto j = junction::current_op(split, junction::charge_op(spec, basis, Region::one)).op;
  const auto rotation = junction::region_phase_rotation(spec, basis, phi);
  const auto s1 = bcs::region_solution(spec, Region::one);
  const auto s2 = bcs::region_solution(spec, Region::two);

  GaugeReport r;
  r.phi = phi;
  r.grid.assign(theta_grid.begin(), theta_grid.end());
  r.rotated.resize(theta_grid.size());
  r.shifted.resize(theta_grid.size());
  detail::parallel_for(theta_grid.size(), [&](std::size_t i) {
    const double theta = theta_grid[i];
    const auto v = bcs::embed_product_state(s1.with_phase(theta), s2, spec, basis);
    const auto turned = fock::apply(rotation, v, Execution::serial);
    r.rotated[i] = fock::expectation(j, turned, Execution::serial).real();
    const auto w = bcs::embed_product_state(s1.with_phase(theta + 2 * phi), s2, spec, basis);
    r.shifted[i] = fock::expectation(j, w, Execution::serial).real();
  });
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    r.max_discrepancy = std::max(r.max_discrepancy, std::abs(r.rotated[i] - r.shifted[i]));
  }
  return r;
}

OracleReport oracle_check(const JunctionSpec& spec, std::span<const double> theta_grid,
                          double tolerance) {
  const auto mf = dc_sweep(spec, theta_grid, Engine::meanfield, tolerance);
  const auto ex = dc_sweep(spec, theta_grid, Engine::exact, tolerance);
  OracleReport r;
  r.grid = mf.grid;
  r.meanfield = mf.real_values();
  r.exact = ex.real_values();
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    r.max_discrepancy = std::max(r.max_discrepancy, std::abs(mf.values[i] - ex.values[i]));
  }
  if (!(r.max_discrepancy <= tolerance)) {
    throw ImplementationDefectError("mean-field and exact currents disagree by " +
                                    format_double(r.max_discrepancy) + " (tolerance " +
                                    format_double(tolerance) + ")");
  }
  return r;
}

}  // namespace josephson::experiments
