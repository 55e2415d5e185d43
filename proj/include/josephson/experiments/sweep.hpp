#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "josephson/fock/ladder.hpp"
#include "josephson/junction/spec.hpp"

namespace josephson::experiments {

using fock::complex;

enum class Engine { meanfield, exact };

const char* to_string(Engine e);

struct FitCoefficients {
  double constant = 0.0;
  double cos = 0.0;
  double sin = 0.0;
};

// Ordinary least squares of values(θ) onto {1, cos θ, sin θ}; with
// include_sin = false the sin column is dropped and sin stays 0.
FitCoefficients fit_trig(std::span<const double> grid, std::span<const double> values,
                         bool include_sin = true);

double evaluate_fit(const FitCoefficients& fit, double theta);

struct SweepMetadata {
  junction::JunctionSpec spec;
  Engine engine = Engine::meanfield;
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
};

struct SweepResult {
  std::string observable;
  std::vector<double> grid;
  std::vector<complex> values;
  FitCoefficients fit;
  double residual = 0.0;         // max_i |Re value_i − fit(grid_i)|
  double max_imag = 0.0;         // max_i |Im value_i|; expectations of hermitian operators
  bool law_holds = false;
  std::string law_report;        // empty when the law holds
  SweepMetadata metadata;

  std::vector<double> real_values() const;
  // Residual recomputed from grid, values and fit.
  double recompute_residual() const;
};

// n equally spaced points on [0, 2π).
std::vector<double> default_theta_grid(int n = 17);

// J(Δθ) = <[i H, Q1]> in the product state with phases (Δθ, 0), fitted onto
// {1, cos, sin}. The law holds when the constant and cos coefficients and
// the residual are below metadata.tolerance. Grid points run in parallel.
SweepResult dc_sweep(const junction::JunctionSpec& spec, std::span<const double> theta_grid,
                     Engine engine, double tolerance = 1e-10);

// <H12>(Δθ) fitted onto {1, cos}. The law holds when the residual is below
// tolerance and the cos coefficient has the sign opposite to g12 (energy
// minimal at Δθ = 0 for g12 > 0).
SweepResult energy_sweep(const junction::JunctionSpec& spec, std::span<const double> theta_grid,
                         Engine engine, double tolerance = 1e-10);

struct GaugeReport {
  double phi = 0.0;
  std::vector<double> grid;
  std::vector<double> rotated;  // J in exp(iφN1)|BCS(Δθ, 0)>
  std::vector<double> shifted;  // J in |BCS(Δθ + 2φ, 0)>
  double max_discrepancy = 0.0;
};

GaugeReport gauge_check(const junction::JunctionSpec& spec, double phi,
                        std::span<const double> theta_grid);

struct OracleReport {
  std::vector<double> grid;
  std::vector<double> meanfield;
  std::vector<double> exact;
  double max_discrepancy = 0.0;
};

// Mean-field (Wick) and exact Fock evaluation of J on the same states.
// Throws ImplementationDefectError when they differ by more than tolerance.
OracleReport oracle_check(const junction::JunctionSpec& spec, std::span<const double> theta_grid,
                          double tolerance = 1e-10);

}  // namespace josephson::experiments
