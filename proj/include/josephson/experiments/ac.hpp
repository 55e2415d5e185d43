#pragma once

#include <vector>

#include "josephson/fock/evolve.hpp"
#include "josephson/junction/spec.hpp"

namespace josephson::experiments {

struct AcOptions {
  double voltage = 0.25;
  double theta0 = 0.0;
  double duration = 0.0;  // 0 picks 16 periods of 2|e|V
  double tol = 1e-10;     // integrator tolerance
  // Sample spacing; 0 picks min(duration/512, 0.5).
  double sample_step = 0.0;
  // Half-spacing of the 5-point stencil used for dQ1/dt.
  double stencil_step = 1e-2;
  int max_krylov = 40;
  double min_periods = 8.0;
};

struct AcResult {
  AcOptions options;
  std::vector<double> times;
  std::vector<double> current;         // <[i H_total, Q1]>(t)
  std::vector<double> charge_region1;  // <Q1>(t)
  std::vector<double> ehrenfest;       // |dQ1/dt − J| at each sample
  double max_ehrenfest = 0.0;
  // Hann-windowed DFT of J − mean(J) at ω_k = k · bin_width, k < N/2.
  std::vector<double> omega;
  std::vector<double> power;
  double bin_width = 0.0;
  double peak_omega = 0.0;      // strongest k ≥ 1
  double expected_omega = 0.0;  // 2|e||V|
  double current_spread = 0.0;  // max J − min J
  bool within_bin = false;      // |peak − expected| ≤ bin_width (V ≠ 0)
  fock::EvolveStats stats;
};

// Evolves embed_product_state(θ0, 0) under H_total + V·Q1. Exact engine only.
// Throws ValidationError when V ≠ 0 and the duration covers fewer than
// min_periods periods of 2|e|V, CapacityError when the Fock space is over
// the cap, and IntegrationError from the integrator.
AcResult ac_run(const junction::JunctionSpec& spec, const AcOptions& options);

}  // namespace josephson::experiments
