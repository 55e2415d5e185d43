#pragma once

#include <vector>

#include <Eigen/Dense>

#include "josephson/junction/spec.hpp"

namespace josephson::bcs {

// Mean-field solution of one translation-invariant region. Orbitals are the
// real orthonormal eigenvectors of the region's hopping matrix; each orbital
// k is paired with its own spin partner, Π_k (u_k + v_k e^{iθ} c†_{k↑} c†_{k↓})|0>.
struct BcsSolution {
  int region = 1;
  int sites = 1;
  double gap = 0.0;    // Δ >= 0
  double phase = 0.0;  // θ in [0, 2π)
  double mu = 0.0;
  double coupling = 0.0;  // g in Δ = (g/M) Σ_k Δ / (2 E_k)
  std::vector<double> energies;  // ε_k
  Eigen::MatrixXd orbitals;      // column k holds φ_k(x)
  std::vector<double> u;
  std::vector<double> v;
  double residual = 0.0;  // |Δ − (g/M) Σ_k Δ / (2 E_k)|
  int iterations = 0;

  // Same amplitudes, phase wrapped into [0, 2π).
  BcsSolution with_phase(double theta) const;
  // |<a_{x↓} a_{x↑}>| = Σ_k φ_k(x)² u_k v_k
  double pair_amplitude(int site) const;
  // Mean occupation per site, Σ_k 2 v_k² / M.
  double filling() const;
};

struct GapOptions {
  double tol = 1e-12;
  int max_iterations = 400;
  junction::Boundary boundary = junction::Boundary::periodic;
};

// Bisection on the scalar gap function over [tol, g·M]; returns the Δ = 0
// branch when no positive root exists there. Throws ValidationError on bad
// input and SolverError when the iteration cap is hit.
BcsSolution solve_gap(int sites, double t_hop, double mu, double g, const GapOptions& options = {});

// Coupling g that produces the requested gap (inverse of the gap equation).
double coupling_for_gap(int sites, double t_hop, double mu, double gap,
                        junction::Boundary boundary = junction::Boundary::periodic);

// Region r of a junction. The region's pair interaction −(g_rr/|Λ|) P†P gives
// the self-consistency Δ = (g_rr/|Λ|) Σ_k Δ/(2E_k), i.e. solve_gap with
// g = g_rr · M_r / |Λ|.
BcsSolution region_solution(const junction::JunctionSpec& spec, junction::Region r,
                            double phase = 0.0, double tol = 1e-12);

}  // namespace josephson::bcs
