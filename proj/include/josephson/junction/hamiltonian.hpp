#pragma once

#include "josephson/fock/basis.hpp"
#include "josephson/fock/ladder.hpp"
#include "josephson/fock/sparse_operator.hpp"
#include "josephson/junction/spec.hpp"

namespace josephson::junction {

using fock::FockBasis;
using fock::Polynomial;
using fock::SparseOperator;

// P(Λ_r) = Σ_{x ∈ Λ_r} a_{x↓} a_{x↑}
Polynomial pair_annihilator(const JunctionSpec& spec, Region r);
Polynomial pair_creator(const JunctionSpec& spec, Region r);
// P†(Λ_a) P(Λ_b) expanded over sites.
Polynomial pair_transfer(const JunctionSpec& spec, Region to, Region from);

// The model as ladder polynomials:
//   H_r  = −t Σ_<xy>σ (a†_xσ a_yσ + h.c.) − μ Σ n_xσ − (g_rr/|Λ|) P†(Λ_r) P(Λ_r)
//   H_12 = −(g12/|Λ|) (P†(Λ1) P(Λ2) + h.c.)  [− cross_hop Σ_σ (a†_{W1σ} a_{W2σ} + h.c.)]
struct HamiltonianTerms {
  Polynomial h1;
  Polynomial h2;
  Polynomial h12;

  Polynomial total() const { return h1 + h2 + h12; }
};

HamiltonianTerms hamiltonian_terms(const JunctionSpec& spec);

struct HamiltonianSplit {
  SparseOperator total;
  SparseOperator h1;
  SparseOperator h2;
  SparseOperator h12;
};

// total is assembled from the full polynomial, independently of the parts.
HamiltonianSplit build_hamiltonian(const JunctionSpec& spec, const FockBasis& basis);

// Q(Λ) = −|e| Σ_{x∈Λ,σ} n_xσ as a diagonal operator.
SparseOperator charge_op(const JunctionSpec& spec, const FockBasis& basis, Region r);

// Number of particles of region r in basis state s.
int region_occupation(const JunctionSpec& spec, fock::FockState s, Region r);

struct CurrentOperator {
  SparseOperator op;  // [i H_total, Q1]
  // ‖[i H_total, Q1] − [i H12, Q1]‖_max
  double reduction_residual = 0.0;
};

// Throws ModelInconsistencyError when the reduction residual exceeds 1e-10.
CurrentOperator current_op(const HamiltonianSplit& split, const SparseOperator& q1);

// [i H, Q1] as a polynomial: each monomial m of H that changes the
// region-1 particle number by Δ_m contributes i |e| Δ_m c_m m. Terms of H1
// and H2 have Δ_m = 0 and drop out.
Polynomial current_terms(const JunctionSpec& spec);

struct ConservationReport {
  double total = 0.0;    // ‖[H_total, Q(Λ)]‖_max
  double region1 = 0.0;  // ‖[H1, Q(Λ1)]‖_max
  double region2 = 0.0;  // ‖[H2, Q(Λ2)]‖_max
  double max() const;
};

ConservationReport verify_conservation(const HamiltonianSplit& split, const JunctionSpec& spec,
                                       const FockBasis& basis);

// Diagonal exp(i φ N(Λ1)).
SparseOperator region_phase_rotation(const JunctionSpec& spec, const FockBasis& basis,
                                     double phi);

// Basis sized for the spec; throws StructuralError on mismatch.
void require_basis_for(const JunctionSpec& spec, const FockBasis& basis);

}  // namespace josephson::junction
