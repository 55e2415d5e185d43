#pragma once

#include <complex>
#include <span>
#include <vector>

#include "josephson/fock/basis.hpp"
#include "josephson/fock/execution.hpp"
#include "josephson/fock/ladder.hpp"
#include "josephson/fock/sparse_operator.hpp"

namespace josephson::fock {

// Complex amplitudes over a Fock basis. Construction does not force unit
// norm so that intermediate vectors (A|v>, unnormalized superpositions) can
// be represented; consumers that need a state call require_normalized().
class StateVector {
 public:
  StateVector(FockBasis basis, std::vector<complex> amplitudes);

  static StateVector basis_state(FockBasis basis, FockState occupied);
  static StateVector vacuum(FockBasis basis) { return basis_state(basis, 0); }
  // Rescales to unit norm; throws ValidationError for the zero vector.
  static StateVector normalized(FockBasis basis, std::vector<complex> amplitudes);

  const FockBasis& basis() const { return basis_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const complex> amplitudes() const { return amplitudes_; }
  std::span<complex> amplitudes() { return amplitudes_; }
  complex operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm(Execution exec = Execution::parallel) const;
  // Throws ValidationError when | ‖v‖ − 1 | exceeds tol.
  void require_normalized(double tol = 1e-8) const;

 private:
  FockBasis basis_;
  std::vector<complex> amplitudes_;
};

// <v|A|v>; v must be normalized within 1e-8.
complex expectation(const SparseOperator& a, const StateVector& v,
                    Execution exec = Execution::parallel);

// A|v> without normalization.
StateVector apply(const SparseOperator& a, const StateVector& v,
                  Execution exec = Execution::parallel);
StateVector apply(const Polynomial& p, const StateVector& v,
                  Execution exec = Execution::parallel);

// <v|M|v> for a single monomial, computed directly on the amplitudes.
complex monomial_expectation(std::span<const LadderOp> ops, const StateVector& v,
                             Execution exec = Execution::parallel);

complex polynomial_expectation(const Polynomial& p, const StateVector& v,
                               Execution exec = Execution::parallel);

}  // namespace josephson::fock
