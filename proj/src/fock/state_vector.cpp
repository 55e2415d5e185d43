#include "josephson/fock/state_vector.hpp"

#include <cmath>
#include <string>

#include "josephson/errors.hpp"
#include "josephson/fock/kernels.hpp"

namespace josephson::fock {

namespace {

void require_same_basis(const FockBasis& a, const FockBasis& b, const char* what) {
  if (!(a == b)) {
    throw StructuralError(std::string(what) + ": operator and state live on different bases");
  }
}

}  // namespace

StateVector::StateVector(FockBasis basis, std::vector<complex> amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != basis_.dimension()) {
    throw StructuralError("state vector of length " + std::to_string(amplitudes_.size()) +
                          " on a basis of dimension " + std::to_string(basis_.dimension()));
  }
}

StateVector StateVector::basis_state(FockBasis basis, FockState occupied) {
  if (occupied >= basis.dimension()) {
    throw IndexError("basis state " + std::to_string(occupied) + " outside the basis");
  }
  std::vector<complex> amps(basis.dimension(), 0.0);
  amps[occupied] = 1.0;
  return StateVector(basis, std::move(amps));
}

StateVector StateVector::normalized(FockBasis basis, std::vector<complex> amplitudes) {
  StateVector v(basis, std::move(amplitudes));
  const double n = v.norm();
  if (n == 0.0) throw ValidationError("cannot normalize the zero vector");
  for (auto& a : v.amplitudes_) a /= n;
  return v;
}

double StateVector::norm(Execution exec) const { return kernels::norm(amplitudes_, exec); }

void StateVector::require_normalized(double tol) const {
  const double n = norm();
  if (std::abs(n - 1.0) > tol) {
    throw ValidationError("state is not normalized: ‖v‖ = " + std::to_string(n));
  }
}

complex expectation(const SparseOperator& a, const StateVector& v, Execution exec) {
  require_same_basis(a.basis(), v.basis(), "expectation");
  v.require_normalized();
  return kernels::quadratic_form(a, v.amplitudes(), exec);
}

StateVector apply(const SparseOperator& a, const StateVector& v, Execution exec) {
  require_same_basis(a.basis(), v.basis(), "apply");
  std::vector<complex> out(v.dimension());
  kernels::spmv(a, v.amplitudes(), out, exec);
  return StateVector(v.basis(), std::move(out));
}

StateVector apply(const Polynomial& p, const StateVector& v, Execution exec) {
  std::vector<complex> out(v.dimension(), 0.0);
  const auto amps = v.amplitudes();
  // Serial over terms; each monomial is a signed permutation of basis states,
  // so the inner loop over columns writes disjoint rows.
  for (const auto& term : p.terms()) {
    const auto n = static_cast<std::ptrdiff_t>(v.dimension());
    const auto body = [&](std::ptrdiff_t c) {
      if (amps[c] == complex{0.0, 0.0}) return;
      const auto hit = apply_monomial(term.ops, static_cast<FockState>(c));
      if (hit) out[hit->state] += term.coefficient * hit->sign * amps[c];
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t c = 0; c < n; ++c) body(c);
    } else {
      for (std::ptrdiff_t c = 0; c < n; ++c) body(c);
    }
  }
  return StateVector(v.basis(), std::move(out));
}

complex monomial_expectation(std::span<const LadderOp> ops, const StateVector& v,
                             Execution exec) {
  for (const auto& op : ops) {
    if (op.mode < 0 || op.mode >= v.basis().n_modes()) {
      throw IndexError("mode " + std::to_string(op.mode) + " outside the basis");
    }
  }
  const auto amps = v.amplitudes();
  return kernels::blocked_sum<complex>(
      v.dimension(),
      [&](std::size_t c) -> complex {
        if (amps[c] == complex{0.0, 0.0}) return 0.0;
        const auto hit = apply_monomial(ops, static_cast<FockState>(c));
        if (!hit) return 0.0;
        return std::conj(amps[hit->state]) * hit->sign * amps[c];
      },
      exec);
}

complex polynomial_expectation(const Polynomial& p, const StateVector& v, Execution exec) {
  complex total = 0.0;
  for (const auto& term : p.terms()) {
    total += term.coefficient * monomial_expectation(term.ops, v, exec);
  }
  return total;
}

}  // namespace josephson::fock
