#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "josephson/fock/execution.hpp"
#include "josephson/fock/sparse_operator.hpp"
#include "josephson/fock/state_vector.hpp"

namespace josephson::fock {

// H(t) = Σ_i f_i(t) A_i with hermitian A_i and real f_i. A term without a
// coefficient function is constant.
class TimeDependentHamiltonian {
 public:
  explicit TimeDependentHamiltonian(SparseOperator constant_part);

  void add_term(SparseOperator op, std::function<double(double)> coefficient = {});

  const FockBasis& basis() const { return terms_.front().op.basis(); }
  bool time_independent() const;

  // Throws ValidationError if any term is not hermitian within 1e-12
  // relative to its largest entry.
  void validate() const;

  // y = H(t) x
  void apply(double t, std::span<const complex> x, std::span<complex> y,
             Execution exec = Execution::parallel) const;

  // Sum of terms at time t as one matrix.
  SparseOperator at(double t) const;

 private:
  struct Term {
    SparseOperator op;
    std::function<double(double)> coefficient;
  };
  std::vector<Term> terms_;
};

struct EvolveOptions {
  // Local error budget per unit time for the state vector.
  double tol = 1e-10;
  int max_krylov = 40;
  double max_step = std::numeric_limits<double>::infinity();
  // Steps below this fraction of the grid span count as underflow.
  double min_step_fraction = 1e-12;
  Execution exec = Execution::parallel;
};

struct EvolveStats {
  long accepted_steps = 0;
  long rejected_steps = 0;
  long matvecs = 0;
  double max_norm_drift = 0.0;
};

using TrajectoryObserver = std::function<void(double t, const StateVector& v)>;

// Solves i d|v>/dt = H(t)|v> from t_grid.front() through each grid point in
// order, calling observe at every grid point (including the first).
// The grid must be strictly increasing. Each step applies the short-time
// propagator exp(-i dt H(t + dt/2)) through a Lanczos basis with full
// reorthogonalization; for time-dependent H the step size is additionally
// controlled by step doubling.
EvolveStats evolve(StateVector v, const TimeDependentHamiltonian& h,
                   std::span<const double> t_grid, const EvolveOptions& options,
                   const TrajectoryObserver& observe);

std::vector<StateVector> evolve_trajectory(const StateVector& v,
                                           const TimeDependentHamiltonian& h,
                                           std::span<const double> t_grid,
                                           const EvolveOptions& options = {});

// exp(-i t H)|v> by dense diagonalization. The exact reference path for
// dimension <= 2^12.
StateVector dense_propagate(const SparseOperator& h, const StateVector& v, double t);

}  // namespace josephson::fock
