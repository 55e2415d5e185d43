#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "josephson/fock/basis.hpp"
#include "josephson/fock/execution.hpp"
#include "josephson/fock/ladder.hpp"

namespace josephson::fock {

struct Entry {
  std::size_t row;
  std::size_t col;
  complex value;
};

// Linear operator on a Fock space, stored as compressed sparse rows with
// sorted column indices and no explicit zeros. Immutable once built.
class SparseOperator {
 public:
  using Index = std::uint32_t;

  explicit SparseOperator(FockBasis basis);  // zero operator
  SparseOperator(FockBasis basis, std::vector<std::size_t> row_offsets,
                 std::vector<Index> columns, std::vector<complex> values,
                 bool hermitian = false);

  static SparseOperator identity(FockBasis basis);
  static SparseOperator diagonal(FockBasis basis, std::span<const double> diag);
  // Duplicate (row, col) entries are summed.
  static SparseOperator from_entries(FockBasis basis, std::vector<Entry> entries,
                                     bool hermitian = false);
  static SparseOperator from_polynomial(FockBasis basis, const Polynomial& poly,
                                        bool hermitian = false,
                                        Execution exec = Execution::parallel);

  const FockBasis& basis() const { return basis_; }
  std::size_t dimension() const { return basis_.dimension(); }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const Index> columns() const { return columns_; }
  std::span<const complex> values() const { return values_; }

  complex at(std::size_t row, std::size_t col) const;

  // ‖A‖_max, the largest entry modulus.
  double max_abs() const;
  bool is_zero() const { return values_.empty(); }
  // ‖A − A†‖_max.
  double hermiticity_defect() const;

  // The flag is bookkeeping carried through algebra; hermiticity_defect()
  // is the check.
  bool hermitian_flag() const { return hermitian_; }
  // Sets the flag after verifying the defect is below tol.
  SparseOperator marked_hermitian(double tol = 1e-12) const;

  SparseOperator adjoint() const;

  Eigen::MatrixXcd to_dense() const;

 private:
  FockBasis basis_;
  std::vector<std::size_t> row_offsets_;
  std::vector<Index> columns_;
  std::vector<complex> values_;
  bool hermitian_ = false;
};

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator*(complex c, const SparseOperator& a);

SparseOperator multiply(const SparseOperator& a, const SparseOperator& b, Execution exec);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);
SparseOperator anticommutator(const SparseOperator& a, const SparseOperator& b);

// ‖A − B‖_max.
double max_abs_difference(const SparseOperator& a, const SparseOperator& b);

enum class AlgebraOp { add, mul, scale, adjoint, commutator, anticommutator };

// Dispatcher over the binary/unary algebra. scale uses `factor` on `a`;
// adjoint ignores `b`.
SparseOperator op_algebra(const SparseOperator& a, const SparseOperator& b, AlgebraOp op,
                          complex factor = 1.0);

SparseOperator ladder_op(const FockBasis& basis, int mode, LadderKind kind);
// n_j = a†_j a_j.
SparseOperator number_op(const FockBasis& basis, int mode);

}  // namespace josephson::fock
