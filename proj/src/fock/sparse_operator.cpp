#include "josephson/fock/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "josephson/errors.hpp"
#include "josephson/fock/kernels.hpp"

namespace josephson::fock {

namespace {

constexpr std::size_t kDenseLimit = std::size_t{1} << 12;

void require_same_basis(const SparseOperator& a, const SparseOperator& b, const char* what) {
  if (!(a.basis() == b.basis())) {
    throw StructuralError(std::string(what) + ": operands act on bases with " +
                          std::to_string(a.basis().n_modes()) + " and " +
                          std::to_string(b.basis().n_modes()) + " modes");
  }
}

// Sorts by column, sums duplicates and drops exact zeros.
void canonicalize(kernels::RowEntries& row) {
  std::sort(row.begin(), row.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < row.size();) {
    const auto col = row[i].first;
    complex sum = 0.0;
    for (; i < row.size() && row[i].first == col; ++i) sum += row[i].second;
    if (sum != complex{0.0, 0.0}) row[out++] = {col, sum};
  }
  row.resize(out);
}

SparseOperator from_parts(const FockBasis& basis, kernels::CsrParts parts, bool hermitian) {
  return SparseOperator(basis, std::move(parts.row_offsets), std::move(parts.columns),
                        std::move(parts.values), hermitian);
}

// Row-wise merge of s_a·A + s_b·B.
SparseOperator linear_combination(const SparseOperator& a, complex sa, const SparseOperator& b,
                                  complex sb, bool hermitian) {
  require_same_basis(a, b, "add");
  const auto fill = [&](std::size_t r, kernels::RowEntries& out) {
    const auto ao = a.row_offsets();
    const auto bo = b.row_offsets();
    std::size_t i = ao[r], j = bo[r];
    const std::size_t ie = ao[r + 1], je = bo[r + 1];
    while (i < ie || j < je) {
      const auto ca = i < ie ? a.columns()[i] : SparseOperator::Index(-1);
      const auto cb = j < je ? b.columns()[j] : SparseOperator::Index(-1);
      complex v = 0.0;
      SparseOperator::Index c;
      if (ca == cb) {
        c = ca;
        v = sa * a.values()[i++] + sb * b.values()[j++];
      } else if (ca < cb) {
        c = ca;
        v = sa * a.values()[i++];
      } else {
        c = cb;
        v = sb * b.values()[j++];
      }
      if (v != complex{0.0, 0.0}) out.emplace_back(c, v);
    }
  };
  return from_parts(a.basis(), kernels::assemble_rows(a.dimension(), fill, Execution::parallel),
                    hermitian);
}

bool is_real(complex c) { return c.imag() == 0.0; }

}  // namespace

SparseOperator::SparseOperator(FockBasis basis)
    : basis_(basis), row_offsets_(basis.dimension() + 1, 0), hermitian_(true) {}

SparseOperator::SparseOperator(FockBasis basis, std::vector<std::size_t> row_offsets,
                               std::vector<Index> columns, std::vector<complex> values,
                               bool hermitian)
    : basis_(basis),
      row_offsets_(std::move(row_offsets)),
      columns_(std::move(columns)),
      values_(std::move(values)),
      hermitian_(hermitian) {
  if (row_offsets_.size() != basis_.dimension() + 1 || columns_.size() != values_.size() ||
      row_offsets_.back() != values_.size()) {
    throw StructuralError("inconsistent CSR storage for a " +
                          std::to_string(basis_.dimension()) + "-dimensional operator");
  }
}

SparseOperator SparseOperator::identity(FockBasis basis) {
  std::vector<double> ones(basis.dimension(), 1.0);
  return diagonal(basis, ones);
}

SparseOperator SparseOperator::diagonal(FockBasis basis, std::span<const double> diag) {
  if (diag.size() != basis.dimension()) {
    throw StructuralError("diagonal length does not match the basis dimension");
  }
  std::vector<std::size_t> offsets{0};
  std::vector<Index> cols;
  std::vector<complex> vals;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i] != 0.0) {
      cols.push_back(static_cast<Index>(i));
      vals.emplace_back(diag[i], 0.0);
    }
    offsets.push_back(cols.size());
  }
  return SparseOperator(basis, std::move(offsets), std::move(cols), std::move(vals), true);
}

SparseOperator SparseOperator::from_entries(FockBasis basis, std::vector<Entry> entries,
                                            bool hermitian) {
  const std::size_t dim = basis.dimension();
  for (const auto& e : entries) {
    if (e.row >= dim || e.col >= dim) {
      throw IndexError("entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                       ") outside a " + std::to_string(dim) + "-dimensional space");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.row < y.row; });
  std::vector<std::size_t> starts(dim + 1, 0);
  for (const auto& e : entries) ++starts[e.row + 1];
  for (std::size_t r = 0; r < dim; ++r) starts[r + 1] += starts[r];
  const auto fill = [&](std::size_t r, kernels::RowEntries& out) {
    for (std::size_t k = starts[r]; k < starts[r + 1]; ++k) {
      out.emplace_back(static_cast<Index>(entries[k].col), entries[k].value);
    }
    canonicalize(out);
  };
  return from_parts(basis, kernels::assemble_rows(dim, fill, Execution::serial), hermitian);
}

SparseOperator SparseOperator::from_polynomial(FockBasis basis, const Polynomial& poly,
                                               bool hermitian, Execution exec) {
  for (const auto& term : poly.terms()) {
    for (const auto& op : term.ops) {
      if (op.mode < 0 || op.mode >= basis.n_modes()) {
        throw IndexError("mode " + std::to_string(op.mode) + " outside [0, " +
                         std::to_string(basis.n_modes()) + ")");
      }
    }
  }
  // <r|M|c> = <c|M†|r>, and M† maps |r> to at most one basis state.
  std::vector<Monomial> adjoints;
  adjoints.reserve(poly.size());
  for (const auto& term : poly.terms()) adjoints.push_back(fock::adjoint(term.ops));
  const auto fill = [&](std::size_t r, kernels::RowEntries& out) {
    for (std::size_t t = 0; t < adjoints.size(); ++t) {
      const auto hit = apply_monomial(adjoints[t], static_cast<FockState>(r));
      if (hit) out.emplace_back(hit->state, poly.terms()[t].coefficient * hit->sign);
    }
    canonicalize(out);
  };
  return from_parts(basis, kernels::assemble_rows(basis.dimension(), fill, exec), hermitian);
}

complex SparseOperator::at(std::size_t row, std::size_t col) const {
  if (row >= dimension() || col >= dimension()) {
    throw IndexError("matrix index (" + std::to_string(row) + ", " + std::to_string(col) +
                     ") out of range");
  }
  const auto first = columns_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row]);
  const auto last = columns_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row + 1]);
  const auto it = std::lower_bound(first, last, static_cast<Index>(col));
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - columns_.begin())];
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseOperator::hermiticity_defect() const {
  double m = 0.0;
  for (std::size_t r = 0; r < dimension(); ++r) {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      m = std::max(m, std::abs(values_[k] - std::conj(at(columns_[k], r))));
    }
  }
  return m;
}

SparseOperator SparseOperator::marked_hermitian(double tol) const {
  const double defect = hermiticity_defect();
  if (defect > tol) {
    throw ValidationError("operator is not hermitian: ‖A − A†‖_max = " +
                          std::to_string(defect));
  }
  SparseOperator out = *this;
  out.hermitian_ = true;
  return out;
}

SparseOperator SparseOperator::adjoint() const {
  const std::size_t dim = dimension();
  std::vector<std::size_t> offsets(dim + 1, 0);
  for (const auto c : columns_) ++offsets[c + 1];
  for (std::size_t r = 0; r < dim; ++r) offsets[r + 1] += offsets[r];
  std::vector<Index> cols(values_.size());
  std::vector<complex> vals(values_.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      const std::size_t dst = cursor[columns_[k]]++;
      cols[dst] = static_cast<Index>(r);
      vals[dst] = std::conj(values_[k]);
    }
  }
  return SparseOperator(basis_, std::move(offsets), std::move(cols), std::move(vals),
                        hermitian_);
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
  if (dimension() > kDenseLimit) {
    throw CapacityError("dense conversion limited to dimension " +
                        std::to_string(kDenseLimit) + ", got " +
                        std::to_string(dimension()));
  }
  const auto n = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < dimension(); ++r) {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      m(static_cast<Eigen::Index>(r), columns_[k]) = values_[k];
    }
  }
  return m;
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  return linear_combination(a, 1.0, b, 1.0, a.hermitian_flag() && b.hermitian_flag());
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
  return linear_combination(a, 1.0, b, -1.0, a.hermitian_flag() && b.hermitian_flag());
}

SparseOperator operator*(complex c, const SparseOperator& a) {
  std::vector<complex> vals(a.values().begin(), a.values().end());
  for (auto& v : vals) v *= c;
  std::vector<std::size_t> offsets(a.row_offsets().begin(), a.row_offsets().end());
  std::vector<SparseOperator::Index> cols(a.columns().begin(), a.columns().end());
  if (c == complex{0.0, 0.0}) return SparseOperator(a.basis());
  return SparseOperator(a.basis(), std::move(offsets), std::move(cols), std::move(vals),
                        a.hermitian_flag() && is_real(c));
}

SparseOperator multiply(const SparseOperator& a, const SparseOperator& b, Execution exec) {
  require_same_basis(a, b, "mul");
  const auto fill = [&](std::size_t r, kernels::RowEntries& out) {
    const auto ao = a.row_offsets();
    const auto bo = b.row_offsets();
    for (std::size_t i = ao[r]; i < ao[r + 1]; ++i) {
      const auto k = a.columns()[i];
      const complex av = a.values()[i];
      for (std::size_t j = bo[k]; j < bo[k + 1]; ++j) {
        out.emplace_back(b.columns()[j], av * b.values()[j]);
      }
    }
    canonicalize(out);
  };
  return from_parts(a.basis(), kernels::assemble_rows(a.dimension(), fill, exec), false);
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  return multiply(a, b, Execution::parallel);
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  return a * b - b * a;
}

SparseOperator anticommutator(const SparseOperator& a, const SparseOperator& b) {
  return a * b + b * a;
}

double max_abs_difference(const SparseOperator& a, const SparseOperator& b) {
  return (a - b).max_abs();
}

SparseOperator op_algebra(const SparseOperator& a, const SparseOperator& b, AlgebraOp op,
                          complex factor) {
  switch (op) {
    case AlgebraOp::add:
      return a + b;
    case AlgebraOp::mul:
      return a * b;
    case AlgebraOp::scale:
      return factor * a;
    case AlgebraOp::adjoint:
      return a.adjoint();
    case AlgebraOp::commutator:
      return commutator(a, b);
    case AlgebraOp::anticommutator:
      return anticommutator(a, b);
  }
  throw StructuralError("unknown algebra operation");
}

SparseOperator ladder_op(const FockBasis& basis, int mode, LadderKind kind) {
  if (mode < 0 || mode >= basis.n_modes()) {
    throw IndexError("mode " + std::to_string(mode) + " outside [0, " +
                     std::to_string(basis.n_modes()) + ")");
  }
  Polynomial p;
  p.add(1.0, {LadderOp{mode, kind}});
  return SparseOperator::from_polynomial(basis, p);
}

SparseOperator number_op(const FockBasis& basis, int mode) {
  return (ladder_op(basis, mode, LadderKind::creation) *
          ladder_op(basis, mode, LadderKind::annihilation))
      .marked_hermitian();
}

}  // namespace josephson::fock
