#include "josephson/fock/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "josephson/errors.hpp"
#include "josephson/fock/sparse_operator.hpp"

namespace josephson {

int worker_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace josephson

namespace josephson::fock::kernels {

namespace {

void check_length(const SparseOperator& a, std::size_t n, const char* what) {
  if (a.dimension() != n) {
    throw StructuralError(std::string(what) + ": vector length " + std::to_string(n) +
                          " does not match operator dimension " +
                          std::to_string(a.dimension()));
  }
}

complex row_times(const SparseOperator& a, std::size_t r, std::span<const complex> x) {
  const auto offsets = a.row_offsets();
  const auto cols = a.columns();
  const auto vals = a.values();
  complex acc = 0.0;
  for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) acc += vals[k] * x[cols[k]];
  return acc;
}

}  // namespace

CsrParts assemble_rows(std::size_t rows,
                       const std::function<void(std::size_t, RowEntries&)>& fill_row,
                       Execution exec) {
  const std::size_t blocks =
      exec == Execution::parallel
          ? std::max<std::size_t>(1, std::min<std::size_t>(rows, 4 * worker_count()))
          : 1;
  std::vector<CsrParts> pieces(blocks);
  const auto run_block = [&](std::size_t b) {
    const std::size_t begin = rows * b / blocks;
    const std::size_t end = rows * (b + 1) / blocks;
    CsrParts& piece = pieces[b];
    piece.row_offsets.reserve(end - begin + 1);
    piece.row_offsets.push_back(0);
    RowEntries scratch;
    for (std::size_t r = begin; r < end; ++r) {
      scratch.clear();
      fill_row(r, scratch);
      for (const auto& [c, v] : scratch) {
        piece.columns.push_back(c);
        piece.values.push_back(v);
      }
      piece.row_offsets.push_back(piece.columns.size());
    }
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
      run_block(static_cast<std::size_t>(b));
    }
  } else {
    run_block(0);
  }

  CsrParts out;
  std::size_t total = 0;
  for (const auto& p : pieces) total += p.columns.size();
  out.row_offsets.reserve(rows + 1);
  out.columns.reserve(total);
  out.values.reserve(total);
  out.row_offsets.push_back(0);
  for (const auto& p : pieces) {
    const std::size_t base = out.columns.size();
    for (std::size_t i = 1; i < p.row_offsets.size(); ++i) {
      out.row_offsets.push_back(base + p.row_offsets[i]);
    }
    out.columns.insert(out.columns.end(), p.columns.begin(), p.columns.end());
    out.values.insert(out.values.end(), p.values.begin(), p.values.end());
  }
  return out;
}

void spmv(const SparseOperator& a, std::span<const complex> x, std::span<complex> y,
          Execution exec) {
  check_length(a, x.size(), "spmv");
  check_length(a, y.size(), "spmv");
  const auto n = static_cast<std::ptrdiff_t>(a.dimension());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) y[r] = row_times(a, r, x);
  } else {
    for (std::ptrdiff_t r = 0; r < n; ++r) y[r] = row_times(a, r, x);
  }
}

void spmv_accumulate(const SparseOperator& a, complex c, std::span<const complex> x,
                     std::span<complex> y, Execution exec) {
  check_length(a, x.size(), "spmv_accumulate");
  check_length(a, y.size(), "spmv_accumulate");
  const auto n = static_cast<std::ptrdiff_t>(a.dimension());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) y[r] += c * row_times(a, r, x);
  } else {
    for (std::ptrdiff_t r = 0; r < n; ++r) y[r] += c * row_times(a, r, x);
  }
}

complex quadratic_form(const SparseOperator& a, std::span<const complex> x, Execution exec) {
  check_length(a, x.size(), "quadratic_form");
  return blocked_sum<complex>(
      a.dimension(), [&](std::size_t r) { return std::conj(x[r]) * row_times(a, r, x); },
      exec);
}

complex dot(std::span<const complex> x, std::span<const complex> y, Execution exec) {
  if (x.size() != y.size()) throw StructuralError("dot: vector lengths differ");
  return blocked_sum<complex>(
      x.size(), [&](std::size_t i) { return std::conj(x[i]) * y[i]; }, exec);
}

double norm(std::span<const complex> x, Execution exec) {
  return std::sqrt(
      blocked_sum<double>(x.size(), [&](std::size_t i) { return std::norm(x[i]); }, exec));
}

}  // namespace josephson::fock::kernels
