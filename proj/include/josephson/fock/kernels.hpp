#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "josephson/fock/execution.hpp"

namespace josephson::fock {
class SparseOperator;
}

// Data-parallel inner loops. Each kernel has one entry point taking an
// Execution; the serial branch is the reference the OpenMP branch is
// tested and benchmarked against. Reductions sum fixed-size blocks in
// block order so results do not depend on the thread count.
namespace josephson::fock::kernels {

using complex = std::complex<double>;

inline constexpr std::size_t kReductionBlock = 4096;

// Sums f(i) over [0, n) in fixed blocks; the final pass is serial and in
// block order, which keeps parallel and serial results bit-identical.
template <typename T, typename F>
T blocked_sum(std::size_t n, F&& f, Execution exec) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<T> partial(blocks, T{});
  const auto run_block = [&](std::size_t b) {
    T acc{};
    const std::size_t end = std::min(n, (b + 1) * kReductionBlock);
    for (std::size_t i = b * kReductionBlock; i < end; ++i) acc += f(i);
    partial[b] = acc;
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
      run_block(static_cast<std::size_t>(b));
    }
  } else {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  }
  T total{};
  for (const auto& p : partial) total += p;
  return total;
}

using RowEntries = std::vector<std::pair<std::uint32_t, complex>>;

struct CsrParts {
  std::vector<std::size_t> row_offsets;
  std::vector<std::uint32_t> columns;
  std::vector<complex> values;
};

// Builds CSR storage row by row. fill_row(row, out) must leave `out` sorted
// by column with no duplicates and no zeros; `out` is cleared between rows.
CsrParts assemble_rows(std::size_t rows,
                       const std::function<void(std::size_t, RowEntries&)>& fill_row,
                       Execution exec);

// y = A x
void spmv(const SparseOperator& a, std::span<const complex> x, std::span<complex> y,
          Execution exec = Execution::parallel);

// y += c · A x
void spmv_accumulate(const SparseOperator& a, complex c, std::span<const complex> x,
                     std::span<complex> y, Execution exec = Execution::parallel);

// <x|A|x> without normalization checks.
complex quadratic_form(const SparseOperator& a, std::span<const complex> x,
                       Execution exec = Execution::parallel);

// <x|y>, conjugating x.
complex dot(std::span<const complex> x, std::span<const complex> y,
            Execution exec = Execution::parallel);

double norm(std::span<const complex> x, Execution exec = Execution::parallel);

}  // namespace josephson::fock::kernels
