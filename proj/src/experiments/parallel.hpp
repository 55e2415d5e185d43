#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace josephson::experiments::detail {

// Runs fn(i) for i in [0, n) across OpenMP threads. Results must be written
// by index; the first exception (lowest index) is rethrown after the loop.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace josephson::experiments::detail
