// Serial reference vs OpenMP kernels on the junction Hamiltonian.
// Arg(0) = serial, Arg(1) = parallel; the state argument is the region size.
#include <benchmark/benchmark.h>

#include <random>

#include "josephson/bcs/quasifree.hpp"
#include "josephson/fock/kernels.hpp"
#include "josephson/junction/hamiltonian.hpp"

using namespace josephson;

namespace {

junction::JunctionSpec spec_for(int sites_per_region) {
  junction::JunctionSpec s;
  s.L1 = sites_per_region;
  s.L2 = sites_per_region;
  s.mu = -0.5;
  s.g11 = 4.0;
  s.g22 = 4.0;
  return s;
}

Execution mode(const benchmark::State& state) {
  return state.range(1) ? Execution::parallel : Execution::serial;
}

std::vector<fock::complex> random_vector(std::size_t n) {
  std::mt19937 rng(7);
  std::normal_distribution<double> d;
  std::vector<fock::complex> v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

void BM_FromPolynomial(benchmark::State& state) {
  const auto spec = spec_for(static_cast<int>(state.range(0)));
  const fock::FockBasis basis(spec.n_modes());
  const auto h = junction::hamiltonian_terms(spec).total();
  for (auto _ : state) {
    auto op = fock::SparseOperator::from_polynomial(basis, h, true, mode(state));
    benchmark::DoNotOptimize(op);
  }
}

void BM_Spmv(benchmark::State& state) {
  const auto spec = spec_for(static_cast<int>(state.range(0)));
  const fock::FockBasis basis(spec.n_modes());
  const auto h = junction::build_hamiltonian(spec, basis).total;
  const auto x = random_vector(basis.dimension());
  std::vector<fock::complex> y(x.size());
  for (auto _ : state) {
    fock::kernels::spmv(h, x, y, mode(state));
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(h.nnz()));
}

void BM_QuadraticForm(benchmark::State& state) {
  const auto spec = spec_for(static_cast<int>(state.range(0)));
  const fock::FockBasis basis(spec.n_modes());
  const auto h = junction::build_hamiltonian(spec, basis).total;
  const auto x = random_vector(basis.dimension());
  for (auto _ : state) benchmark::DoNotOptimize(fock::kernels::quadratic_form(h, x, mode(state)));
}

void BM_MeanFieldCurrent(benchmark::State& state) {
  const auto spec = spec_for(static_cast<int>(state.range(0)));
  const auto s1 = bcs::region_solution(spec, junction::Region::one, 0.7);
  const auto s2 = bcs::region_solution(spec, junction::Region::two);
  const auto cov = bcs::covariance(s1, s2, spec);
  const auto j = junction::current_terms(spec);
  for (auto _ : state) benchmark::DoNotOptimize(bcs::mean_field_expectation(cov, j, mode(state)));
}

}  // namespace

BENCHMARK(BM_FromPolynomial)->ArgsProduct({{3, 4}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Spmv)->ArgsProduct({{3, 4, 5}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_QuadraticForm)->ArgsProduct({{3, 4, 5}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MeanFieldCurrent)->ArgsProduct({{8, 32}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
