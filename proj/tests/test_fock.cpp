#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "josephson/errors.hpp"
#include "josephson/fock/basis.hpp"
#include "josephson/fock/evolve.hpp"
#include "josephson/fock/kernels.hpp"
#include "josephson/fock/sparse_operator.hpp"
#include "josephson/fock/state_vector.hpp"

using namespace josephson;
using namespace josephson::fock;

namespace {

SparseOperator cdag(const FockBasis& b, int m) { return ladder_op(b, m, LadderKind::creation); }
SparseOperator ann(const FockBasis& b, int m) { return ladder_op(b, m, LadderKind::annihilation); }

// Random sparse operator with a handful of entries per row.
SparseOperator random_operator(const FockBasis& basis, std::mt19937& rng, bool hermitian) {
  std::uniform_int_distribution<std::size_t> pick(0, basis.dimension() - 1);
  std::normal_distribution<double> normal;
  std::vector<Entry> entries;
  for (std::size_t r = 0; r < basis.dimension(); ++r) {
    for (int k = 0; k < 3; ++k) {
      const std::size_t c = pick(rng);
      const complex v(normal(rng), normal(rng));
      entries.push_back({r, c, v});
      if (hermitian) entries.push_back({c, r, std::conj(v)});
    }
  }
  return SparseOperator::from_entries(basis, std::move(entries), hermitian);
}

StateVector random_state(const FockBasis& basis, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  std::vector<complex> amps(basis.dimension());
  for (auto& a : amps) a = {normal(rng), normal(rng)};
  return StateVector::normalized(basis, std::move(amps));
}

}  // namespace

TEST_CASE("build_basis dimensions and cap") {
  CHECK(build_basis(1).dimension() == 2);
  CHECK(build_basis(4).dimension() == 16);
  CHECK_THROWS_AS(build_basis(25), CapacityError);
  CHECK_THROWS_AS(build_basis(0), ValidationError);
  CHECK_THROWS_AS(build_basis(6, 5), CapacityError);
  CHECK(build_basis(24).dimension() == (std::size_t{1} << 24));
}

TEST_CASE("ladder operators follow the Jordan-Wigner sign convention") {
  SUBCASE("single mode creation on vacuum") {
    const FockBasis b(1);
    const auto v = apply(cdag(b, 0), StateVector::vacuum(b));
    CHECK(v[1] == complex(1.0, 0.0));
    CHECK(v[0] == complex(0.0, 0.0));
  }
  SUBCASE("a†_1 on |occupied_0, empty_1> picks up a minus sign") {
    const FockBasis b(2);
    const auto v = apply(cdag(b, 1), StateVector::basis_state(b, 0b01));
    CHECK(v[0b11] == complex(-1.0, 0.0));
  }
  SUBCASE("one nonzero per column where defined, adjoint pairs") {
    const FockBasis b(3);
    for (int m = 0; m < 3; ++m) {
      const auto c = cdag(b, m);
      CHECK(c.nnz() == b.dimension() / 2);
      CHECK(max_abs_difference(c.adjoint(), ann(b, m)) == 0.0);
    }
  }
  SUBCASE("mode out of range") {
    const FockBasis b(2);
    CHECK_THROWS_AS(cdag(b, 2), IndexError);
    CHECK_THROWS_AS(ann(b, -1), IndexError);
  }
}

TEST_CASE("canonical anticommutation relations for n_modes = 5") {
  const FockBasis b(5);
  const auto id = SparseOperator::identity(b);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const auto ac = anticommutator(ann(b, i), cdag(b, j));
      if (i == j) {
        CHECK(max_abs_difference(ac, id) < 1e-12);
      } else {
        CHECK(ac.max_abs() < 1e-12);
      }
      CHECK(anticommutator(ann(b, i), ann(b, j)).max_abs() < 1e-12);
    }
  }
}

TEST_CASE("op_algebra examples") {
  const FockBasis b(2);
  std::mt19937 rng(11);
  const auto a = random_operator(b, rng, false);
  CHECK(op_algebra(a, a, AlgebraOp::commutator).is_zero());
  CHECK(max_abs_difference(op_algebra(ann(b, 0), cdag(b, 0), AlgebraOp::anticommutator),
                           SparseOperator::identity(b)) == 0.0);
  CHECK(op_algebra(ann(b, 0), cdag(b, 1), AlgebraOp::anticommutator).is_zero());
  CHECK_THROWS_AS(op_algebra(a, SparseOperator::identity(FockBasis(3)), AlgebraOp::add),
                  StructuralError);
  const auto scaled = op_algebra(a, a, AlgebraOp::scale, complex(0.0, 2.0));
  CHECK(std::abs(scaled.at(0, a.columns()[0]) - complex(0.0, 2.0) * a.values()[0]) < 1e-15);
}

TEST_CASE("algebra properties on random operators") {
  std::mt19937 rng(2024);
  const FockBasis b(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_operator(b, rng, false);
    const auto c = random_operator(b, rng, false);
    CHECK(max_abs_difference(a.adjoint().adjoint(), a) == 0.0);
    CHECK(max_abs_difference(commutator(a, c), -1.0 * commutator(c, a)) < 1e-12);
    // (AB)† = B†A†
    CHECK(max_abs_difference((a * c).adjoint(), c.adjoint() * a.adjoint()) < 1e-12);
    const auto h = random_operator(b, rng, true);
    CHECK(h.hermiticity_defect() < 1e-12);
    CHECK(h.hermitian_flag());
  }
}

TEST_CASE("dense conversion agrees with sparse products") {
  std::mt19937 rng(5);
  const FockBasis b(4);
  const auto a = random_operator(b, rng, false);
  const auto c = random_operator(b, rng, false);
  const Eigen::MatrixXcd expected = a.to_dense() * c.to_dense();
  CHECK((expected - (a * c).to_dense()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  std::mt19937 rng(77);
  const FockBasis b(10);
  const auto h = random_operator(b, rng, true);
  const auto v = random_state(b, rng);
  std::vector<complex> ys(b.dimension()), yp(b.dimension());
  kernels::spmv(h, v.amplitudes(), ys, Execution::serial);
  kernels::spmv(h, v.amplitudes(), yp, Execution::parallel);
  CHECK(ys == yp);
  CHECK(kernels::quadratic_form(h, v.amplitudes(), Execution::serial) ==
        kernels::quadratic_form(h, v.amplitudes(), Execution::parallel));
  const auto m_serial = multiply(h, h, Execution::serial);
  const auto m_parallel = multiply(h, h, Execution::parallel);
  CHECK(max_abs_difference(m_serial, m_parallel) == 0.0);

  Polynomial p;
  p.add(0.5, {create(3), annihilate(7)});
  p.add(complex(0.0, 1.0), {create(1), create(2), annihilate(9), annihilate(4)});
  CHECK(max_abs_difference(SparseOperator::from_polynomial(b, p, false, Execution::serial),
                           SparseOperator::from_polynomial(b, p, false, Execution::parallel)) ==
        0.0);
}

TEST_CASE("expectation values") {
  const FockBasis b(2);
  std::mt19937 rng(3);
  const auto v = random_state(b, rng);
  CHECK(std::abs(expectation(SparseOperator::identity(b), v) - 1.0) < 1e-12);
  CHECK(expectation(number_op(b, 0), StateVector::vacuum(b)) == complex(0.0, 0.0));

  // (u + v a†_0 a†_1)|0> with u = v = 1/√2; a†_0 a†_1|00> = +|11>.
  const double s = 1.0 / std::sqrt(2.0);
  const StateVector bcs(b, {s, 0.0, 0.0, s});
  CHECK(std::abs(expectation(number_op(b, 0), bcs) - 0.5) < 1e-12);

  const auto h = random_operator(b, rng, true);
  CHECK(std::abs(expectation(h, v).imag()) < 1e-12);

  CHECK_THROWS_AS(expectation(number_op(b, 0), StateVector(b, {1.0, 1.0, 0.0, 0.0})),
                  ValidationError);
  CHECK_THROWS_AS(expectation(number_op(FockBasis(3), 0), bcs), StructuralError);
}

TEST_CASE("monomial expectation matches the operator route") {
  std::mt19937 rng(8);
  const FockBasis b(6);
  const auto v = random_state(b, rng);
  const Monomial m{create(4), create(1), annihilate(0), annihilate(5)};
  Polynomial p;
  p.add(1.0, m);
  const auto op = SparseOperator::from_polynomial(b, p);
  const auto manual = cdag(b, 4) * cdag(b, 1) * ann(b, 0) * ann(b, 5);
  CHECK(max_abs_difference(op, manual) < 1e-15);
  CHECK(std::abs(monomial_expectation(m, v) - expectation(op, v)) < 1e-12);
}

TEST_CASE("evolve: closed forms") {
  SUBCASE("H = 0 keeps the state") {
    const FockBasis b(3);
    std::mt19937 rng(1);
    const auto v = random_state(b, rng);
    const TimeDependentHamiltonian h{SparseOperator(b)};
    const std::vector<double> grid{0.0, 0.5, 2.0};
    const auto traj = evolve_trajectory(v, h, grid);
    for (const auto& s : traj) {
      for (std::size_t i = 0; i < b.dimension(); ++i) CHECK(std::abs(s[i] - v[i]) < 1e-14);
    }
  }
  SUBCASE("H = ω n_0 rotates |1> by e^{-iωt}") {
    const FockBasis b(1);
    const TimeDependentHamiltonian h{number_op(b, 0)};
    const std::vector<double> grid{0.0, std::numbers::pi};
    EvolveOptions opts;
    opts.tol = 1e-10;
    const auto traj = evolve_trajectory(StateVector::basis_state(b, 1), h, grid, opts);
    CHECK(std::abs(traj.back()[1] - complex(-1.0, 0.0)) < opts.tol);
  }
  SUBCASE("time-dependent coefficient integrates the phase") {
    // H(t) = cos(t) n_0  =>  phase exp(-i sin t)
    const FockBasis b(1);
    TimeDependentHamiltonian h{SparseOperator(b)};
    h.add_term(number_op(b, 0), [](double t) { return std::cos(t); });
    const std::vector<double> grid{0.0, 1.0, 2.5};
    EvolveOptions opts;
    opts.tol = 1e-9;
    const auto traj = evolve_trajectory(StateVector::basis_state(b, 1), h, grid, opts);
    CHECK(std::abs(traj[1][1] - std::exp(complex(0.0, -std::sin(1.0)))) < 1e-7);
    CHECK(std::abs(traj[2][1] - std::exp(complex(0.0, -std::sin(2.5)))) < 1e-7);
  }
}

TEST_CASE("evolve: invariants against the dense propagator") {
  std::mt19937 rng(99);
  const FockBasis b(6);
  const auto hop = random_operator(b, rng, true);
  const auto v = random_state(b, rng);
  const TimeDependentHamiltonian h{hop};
  EvolveOptions opts;
  opts.tol = 1e-10;
  const std::vector<double> grid{0.0, 0.3, 1.0, 2.0};
  const auto traj = evolve_trajectory(v, h, grid, opts);
  const double e0 = expectation(hop, v).real();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(std::abs(traj[k].norm() - 1.0) < opts.tol * std::max(1.0, grid[k]));
    CHECK(std::abs(expectation(hop, traj[k]).real() - e0) < 1e-9);
    const auto exact = dense_propagate(hop, v, grid[k]);
    double err = 0.0;
    for (std::size_t i = 0; i < b.dimension(); ++i) err = std::max(err, std::abs(exact[i] - traj[k][i]));
    CHECK(err < 1e-8);
  }

  // Forward then backward with −H returns to the start.
  const TimeDependentHamiltonian back{-1.0 * hop};
  const std::vector<double> back_grid{0.0, 2.0};
  const auto returned = evolve_trajectory(traj.back(), back, back_grid, opts);
  double err = 0.0;
  for (std::size_t i = 0; i < b.dimension(); ++i) err = std::max(err, std::abs(returned.back()[i] - v[i]));
  CHECK(err < 10 * opts.tol * 2.0);
}

TEST_CASE("evolve: validation and failure paths") {
  const FockBasis b(2);
  std::mt19937 rng(4);
  const auto v = random_state(b, rng);
  const auto nonherm = cdag(b, 0);
  const std::vector<double> grid{0.0, 1.0};
  CHECK_THROWS_AS(evolve_trajectory(v, TimeDependentHamiltonian{nonherm}, grid), ValidationError);
  EvolveOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(evolve_trajectory(v, TimeDependentHamiltonian{number_op(b, 0)}, grid, bad),
                  ValidationError);
  const std::vector<double> decreasing{1.0, 0.0};
  CHECK_THROWS_AS(evolve_trajectory(v, TimeDependentHamiltonian{number_op(b, 0)}, decreasing),
                  ValidationError);
  // A Krylov space of dimension 2 cannot resolve a large step of a stiff H;
  // combined with a tiny underflow threshold floor this must fail loudly.
  EvolveOptions starved;
  starved.tol = 1e-300;
  starved.max_krylov = 2;
  starved.min_step_fraction = 1e-3;
  const auto stiff = random_operator(FockBasis(4), rng, true);
  CHECK_THROWS_AS(
      evolve_trajectory(random_state(FockBasis(4), rng), TimeDependentHamiltonian{stiff}, grid,
                        starved),
      IntegrationError);
}
