#include <cmath>
#include <numbers>

#include "doctest.h"
#include "josephson/errors.hpp"
#include "josephson/fock/evolve.hpp"
#include "josephson/fock/state_vector.hpp"
#include "josephson/junction/hamiltonian.hpp"
#include "support/random_specs.hpp"

using namespace josephson;
using namespace josephson::junction;
using fock::complex;
using fock::StateVector;

namespace {

constexpr fock::FockState kPair1 = 0b0011;  // a†_{0↑} a†_{0↓}|0>
constexpr fock::FockState kPair2 = 0b1100;  // a†_{1↑} a†_{1↓}|0>

JunctionSpec bare_two_site(double g12) {
  auto s = testing::two_site_spec(g12);
  s.g11 = 0.0;
  s.g22 = 0.0;
  return s;
}

}  // namespace

TEST_CASE("spec validation") {
  JunctionSpec s;
  s.L1 = 0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = {};
  s.g11 = -1;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = {};
  s.g12 = -0.1;
  CHECK_NOTHROW(s.validate());
  CHECK(s.volume_norm() == 2.0);
  CHECK(s.n_modes() == 4);
}

TEST_CASE("hopping matrix bonds") {
  CHECK(hopping_matrix(1, 1.0, Boundary::periodic).isZero());
  const auto two = hopping_matrix(2, 1.0, Boundary::periodic);
  CHECK(two(0, 1) == -1.0);
  const auto ring = hopping_matrix(4, 0.5, Boundary::periodic);
  CHECK(ring(0, 3) == -0.5);
  CHECK(hopping_matrix(4, 0.5, Boundary::open)(0, 3) == 0.0);
}

TEST_CASE("build_hamiltonian: two-site hand enumeration") {
  const auto spec = bare_two_site(1.0);
  const FockBasis basis(spec.n_modes());
  const auto split = build_hamiltonian(spec, basis);
  CHECK(split.total.nnz() == 2);
  CHECK(split.total.at(kPair1, kPair2) == complex(-0.5, 0.0));
  CHECK(split.total.at(kPair2, kPair1) == complex(-0.5, 0.0));
  CHECK(split.h1.is_zero());
  CHECK(split.h2.is_zero());
}

TEST_CASE("build_hamiltonian: g12 = 0 gives a zero junction term") {
  auto spec = testing::random_spec(3);
  spec.g12 = 0.0;
  spec.cross_hop = 0.0;
  const FockBasis basis(spec.n_modes());
  CHECK(build_hamiltonian(spec, basis).h12.is_zero());
}

TEST_CASE("build_hamiltonian: split invariants on seeded specs") {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    const auto spec = testing::random_spec(seed, 5);
    const FockBasis basis(spec.n_modes());
    const auto split = build_hamiltonian(spec, basis);
    CHECK(fock::max_abs_difference(split.total, split.h1 + split.h2 + split.h12) < 1e-12);
    CHECK(split.total.hermiticity_defect() < 1e-12);
    CHECK(split.h1.hermiticity_defect() < 1e-12);
    CHECK(split.h12.hermiticity_defect() < 1e-12);
    // H1 commutes with every ladder operator of region 2 up to the fermion
    // parity string, so it commutes with every region-2 number operator.
    for (int x = spec.L1; x < spec.n_sites(); ++x) {
      const auto n = fock::number_op(basis, mode_index(x, Spin::up));
      CHECK(fock::commutator(split.h1, n).max_abs() < 1e-12);
      CHECK(fock::commutator(split.h1, fock::ladder_op(basis, mode_index(x, Spin::down),
                                                        fock::LadderKind::annihilation) *
                                           fock::ladder_op(basis, mode_index(x, Spin::up),
                                                           fock::LadderKind::annihilation))
                .max_abs() < 1e-12);
    }
  }
  CHECK_THROWS_AS(build_hamiltonian(JunctionSpec{}, FockBasis(6)), StructuralError);
}

TEST_CASE("charge operator") {
  JunctionSpec spec;
  spec.L1 = 2;
  spec.L2 = 1;
  const FockBasis basis(spec.n_modes());
  const auto q = charge_op(spec, basis, Region::both);
  CHECK(fock::expectation(q, StateVector::vacuum(basis)) == complex(0.0, 0.0));
  const auto full = StateVector::basis_state(basis, static_cast<fock::FockState>(basis.dimension() - 1));
  CHECK(fock::expectation(q, full).real() == doctest::Approx(-2.0 * (spec.L1 + spec.L2)));
  CHECK(fock::expectation(charge_op(spec, basis, Region::one), full).real() == doctest::Approx(-4.0));
}

TEST_CASE("charge generates the U(1) gauge action on region-1 ladder operators") {
  auto spec = testing::two_site_spec();
  spec.charge_unit = 1.5;
  const FockBasis basis(spec.n_modes());
  const auto q1 = charge_op(spec, basis, Region::one);
  const complex i(0.0, 1.0);
  for (const Spin s : {Spin::up, Spin::down}) {
    const auto a = fock::ladder_op(basis, mode_index(0, s), fock::LadderKind::annihilation);
    const auto c = a.adjoint();
    // [iQ, a] = i|e| a and [iQ, a†] = −i|e| a†
    CHECK(fock::max_abs_difference(fock::commutator(i * q1, a), (i * spec.charge_unit) * a) < 1e-12);
    CHECK(fock::max_abs_difference(fock::commutator(q1, c), complex(-spec.charge_unit, 0.0) * c) < 1e-12);
    // Region-2 operators are untouched.
    const auto b = fock::ladder_op(basis, mode_index(1, s), fock::LadderKind::annihilation);
    CHECK(fock::commutator(q1, b).is_zero());
  }
}

TEST_CASE("current operator") {
  SUBCASE("g12 = 0 gives zero current") {
    auto spec = testing::random_spec(17);
    spec.g12 = 0.0;
    spec.cross_hop = 0.0;
    const FockBasis basis(spec.n_modes());
    const auto split = build_hamiltonian(spec, basis);
    const auto j = current_op(split, charge_op(spec, basis, Region::one));
    CHECK(j.op.is_zero());
  }
  SUBCASE("two-site closed form") {
    const auto spec = bare_two_site(0.3);
    const FockBasis basis(spec.n_modes());
    const auto split = build_hamiltonian(spec, basis);
    const auto j = current_op(split, charge_op(spec, basis, Region::one));
    // −i|e| g12 (2/|Λ|) (P1†P2 − P2†P1)
    const complex pref(0.0, -spec.charge_unit * spec.g12 * 2.0 / spec.volume_norm());
    const auto closed = SparseOperator::from_polynomial(
        basis, pair_transfer(spec, Region::one, Region::two).scaled(pref) +
                   pair_transfer(spec, Region::two, Region::one).scaled(-pref));
    CHECK(fock::max_abs_difference(j.op, closed) < 1e-15);
    CHECK(j.op.at(kPair1, kPair2) == complex(0.0, -0.3));
    CHECK(j.op.at(kPair2, kPair1) == complex(0.0, 0.3));
    CHECK(j.op.nnz() == 2);
  }
  SUBCASE("hermitian and equal to the polynomial route on seeded specs") {
    for (std::uint32_t seed = 100; seed < 110; ++seed) {
      const auto spec = testing::random_spec(seed, 5);
      const FockBasis basis(spec.n_modes());
      const auto split = build_hamiltonian(spec, basis);
      const auto j = current_op(split, charge_op(spec, basis, Region::one));
      CHECK(j.reduction_residual < 1e-12);
      CHECK(j.op.hermiticity_defect() < 1e-12);
      const auto poly = SparseOperator::from_polynomial(basis, current_terms(spec));
      CHECK(fock::max_abs_difference(j.op, poly) < 1e-12);
    }
  }
  SUBCASE("a charge-moving term outside H12 is reported") {
    const auto spec = bare_two_site(0.2);
    const FockBasis basis(spec.n_modes());
    auto split = build_hamiltonian(spec, basis);
    // Move the junction term into H1: H_total unchanged, split inconsistent.
    split.h1 = split.h12;
    split.h12 = SparseOperator(basis);
    CHECK_THROWS_AS(current_op(split, charge_op(spec, basis, Region::one)),
                    ModelInconsistencyError);
  }
}

TEST_CASE("verify_conservation") {
  for (std::uint32_t seed = 0; seed < 30; ++seed) {
    auto spec = testing::random_spec(seed, 5);
    const FockBasis basis(spec.n_modes());
    const auto report = verify_conservation(build_hamiltonian(spec, basis), spec, basis);
    CHECK(report.max() < 1e-12);
  }
  auto spec = testing::random_spec(7, 5);
  spec.g12 = 0.0;
  spec.cross_hop = 0.0;
  const FockBasis basis(spec.n_modes());
  const auto split = build_hamiltonian(spec, basis);
  CHECK(fock::commutator(split.total, charge_op(spec, basis, Region::one)).max_abs() < 1e-12);
}

TEST_CASE("gauge covariance of the junction term") {
  const auto spec = bare_two_site(0.7);
  const FockBasis basis(spec.n_modes());
  const auto split = build_hamiltonian(spec, basis);
  for (const double phi : {0.3, std::numbers::pi / 4, 2.0}) {
    const auto u = region_phase_rotation(spec, basis, phi);
    const auto rotated = u.adjoint() * split.h12 * u;
    const double c = -spec.g12 / spec.volume_norm();
    const auto expected = SparseOperator::from_polynomial(
        basis,
        pair_transfer(spec, Region::one, Region::two).scaled(c * std::exp(complex(0, -2 * phi))) +
            pair_transfer(spec, Region::two, Region::one).scaled(c * std::exp(complex(0, 2 * phi))));
    CHECK(fock::max_abs_difference(rotated, expected) < 1e-12);
  }
}

TEST_CASE("Ehrenfest relation along an evolved two-site trajectory") {
  auto spec = testing::two_site_spec(0.4);
  spec.mu = 0.3;
  spec.g11 = 0.8;
  spec.g22 = 1.1;
  const FockBasis basis(spec.n_modes());
  const auto split = build_hamiltonian(spec, basis);
  const auto q1 = charge_op(spec, basis, Region::one);
  const auto j = current_op(split, q1);

  const double theta = 1.1;
  std::vector<complex> amps(basis.dimension(), 0.0);
  amps[0] = 0.5;
  amps[kPair1] = 0.5 * std::exp(complex(0, theta));
  amps[kPair2] = 0.5;
  amps[kPair1 | kPair2] = 0.5 * std::exp(complex(0, theta));
  const StateVector psi(basis, amps);

  fock::EvolveOptions opts;
  opts.tol = 1e-10;
  const double h = 0.01;
  std::vector<double> grid;
  for (int k = 0; k <= 400; ++k) grid.push_back(k * h);
  const auto traj = fock::evolve_trajectory(psi, fock::TimeDependentHamiltonian{split.total}, grid, opts);

  std::vector<double> q(grid.size()), cur(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    q[k] = fock::expectation(q1, traj[k]).real();
    cur[k] = fock::expectation(j.op, traj[k]).real();
    const auto exact = fock::dense_propagate(split.total, psi, grid[k]);
    double err = 0.0;
    for (std::size_t i = 0; i < basis.dimension(); ++i) err = std::max(err, std::abs(exact[i] - traj[k][i]));
    CHECK(err < 1e-8);
  }
  double worst = 0.0;
  for (std::size_t k = 2; k + 2 < grid.size(); ++k) {
    const double dq = (-q[k + 2] + 8 * q[k + 1] - 8 * q[k - 1] + q[k - 2]) / (12 * h);
    worst = std::max(worst, std::abs(dq - cur[k]));
  }
  CHECK(worst < 100 * opts.tol);
  // The current is not trivially zero along this trajectory.
  CHECK(std::abs(cur[0]) > 1e-2);
}

TEST_CASE("current_terms beyond the Fock-space cap") {
  // 128 modes: the polynomial route must not depend on basis-state bit masks.
  JunctionSpec spec;
  spec.L1 = 32;
  spec.L2 = 32;
  const auto j = current_terms(spec);
  // P1†P2 and P2†P1 expand to 2 · 32 · 32 monomials.
  CHECK(j.size() == 2 * 32 * 32);
  for (const auto& t : j.terms()) CHECK(std::abs(std::abs(t.coefficient) - 2 * 0.1 / 64) < 1e-15);
}
