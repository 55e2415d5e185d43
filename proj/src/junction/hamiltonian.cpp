#include "josephson/junction/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "josephson/errors.hpp"

namespace josephson::junction {

using fock::annihilate;
using fock::complex;
using fock::create;

namespace {

constexpr double kReductionTolerance = 1e-10;

fock::FockState region_mask(const JunctionSpec& spec, Region r) {
  fock::FockState mask = 0;
  const int first = r == Region::two ? spec.L1 : 0;
  const int count = spec.sites_in(r);
  for (int x = first; x < first + count; ++x) {
    mask |= fock::FockState{1} << mode_index(x, Spin::up);
    mask |= fock::FockState{1} << mode_index(x, Spin::down);
  }
  return mask;
}

void add_region(Polynomial& h, const JunctionSpec& spec, Region r, double g) {
  const int first = spec.first_site(r);
  const int m = spec.sites_in(r);
  const Eigen::MatrixXd hop = hopping_matrix(m, spec.t_hop, spec.boundary);
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      if (hop(x, y) == 0.0) continue;
      for (const Spin s : {Spin::up, Spin::down}) {
        h.add(hop(x, y), {create(mode_index(first + x, s)), annihilate(mode_index(first + y, s))});
      }
    }
  }
  if (spec.mu != 0.0) {
    for (int x = first; x < first + m; ++x) {
      for (const Spin s : {Spin::up, Spin::down}) {
        h.add(-spec.mu, {create(mode_index(x, s)), annihilate(mode_index(x, s))});
      }
    }
  }
  if (g != 0.0) h += pair_transfer(spec, r, r).scaled(-g / spec.volume_norm());
}

}  // namespace

void require_basis_for(const JunctionSpec& spec, const FockBasis& basis) {
  if (basis.n_modes() != spec.n_modes()) {
    throw StructuralError("basis has " + std::to_string(basis.n_modes()) +
                          " modes but the junction needs " + std::to_string(spec.n_modes()));
  }
}

Polynomial pair_annihilator(const JunctionSpec& spec, Region r) {
  Polynomial p;
  const int first = spec.first_site(r);
  for (int x = first; x < first + spec.sites_in(r); ++x) {
    p.add(1.0, {annihilate(mode_index(x, Spin::down)), annihilate(mode_index(x, Spin::up))});
  }
  return p;
}

Polynomial pair_creator(const JunctionSpec& spec, Region r) {
  return pair_annihilator(spec, r).adjoint();
}

Polynomial pair_transfer(const JunctionSpec& spec, Region to, Region from) {
  Polynomial p;
  const int to_first = spec.first_site(to);
  const int from_first = spec.first_site(from);
  for (int x = to_first; x < to_first + spec.sites_in(to); ++x) {
    for (int y = from_first; y < from_first + spec.sites_in(from); ++y) {
      p.add(1.0, {create(mode_index(x, Spin::up)), create(mode_index(x, Spin::down)),
                  annihilate(mode_index(y, Spin::down)), annihilate(mode_index(y, Spin::up))});
    }
  }
  return p;
}

HamiltonianTerms hamiltonian_terms(const JunctionSpec& spec) {
  spec.validate();
  HamiltonianTerms terms;
  add_region(terms.h1, spec, Region::one, spec.g11);
  add_region(terms.h2, spec, Region::two, spec.g22);
  if (spec.g12 != 0.0) {
    const double c = -spec.g12 / spec.volume_norm();
    terms.h12 += pair_transfer(spec, Region::one, Region::two).scaled(c);
    terms.h12 += pair_transfer(spec, Region::two, Region::one).scaled(c);
  }
  if (spec.cross_hop != 0.0) {
    const int w1 = spec.L1 - 1;
    const int w2 = spec.L1;
    for (const Spin s : {Spin::up, Spin::down}) {
      terms.h12.add(-spec.cross_hop, {create(mode_index(w1, s)), annihilate(mode_index(w2, s))});
      terms.h12.add(-spec.cross_hop, {create(mode_index(w2, s)), annihilate(mode_index(w1, s))});
    }
  }
  return terms;
}

HamiltonianSplit build_hamiltonian(const JunctionSpec& spec, const FockBasis& basis) {
  require_basis_for(spec, basis);
  const auto terms = hamiltonian_terms(spec);
  const auto build = [&](const Polynomial& p) {
    return SparseOperator::from_polynomial(basis, p).marked_hermitian();
  };
  return {build(terms.total()), build(terms.h1), build(terms.h2), build(terms.h12)};
}

int region_occupation(const JunctionSpec& spec, fock::FockState s, Region r) {
  return std::popcount(s & region_mask(spec, r));
}

SparseOperator charge_op(const JunctionSpec& spec, const FockBasis& basis, Region r) {
  require_basis_for(spec, basis);
  const auto mask = region_mask(spec, r);
  std::vector<double> diag(basis.dimension());
  for (std::size_t s = 0; s < diag.size(); ++s) {
    diag[s] = -spec.charge_unit * std::popcount(static_cast<fock::FockState>(s) & mask);
  }
  return SparseOperator::diagonal(basis, diag);
}

CurrentOperator current_op(const HamiltonianSplit& split, const SparseOperator& q1) {
  const complex i(0.0, 1.0);
  CurrentOperator out{i * fock::commutator(split.total, q1), 0.0};
  const auto reduced = i * fock::commutator(split.h12, q1);
  out.reduction_residual = fock::max_abs_difference(out.op, reduced);
  if (out.reduction_residual > kReductionTolerance) {
    throw ModelInconsistencyError(
        "[iH, Q1] differs from [iH12, Q1] by " + std::to_string(out.reduction_residual) +
        ": a Hamiltonian term outside H12 moves charge across the boundary");
  }
  out.op = out.op.marked_hermitian();
  return out;
}

Polynomial current_terms(const JunctionSpec& spec) {
  // By site, not by bit mask: polynomials are not limited to the Fock cap.
  const auto in_region1 = [&](int mode) { return spec.region_of_site(mode / 2) == Region::one; };
  Polynomial out;
  const Polynomial h = hamiltonian_terms(spec).total();
  for (const auto& term : h.terms()) {
    int delta = 0;
    for (const auto& op : term.ops) {
      if (in_region1(op.mode)) delta += op.is_creation() ? 1 : -1;
    }
    if (delta != 0) {
      out.add(complex(0.0, spec.charge_unit * delta) * term.coefficient, term.ops);
    }
  }
  return out;
}

double ConservationReport::max() const { return std::max({total, region1, region2}); }

ConservationReport verify_conservation(const HamiltonianSplit& split, const JunctionSpec& spec,
                                       const FockBasis& basis) {
  ConservationReport report;
  report.total =
      fock::commutator(split.total, charge_op(spec, basis, Region::both)).max_abs();
  report.region1 = fock::commutator(split.h1, charge_op(spec, basis, Region::one)).max_abs();
  report.region2 = fock::commutator(split.h2, charge_op(spec, basis, Region::two)).max_abs();
  return report;
}

SparseOperator region_phase_rotation(const JunctionSpec& spec, const FockBasis& basis,
                                     double phi) {
  require_basis_for(spec, basis);
  std::vector<fock::Entry> entries;
  entries.reserve(basis.dimension());
  for (std::size_t s = 0; s < basis.dimension(); ++s) {
    const int n1 = region_occupation(spec, static_cast<fock::FockState>(s), Region::one);
    entries.push_back({s, s, std::exp(complex(0.0, phi * n1))});
  }
  return SparseOperator::from_entries(basis, std::move(entries));
}

}  // namespace josephson::junction
