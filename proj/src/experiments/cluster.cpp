#include "josephson/experiments/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "josephson/bcs/quasifree.hpp"
#include "josephson/errors.hpp"
#include "josephson/junction/hamiltonian.hpp"
#include "parallel.hpp"

namespace josephson::experiments {

using fock::annihilate;
using fock::complex;
using fock::create;
using junction::JunctionSpec;
using junction::mode_index;
using junction::Region;
using junction::Spin;

double factorization_defect(const fock::StateVector& v, const fock::Monomial& a,
                            const fock::Monomial& b) {
  fock::Monomial ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const auto joint = fock::monomial_expectation(ab, v);
  return std::abs(joint - fock::monomial_expectation(a, v) * fock::monomial_expectation(b, v));
}

double factorization_defect(const fock::StateVector& v, const fock::Polynomial& a,
                            const fock::Polynomial& b) {
  const auto joint = fock::polynomial_expectation(a * b, v);
  return std::abs(joint -
                  fock::polynomial_expectation(a, v) * fock::polynomial_expectation(b, v));
}

namespace {

fock::Monomial random_word(std::mt19937_64& rng, const JunctionSpec& spec, Region r) {
  const int first = 2 * spec.first_site(r);
  std::uniform_int_distribution<int> mode(first, first + 2 * spec.sites_in(r) - 1);
  std::uniform_int_distribution<int> length(1, 3);
  std::bernoulli_distribution dagger(0.5);
  fock::Monomial m;
  for (int n = length(rng); n > 0; --n) {
    m.push_back(dagger(rng) ? create(mode(rng)) : annihilate(mode(rng)));
  }
  return m;
}

}  // namespace

std::vector<MixedMonomial> mixed_family(const JunctionSpec& spec, std::uint64_t seed, int count) {
  spec.validate();
  const int x = spec.first_site(Region::one);
  const int y = spec.first_site(Region::two);
  const int xu = mode_index(x, Spin::up), xd = mode_index(x, Spin::down);
  const int yu = mode_index(y, Spin::up), yd = mode_index(y, Spin::down);
  std::vector<MixedMonomial> family = {
      {{create(xu), annihilate(xu)}, {create(yu), annihilate(yu)}},
      {{create(xd), annihilate(xd)}, {create(yu), annihilate(yu)}},
      {{create(xu), create(xd)}, {annihilate(yd), annihilate(yu)}},
      {{annihilate(xd), annihilate(xu)}, {create(yu), create(yd)}},
      {{create(xu), create(xd)}, {create(yu), create(yd)}},
      {{create(xu)}, {annihilate(yu)}},
  };
  std::mt19937_64 rng(seed);
  while (static_cast<int>(family.size()) < count) {
    family.push_back({random_word(rng, spec, Region::one), random_word(rng, spec, Region::two)});
  }
  family.resize(static_cast<std::size_t>(std::max(count, 0)));
  return family;
}

fock::StateVector entangled_pair_state(const JunctionSpec& spec, const fock::FockBasis& basis) {
  junction::require_basis_for(spec, basis);
  const auto vac = fock::StateVector::vacuum(basis);
  const auto p1 = fock::apply(junction::pair_creator(spec, Region::one), vac);
  const auto p2 = fock::apply(junction::pair_creator(spec, Region::two), vac);
  const double n1 = p1.norm(), n2 = p2.norm();
  std::vector<complex> amps(basis.dimension());
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = p1[i] / n1 + p2[i] / n2;
  return fock::StateVector::normalized(basis, std::move(amps));
}

ClusterReport cluster_check(const JunctionSpec& spec, std::span<const MixedMonomial> family,
                            double theta1, double theta2) {
  spec.validate();
  for (const auto& m : family) {
    for (const auto& op : m.a) {
      if (spec.region_of_site(op.mode / 2) != Region::one) {
        throw ValidationError("cluster_check: A must be supported in region 1");
      }
    }
    for (const auto& op : m.b) {
      if (spec.region_of_site(op.mode / 2) != Region::two) {
        throw ValidationError("cluster_check: B must be supported in region 2");
      }
    }
  }
  const fock::FockBasis basis(spec.n_modes());
  const auto v = bcs::embed_product_state(bcs::region_solution(spec, Region::one, theta1),
                                          bcs::region_solution(spec, Region::two, theta2), spec,
                                          basis);
  ClusterReport r;
  r.defects.resize(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    r.defects[i] = factorization_defect(v, family[i].a, family[i].b);
    r.max_defect = std::max(r.max_defect, r.defects[i]);
  }

  // Probe coupling per region pattern; its current contribution is
  // Σ_m i|e| Δ_m c_m <m>, Δ_m the change of the region-1 particle number.
  r.patterns.resize(16);
  detail::parallel_for(16, [&](std::size_t p) {
    std::array<int, 4> regions{};
    for (int n = 0; n < 4; ++n) regions[n] = ((p >> (3 - n)) & 1) ? 2 : 1;
    auto sites = [&](int reg) {
      const Region rr = reg == 1 ? Region::one : Region::two;
      std::vector<int> s(static_cast<std::size_t>(spec.sites_in(rr)));
      for (std::size_t k = 0; k < s.size(); ++k) s[k] = spec.first_site(rr) + static_cast<int>(k);
      return s;
    };
    fock::Polynomial k;
    for (int xi : sites(regions[0]))
      for (int xj : sites(regions[1]))
        for (int xk : sites(regions[2]))
          for (int xl : sites(regions[3])) {
            k.add(1.0, {create(mode_index(xi, Spin::up)), create(mode_index(xj, Spin::down)),
                        annihilate(mode_index(xk, Spin::down)),
                        annihilate(mode_index(xl, Spin::up))});
          }
    k += k.adjoint();
    fock::Polynomial current;
    for (const auto& t : k.terms()) {
      int delta = 0;
      for (const auto& op : t.ops) {
        if (spec.region_of_site(op.mode / 2) == Region::one) delta += op.is_creation() ? 1 : -1;
      }
      if (delta != 0) current.add(complex(0.0, spec.charge_unit * delta) * t.coefficient, t.ops);
    }
    r.patterns[p].regions = regions;
    r.patterns[p].current =
        current.empty() ? 0.0 : fock::polynomial_expectation(current, v, Execution::serial).real();
  });
  r.min_surviving_pattern = std::numeric_limits<double>::infinity();
  for (const auto& pc : r.patterns) {
    const auto& g = pc.regions;
    const bool surviving = (g == std::array<int, 4>{1, 1, 2, 2}) ||
                           (g == std::array<int, 4>{2, 2, 1, 1});
    if (surviving) {
      r.min_surviving_pattern = std::min(r.min_surviving_pattern, std::abs(pc.current));
    } else {
      r.max_other_pattern = std::max(r.max_other_pattern, std::abs(pc.current));
    }
  }
  return r;
}

}  // namespace josephson::experiments
