#include "josephson/experiments/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "josephson/bcs/gap.hpp"
#include "josephson/bcs/quasifree.hpp"
#include "josephson/errors.hpp"
#include "josephson/experiments/ac.hpp"
#include "josephson/experiments/cluster.hpp"
#include "josephson/experiments/sweep.hpp"
#include "josephson/junction/hamiltonian.hpp"

namespace josephson::experiments {

using fock::LadderKind;
using junction::JunctionSpec;
using junction::Region;
using std::numbers::pi;

double car_defect(int n_modes) {
  const fock::FockBasis basis(n_modes);
  const auto id = fock::SparseOperator::identity(basis);
  std::vector<fock::SparseOperator> a, ad;
  for (int i = 0; i < n_modes; ++i) {
    a.push_back(fock::ladder_op(basis, i, LadderKind::annihilation));
    ad.push_back(fock::ladder_op(basis, i, LadderKind::creation));
  }
  double worst = 0.0;
  for (int i = 0; i < n_modes; ++i) {
    for (int j = 0; j < n_modes; ++j) {
      const auto mixed = fock::anticommutator(a[i], ad[j]);
      worst = std::max(worst, i == j ? fock::max_abs_difference(mixed, id) : mixed.max_abs());
      worst = std::max(worst, fock::anticommutator(a[i], a[j]).max_abs());
    }
  }
  return worst;
}

namespace {

JunctionSpec two_site() {
  JunctionSpec s;
  s.t_hop = 0.0;
  s.mu = 0.0;
  s.g11 = 1.0;
  s.g22 = 1.0;
  s.g12 = 0.1;
  return s;
}

struct Suite {
  std::vector<CheckResult> results;

  // fn returns the measured value; passes when value < threshold, or
  // value <= threshold when inclusive.
  void below(const std::string& name, double threshold, const std::function<double()>& fn,
             bool inclusive = false) {
    CheckResult r{name, 0.0, threshold, false, false, {}};
    try {
      r.value = fn();
      r.passed = inclusive ? r.value <= threshold : r.value < threshold;
      if (!r.passed) r.detail = "value not below threshold";
    } catch (const std::exception& e) {
      r.value = std::numeric_limits<double>::quiet_NaN();
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }

  void skip(const std::string& name, const std::string& why) {
    results.push_back({name, 0.0, 0.0, true, true, "skipped: " + why});
  }
};

}  // namespace

std::vector<CheckResult> validation_suite(const JunctionSpec& spec, double tol,
                                          std::uint64_t seed) {
  spec.validate();
  Suite s;
  const bool small = spec.n_modes() <= 12;
  const auto grid = default_theta_grid(17);
  const auto ts = two_site();

  s.below("car", 1e-12, [] { return car_defect(8); });

  if (small) {
    const fock::FockBasis basis(spec.n_modes());
    const auto split = junction::build_hamiltonian(spec, basis);
    s.below("conservation", 1e-12,
            [&] { return junction::verify_conservation(split, spec, basis).max(); });
    s.below("current_reduction", 1e-12, [&] {
      return junction::current_op(split, junction::charge_op(spec, basis, Region::one))
          .reduction_residual;
    });
  } else {
    s.skip("conservation", "more than 12 modes");
    s.skip("current_reduction", "more than 12 modes");
  }

  s.below("dc_two_site_closed_form", tol, [&] {
    double worst = 0.0;
    for (const auto engine : {Engine::meanfield, Engine::exact}) {
      const auto r = dc_sweep(ts, grid, engine, tol);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(r.values[i] - (-0.05 * std::sin(grid[i]))));
      }
      if (!r.law_holds) throw ModelInconsistencyError(r.law_report);
    }
    return worst;
  });
  s.below("dc_sinusoid_fit", tol, [&] {
    const auto r = dc_sweep(spec, grid, Engine::meanfield, tol);
    return std::max({r.residual, std::abs(r.fit.constant), std::abs(r.fit.cos), r.max_imag});
  });
  s.below("dc_odd_and_periodic", tol, [&] {
    std::vector<double> g, neg, shifted;
    for (int i = 1; i <= 8; ++i) g.push_back(0.41 * i);
    for (auto it = g.rbegin(); it != g.rend(); ++it) neg.push_back(-*it);
    for (double t : g) shifted.push_back(t + 2 * pi);
    const auto a = dc_sweep(spec, g, Engine::meanfield, tol);
    const auto b = dc_sweep(spec, neg, Engine::meanfield, tol);
    const auto c = dc_sweep(spec, shifted, Engine::meanfield, tol);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(a.values[i] + b.values[g.size() - 1 - i]));
      worst = std::max(worst, std::abs(a.values[i] - c.values[i]));
    }
    return worst;
  });
  s.below("energy_two_site_closed_form", tol, [&] {
    double worst = 0.0;
    for (const auto engine : {Engine::meanfield, Engine::exact}) {
      const auto r = energy_sweep(ts, grid, engine, tol);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(r.values[i] - (-0.025 * std::cos(grid[i]))));
      }
    }
    return worst;
  });
  s.below("energy_sign", 0.0, [&] {
    // Largest signed g12 · cos coefficient over the two-site model and spec;
    // must be negative.
    double worst = energy_sweep(ts, grid, Engine::meanfield, tol).fit.cos * ts.g12;
    const auto s1 = bcs::region_solution(spec, Region::one);
    const auto s2 = bcs::region_solution(spec, Region::two);
    if (spec.g12 != 0.0 && s1.gap > 0.0 && s2.gap > 0.0) {
      worst = std::max(worst, energy_sweep(spec, grid, Engine::meanfield, tol).fit.cos * spec.g12);
    }
    return worst;
  });
  s.below("energy_current_ratio", 1e-8, [&] {
    const auto j = dc_sweep(ts, grid, Engine::meanfield, tol);
    const auto e = energy_sweep(ts, grid, Engine::meanfield, tol);
    return std::abs(std::abs(j.fit.sin) / std::abs(e.fit.cos) - 2 * ts.charge_unit);
  });

  if (small) {
    s.below("gauge_shift", tol, [&] {
      double worst = 0.0;
      for (const double phi : {pi / 4, pi / 2, pi}) {
        worst = std::max(worst, gauge_check(spec, phi, default_theta_grid(9)).max_discrepancy);
      }
      return worst;
    });
    s.below("cluster_factorization", tol, [&] {
      const auto fam = mixed_family(spec, seed, 60);
      const auto r = cluster_check(spec, fam, 0.7, 0.0);
      return std::max(r.max_defect, r.max_other_pattern);
    });
    s.below("wick_oracle", tol, [&] {
      const auto s1 = bcs::region_solution(spec, Region::one, 0.9);
      const auto s2 = bcs::region_solution(spec, Region::two, 0.2);
      const auto state = bcs::covariance(s1, s2, spec);
      const fock::FockBasis basis(spec.n_modes());
      const auto v = bcs::embed_product_state(s1, s2, spec, basis);
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<int> mode(0, spec.n_modes() - 1);
      std::uniform_int_distribution<int> length(0, 6);
      std::bernoulli_distribution dagger(0.5);
      double worst = 0.0;
      for (int trial = 0; trial < 2000; ++trial) {
        fock::Monomial m;
        for (int n = length(rng); n > 0; --n) {
          m.push_back(dagger(rng) ? fock::create(mode(rng)) : fock::annihilate(mode(rng)));
        }
        worst = std::max(worst, std::abs(bcs::wick_expect(state, m) -
                                         fock::monomial_expectation(m, v)));
      }
      return worst;
    });
    s.below("oracle_meanfield_vs_exact", tol,
            [&] { return oracle_check(spec, grid, tol).max_discrepancy; });
  } else {
    for (const char* n : {"gauge_shift", "cluster_factorization", "wick_oracle",
                          "oracle_meanfield_vs_exact"}) {
      s.skip(n, "more than 12 modes");
    }
  }

  s.below("cluster_detector", tol, [&] {
    const fock::FockBasis basis(ts.n_modes());
    const auto v = entangled_pair_state(ts, basis);
    return std::abs(factorization_defect(v, junction::pair_creator(ts, Region::one),
                                         junction::pair_annihilator(ts, Region::two)) -
                    0.5);
  });
  s.below("odlro_decay", 0.01, [&] {
    // deviation(M/2) / deviation(2) on the M = 64 ring with Δ/t = 1.
    JunctionSpec ring;
    ring.L1 = 64;
    ring.L2 = 64;
    ring.mu = -1.0;
    const auto sol = bcs::solve_gap(64, 1.0, -1.0, bcs::coupling_for_gap(64, 1.0, -1.0, 1.0));
    auto sol2 = sol;
    sol2.region = 2;
    const auto table = bcs::odlro_scan(bcs::covariance(sol, sol2, ring), ring);
    if (table.max_cross_deviation >= 1e-12) {
      throw ModelInconsistencyError("cross-region correlation does not factorize");
    }
    return table.rows[32].deviation / table.rows[2].deviation;
  });
  s.below("ac_two_site_frequency", 1.0, [&] {
    auto m = ts;
    m.g12 = 0.02;
    AcOptions o;
    o.voltage = 0.25;
    o.theta0 = 0.5;
    const auto r = ac_run(m, o);
    if (r.max_ehrenfest >= 100 * o.tol) throw IntegrationError("Ehrenfest residual too large");
    // Distance from 2|e|V in bins.
    return std::abs(r.peak_omega - r.expected_omega) / r.bin_width;
  }, true);
  return s.results;
}

}  // namespace josephson::experiments
