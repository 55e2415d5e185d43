#pragma once

#include <random>

#include "josephson/junction/spec.hpp"

namespace josephson::testing {

// Seeded junction with at most `max_sites` sites (2 modes per site).
inline junction::JunctionSpec random_spec(std::uint32_t seed, int max_sites = 6,
                                          bool allow_cross_hop = true) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> l1(1, max_sites - 1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  junction::JunctionSpec s;
  s.L1 = l1(rng);
  std::uniform_int_distribution<int> l2(1, max_sites - s.L1);
  s.L2 = l2(rng);
  s.t_hop = 1.0 + 0.5 * unit(rng);
  s.mu = unit(rng);
  s.g11 = 1.0 + unit(rng);
  s.g22 = 1.0 + unit(rng);
  s.g12 = 0.5 * unit(rng);
  s.charge_unit = 1.0 + 0.5 * (unit(rng) + 1.0);
  s.boundary = unit(rng) > 0 ? junction::Boundary::periodic : junction::Boundary::open;
  if (allow_cross_hop && unit(rng) > 0.5) s.cross_hop = 0.3 * unit(rng);
  return s;
}

// The documented two-site junction: one site per region, no hopping, μ = 0.
inline junction::JunctionSpec two_site_spec(double g12 = 0.1) {
  junction::JunctionSpec s;
  s.L1 = 1;
  s.L2 = 1;
  s.t_hop = 0.0;
  s.mu = 0.0;
  s.g11 = 1.0;
  s.g22 = 1.0;
  s.g12 = g12;
  s.charge_unit = 1.0;
  return s;
}

}  // namespace josephson::testing
