#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "josephson/fock/ladder.hpp"
#include "josephson/fock/state_vector.hpp"
#include "josephson/junction/spec.hpp"

namespace josephson::experiments {

// A supported in region 1, B in region 2.
struct MixedMonomial {
  fock::Monomial a;
  fock::Monomial b;
};

// |<AB> − <A><B>| in v.
double factorization_defect(const fock::StateVector& v, const fock::Monomial& a,
                            const fock::Monomial& b);
double factorization_defect(const fock::StateVector& v, const fock::Polynomial& a,
                            const fock::Polynomial& b);

// Seeded family of mixed-region monomials: densities, pair operators, and
// random words of length 1–3 on each side.
std::vector<MixedMonomial> mixed_family(const junction::JunctionSpec& spec, std::uint64_t seed,
                                        int count = 64);

// (P1†|0>/‖P1†|0>‖ + P2†|0>/‖P2†|0>‖)/√2: one pair shared between the
// regions. Not a product state.
fock::StateVector entangled_pair_state(const junction::JunctionSpec& spec,
                                       const fock::FockBasis& basis);

// Region labels (i, j, k, l) of the probe coupling
// Σ a†_{x_i↑} a†_{x_j↓} a_{x_k↓} a_{x_l↑} + h.c., x_n ranging over region n.
struct PatternContribution {
  std::array<int, 4> regions{};
  double current = 0.0;  // <[i K, Q1]> in the product state
};

struct ClusterReport {
  std::vector<double> defects;
  double max_defect = 0.0;
  std::vector<PatternContribution> patterns;  // all 16
  // Largest |contribution| outside {1,1,2,2} and {2,2,1,1}.
  double max_other_pattern = 0.0;
  // Smallest |contribution| of the two surviving patterns.
  double min_surviving_pattern = 0.0;
};

// Evaluated exactly on embed_product_state with phases (θ1, θ2).
ClusterReport cluster_check(const junction::JunctionSpec& spec,
                            std::span<const MixedMonomial> family, double theta1 = 0.5,
                            double theta2 = 0.0);

}  // namespace josephson::experiments
