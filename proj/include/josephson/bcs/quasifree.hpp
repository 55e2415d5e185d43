#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "josephson/bcs/gap.hpp"
#include "josephson/fock/execution.hpp"
#include "josephson/fock/ladder.hpp"
#include "josephson/fock/state_vector.hpp"
#include "josephson/junction/spec.hpp"

namespace josephson::bcs {

using fock::complex;

// Gaussian (quasi-free) state fixed by its two-point functions over all
// modes: G_ab = <a†_a a_b>, F_ab = <a_a a_b>.
struct QuasiFreeState {
  Eigen::MatrixXcd G;
  Eigen::MatrixXcd F;

  int n_modes() const { return static_cast<int>(G.rows()); }

  // Throws ValidationError unless G is hermitian with spectrum in [0, 1]
  // (1e-10) and F is antisymmetric (1e-12).
  void validate() const;
};

// Product of the two regional BCS states. Cross-region blocks vanish; on
// site x of region r, F(x↓, x↑) = Σ_k φ_k(x)² u_k v_k e^{iθ_r}.
QuasiFreeState covariance(const BcsSolution& region1, const BcsSolution& region2,
                          const junction::JunctionSpec& spec);

inline constexpr std::size_t kMaxWickLength = 12;

// <b_1 ... b_n> by Wick's theorem: the pfaffian of the antisymmetric matrix
// of ordered pair contractions <b_i b_j>, i < j. Odd n gives 0. Throws
// ValidationError when n exceeds kMaxWickLength.
complex wick_expect(const QuasiFreeState& state, std::span<const fock::LadderOp> ops);

// Σ_terms c · wick_expect(term), evaluated in parallel over terms.
complex mean_field_expectation(const QuasiFreeState& state, const fock::Polynomial& p,
                               Execution exec = Execution::parallel);

// Site-resolved pair amplitude Ψ(x) = <a_{x↓} a_{x↑}>.
complex pair_amplitude(const QuasiFreeState& state, int site);

struct OdlroRow {
  int separation = 0;
  complex correlation;  // <P†(x) P(x + d)>
  double deviation = 0.0;  // |C(d) − Ψ*(x) Ψ(x + d)|
  double envelope = 0.0;   // max deviation at this or any larger separation
};

struct OdlroTable {
  std::vector<OdlroRow> rows;  // within region 1 from its first site
  complex pair_amplitude;      // Ψ at the reference site
  double plateau = 0.0;        // |Ψ|²
  // x fixed at the first site of region 2, partner swept over region 1;
  // plateau Ψ2* Ψ1.
  std::vector<OdlroRow> cross_rows;
  double max_cross_deviation = 0.0;
};

// Separations run to ⌊M/2⌋ on a ring and to M − 1 on an open chain.
OdlroTable odlro_scan(const QuasiFreeState& state, const junction::JunctionSpec& spec);

// Π_k (u_k + v_k e^{iθ} c†_{k↑} c†_{k↓})|0> for both regions, expanded in the
// position-mode Fock basis.
fock::StateVector embed_product_state(const BcsSolution& region1, const BcsSolution& region2,
                                      const junction::JunctionSpec& spec,
                                      const fock::FockBasis& basis);

}  // namespace josephson::bcs
