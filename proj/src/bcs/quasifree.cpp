#include "josephson/bcs/quasifree.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <string>

#include <Eigen/Eigenvalues>

#include "josephson/errors.hpp"
#include "josephson/fock/kernels.hpp"

namespace josephson::bcs {

using junction::mode_index;
using junction::Region;
using junction::Spin;

namespace {

using ContractionMatrix = std::array<std::array<complex, kMaxWickLength>, kMaxWickLength>;

// <b_i b_j> for two ladder operators.
complex contraction(const QuasiFreeState& s, fock::LadderOp x, fock::LadderOp y) {
  const int a = x.mode;
  const int b = y.mode;
  if (x.is_creation() && y.is_creation()) return std::conj(s.F(b, a));
  if (x.is_creation()) return s.G(a, b);
  if (y.is_creation()) return (a == b ? 1.0 : 0.0) - s.G(b, a);
  return s.F(a, b);
}

// Expansion along the lowest remaining index; `mask` holds the rows still
// in play.
complex pfaffian(const ContractionMatrix& m, unsigned mask) {
  if (mask == 0) return 1.0;
  const int i = std::countr_zero(mask);
  const unsigned rest = mask & ~(1u << i);
  complex total = 0.0;
  double sign = 1.0;
  for (unsigned r = rest; r != 0; r &= r - 1) {
    const int j = std::countr_zero(r);
    const complex mij = m[i][j];
    if (mij != complex{0.0, 0.0}) total += sign * mij * pfaffian(m, rest & ~(1u << j));
    sign = -sign;
  }
  return total;
}

void check_solution(const BcsSolution& sol, int sites, const char* which) {
  if (sol.sites != sites || static_cast<int>(sol.u.size()) != sites) {
    throw StructuralError(std::string(which) + " solution has " + std::to_string(sol.sites) +
                          " sites but the junction region has " + std::to_string(sites));
  }
}

void fill_region(QuasiFreeState& s, const BcsSolution& sol, int first) {
  const int m = sol.sites;
  const complex phase = std::exp(complex(0.0, sol.phase));
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      double normal = 0.0;
      double anomalous = 0.0;
      for (int k = 0; k < m; ++k) {
        const double w = sol.orbitals(x, k) * sol.orbitals(y, k);
        normal += w * sol.v[k] * sol.v[k];
        anomalous += w * sol.u[k] * sol.v[k];
      }
      for (const Spin sp : {Spin::up, Spin::down}) {
        s.G(mode_index(first + x, sp), mode_index(first + y, sp)) = normal;
      }
      // <a_{x↓} a_{y↑}> = Σ_k φ_k(x) φ_k(y) u_k v_k e^{iθ}
      s.F(mode_index(first + x, Spin::down), mode_index(first + y, Spin::up)) = anomalous * phase;
      s.F(mode_index(first + y, Spin::up), mode_index(first + x, Spin::down)) = -anomalous * phase;
    }
  }
}

}  // namespace

void QuasiFreeState::validate() const {
  if (G.rows() != G.cols() || F.rows() != F.cols() || G.rows() != F.rows()) {
    throw StructuralError("covariance blocks must be square and of equal size");
  }
  const double herm = (G - G.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw ValidationError("G is not hermitian (defect " + std::to_string(herm) + ")");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10 || es.eigenvalues().maxCoeff() > 1.0 + 1e-10) {
    throw ValidationError("G has eigenvalues outside [0, 1]");
  }
  const double anti = (F + F.transpose()).cwiseAbs().maxCoeff();
  if (anti > 1e-12) throw ValidationError("F is not antisymmetric (defect " + std::to_string(anti) + ")");
}

QuasiFreeState covariance(const BcsSolution& region1, const BcsSolution& region2,
                          const junction::JunctionSpec& spec) {
  spec.validate();
  check_solution(region1, spec.L1, "region-1");
  check_solution(region2, spec.L2, "region-2");
  const int n = spec.n_modes();
  QuasiFreeState s{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n)};
  fill_region(s, region1, spec.first_site(Region::one));
  fill_region(s, region2, spec.first_site(Region::two));
  return s;
}

complex wick_expect(const QuasiFreeState& state, std::span<const fock::LadderOp> ops) {
  if (ops.size() > kMaxWickLength) {
    throw ValidationError("Wick expansion limited to " + std::to_string(kMaxWickLength) +
                          " operators, got " + std::to_string(ops.size()));
  }
  for (const auto& op : ops) {
    if (op.mode < 0 || op.mode >= state.n_modes()) {
      throw IndexError("mode " + std::to_string(op.mode) + " outside the covariance");
    }
  }
  if (ops.size() % 2 == 1) return 0.0;
  ContractionMatrix m{};
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      m[i][j] = contraction(state, ops[i], ops[j]);
    }
  }
  return pfaffian(m, (1u << ops.size()) - 1u);
}

complex mean_field_expectation(const QuasiFreeState& state, const fock::Polynomial& p,
                               Execution exec) {
  const auto terms = p.terms();
  return fock::kernels::blocked_sum<complex>(
      terms.size(),
      [&](std::size_t t) { return terms[t].coefficient * wick_expect(state, terms[t].ops); },
      exec);
}

complex pair_amplitude(const QuasiFreeState& state, int site) {
  return state.F(mode_index(site, Spin::down), mode_index(site, Spin::up));
}

OdlroTable odlro_scan(const QuasiFreeState& state, const junction::JunctionSpec& spec) {
  if (state.n_modes() != spec.n_modes()) {
    throw StructuralError("covariance does not match the junction");
  }
  const auto pair_correlation = [&](int x, int y) {
    const std::array<fock::LadderOp, 4> ops{
        fock::create(mode_index(x, Spin::up)), fock::create(mode_index(x, Spin::down)),
        fock::annihilate(mode_index(y, Spin::down)), fock::annihilate(mode_index(y, Spin::up))};
    return wick_expect(state, ops);
  };
  const auto finish_envelope = [](std::vector<OdlroRow>& rows) {
    double running = 0.0;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      running = std::max(running, it->deviation);
      it->envelope = running;
    }
  };

  OdlroTable table;
  const int m = spec.L1;
  const int last = spec.boundary == junction::Boundary::periodic ? m / 2 : m - 1;
  const int x0 = 0;
  table.pair_amplitude = pair_amplitude(state, x0);
  table.plateau = std::norm(table.pair_amplitude);
  for (int d = 0; d <= last; ++d) {
    OdlroRow row;
    row.separation = d;
    row.correlation = pair_correlation(x0, x0 + d);
    row.deviation =
        std::abs(row.correlation - std::conj(table.pair_amplitude) * pair_amplitude(state, x0 + d));
    table.rows.push_back(row);
  }
  finish_envelope(table.rows);

  const int x2 = spec.first_site(Region::two);
  const complex psi2 = pair_amplitude(state, x2);
  for (int y = 0; y < spec.L1; ++y) {
    OdlroRow row;
    row.separation = x2 - y;
    row.correlation = pair_correlation(x2, y);
    row.deviation = std::abs(row.correlation - std::conj(psi2) * pair_amplitude(state, y));
    table.max_cross_deviation = std::max(table.max_cross_deviation, row.deviation);
    table.cross_rows.push_back(row);
  }
  finish_envelope(table.cross_rows);
  return table;
}

fock::StateVector embed_product_state(const BcsSolution& region1, const BcsSolution& region2,
                                      const junction::JunctionSpec& spec,
                                      const fock::FockBasis& basis) {
  spec.validate();
  if (basis.n_modes() != spec.n_modes()) {
    throw StructuralError("basis has " + std::to_string(basis.n_modes()) +
                          " modes but the junction needs " + std::to_string(spec.n_modes()));
  }
  check_solution(region1, spec.L1, "region-1");
  check_solution(region2, spec.L2, "region-2");

  auto psi = fock::StateVector::vacuum(basis);
  const auto apply_region = [&](const BcsSolution& sol, int first) {
    const complex phase = std::exp(complex(0.0, sol.phase));
    for (int k = 0; k < sol.sites; ++k) {
      if (sol.v[k] == 0.0) continue;
      // u_k + v_k e^{iθ} Σ_{x,y} φ_k(x) φ_k(y) a†_{x↑} a†_{y↓}
      fock::Polynomial factor;
      factor.add(sol.u[k], {});
      for (int x = 0; x < sol.sites; ++x) {
        for (int y = 0; y < sol.sites; ++y) {
          const double w = sol.orbitals(x, k) * sol.orbitals(y, k);
          if (w == 0.0) continue;
          factor.add(sol.v[k] * phase * w, {fock::create(mode_index(first + x, Spin::up)),
                                            fock::create(mode_index(first + y, Spin::down))});
        }
      }
      psi = fock::apply(factor, psi);
    }
  };
  apply_region(region1, spec.first_site(Region::one));
  apply_region(region2, spec.first_site(Region::two));
  psi.require_normalized(1e-10);
  return fock::StateVector::normalized(basis, std::vector<complex>(psi.amplitudes().begin(),
                                                                   psi.amplitudes().end()));
}

}  // namespace josephson::bcs
