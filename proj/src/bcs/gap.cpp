#include "josephson/bcs/gap.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "josephson/errors.hpp"

namespace josephson::bcs {

namespace {

struct Orbitals {
  std::vector<double> energies;
  Eigen::MatrixXd vectors;
};

Orbitals single_particle(int sites, double t_hop, junction::Boundary boundary) {
  const Eigen::MatrixXd h = junction::hopping_matrix(sites, t_hop, boundary);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Orbitals out;
  out.energies.assign(es.eigenvalues().data(), es.eigenvalues().data() + sites);
  out.vectors = es.eigenvectors();
  return out;
}

// (1/M) Σ_k 1/(2 E_k)
double pair_susceptibility(const std::vector<double>& eps, double mu, double gap) {
  double s = 0.0;
  for (const double e : eps) s += 0.5 / std::hypot(e - mu, gap);
  return s / static_cast<double>(eps.size());
}

void fill_amplitudes(BcsSolution& sol) {
  const auto m = sol.energies.size();
  sol.u.resize(m);
  sol.v.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double xi = sol.energies[k] - sol.mu;
    if (sol.gap == 0.0) {
      // Normal state; a level exactly at μ is taken empty.
      sol.u[k] = xi >= 0.0 ? 1.0 : 0.0;
      sol.v[k] = xi >= 0.0 ? 0.0 : 1.0;
      continue;
    }
    const double e = std::hypot(xi, sol.gap);
    sol.u[k] = std::sqrt(0.5 * (1.0 + xi / e));
    sol.v[k] = std::sqrt(0.5 * (1.0 - xi / e));
  }
}

}  // namespace

BcsSolution BcsSolution::with_phase(double theta) const {
  BcsSolution out = *this;
  const double two_pi = 2.0 * std::numbers::pi;
  out.phase = std::fmod(theta, two_pi);
  if (out.phase < 0.0) out.phase += two_pi;
  return out;
}

double BcsSolution::pair_amplitude(int site) const {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double phi = orbitals(site, static_cast<Eigen::Index>(k));
    s += phi * phi * u[k] * v[k];
  }
  return s;
}

double BcsSolution::filling() const {
  double n = 0.0;
  for (const double x : v) n += 2.0 * x * x;
  return n / static_cast<double>(sites);
}

BcsSolution solve_gap(int sites, double t_hop, double mu, double g, const GapOptions& options) {
  if (sites < 1) throw ValidationError("gap equation needs M >= 1 sites");
  if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("pairing strength g must be >= 0");
  if (!(options.tol > 0.0)) throw ValidationError("gap solver tolerance must be positive");

  const auto orb = single_particle(sites, t_hop, options.boundary);
  BcsSolution sol;
  sol.sites = sites;
  sol.mu = mu;
  sol.coupling = g;
  sol.energies = orb.energies;
  sol.orbitals = orb.vectors;

  // f(Δ) = g χ(Δ) − 1 is strictly decreasing in Δ.
  const auto f = [&](double gap) { return g * pair_susceptibility(sol.energies, mu, gap) - 1.0; };
  double lo = options.tol;
  double hi = g * sites;
  if (g == 0.0 || hi <= lo || f(lo) <= 0.0) {
    sol.gap = 0.0;
    sol.residual = 0.0;
    fill_amplitudes(sol);
    return sol;
  }
  if (f(hi) > 0.0) {
    std::ostringstream msg;
    msg << "gap bracket [" << lo << ", " << hi << "] does not enclose a root";
    throw SolverError(msg.str());
  }
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    const double residual = std::abs(mid * fm);
    const bool exhausted = mid == lo || mid == hi;
    (fm > 0.0 ? lo : hi) = mid;
    if ((residual < options.tol && hi - lo < options.tol) || (exhausted && residual < options.tol)) {
      sol.gap = mid;
      sol.residual = residual;
      sol.iterations = it;
      fill_amplitudes(sol);
      return sol;
    }
    if (exhausted) break;
  }
  std::ostringstream msg;
  msg << "gap bisection did not converge within " << options.max_iterations
      << " iterations; final bracket [" << lo << ", " << hi << "], f(lo) = " << f(lo)
      << ", f(hi) = " << f(hi);
  throw SolverError(msg.str());
}

double coupling_for_gap(int sites, double t_hop, double mu, double gap,
                        junction::Boundary boundary) {
  if (!(gap > 0.0)) throw ValidationError("target gap must be positive");
  const auto orb = single_particle(sites, t_hop, boundary);
  return 1.0 / pair_susceptibility(orb.energies, mu, gap);
}

BcsSolution region_solution(const junction::JunctionSpec& spec, junction::Region r,
                            double phase, double tol) {
  spec.validate();
  const int m = spec.sites_in(r);
  const double g = (r == junction::Region::one ? spec.g11 : spec.g22) * m / spec.volume_norm();
  GapOptions opts;
  opts.tol = tol;
  opts.boundary = spec.boundary;
  auto sol = solve_gap(m, spec.t_hop, spec.mu, g, opts).with_phase(phase);
  sol.region = static_cast<int>(r);
  return sol;
}

}  // namespace josephson::bcs
