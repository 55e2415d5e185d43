#include "josephson/experiments/ac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "josephson/bcs/quasifree.hpp"
#include "josephson/errors.hpp"
#include "josephson/junction/hamiltonian.hpp"

namespace josephson::experiments {

using fock::complex;
using junction::Region;

namespace {

void validate_options(const junction::JunctionSpec& spec, AcOptions& o) {
  const double omega = 2 * spec.charge_unit * std::abs(o.voltage);
  if (!std::isfinite(o.voltage) || !std::isfinite(o.theta0)) {
    throw ValidationError("ac_run: voltage and theta0 must be finite");
  }
  if (!(o.tol > 0.0)) throw ValidationError("ac_run: tol must be positive");
  if (o.duration == 0.0) o.duration = omega > 0.0 ? 16 * 2 * std::numbers::pi / omega : 50.0;
  if (!(o.duration > 0.0) || !std::isfinite(o.duration)) {
    throw ValidationError("ac_run: duration must be positive");
  }
  if (omega > 0.0) {
    const double periods = o.duration * omega / (2 * std::numbers::pi);
    if (periods < o.min_periods) {
      throw ValidationError("ac_run: duration covers " + std::to_string(periods) +
                            " periods of 2|e|V, need at least " + std::to_string(o.min_periods));
    }
  }
  if (o.sample_step == 0.0) o.sample_step = std::min(o.duration / 512, 0.5);
  if (!(o.stencil_step > 0.0) || !(o.sample_step > 4 * o.stencil_step)) {
    throw ValidationError("ac_run: need sample_step > 4 * stencil_step > 0");
  }
  if (o.duration / o.sample_step < 8) throw ValidationError("ac_run: fewer than 8 samples");
}

}  // namespace

AcResult ac_run(const junction::JunctionSpec& spec, const AcOptions& options) {
  spec.validate();
  AcResult r;
  r.options = options;
  auto& o = r.options;
  validate_options(spec, o);

  const fock::FockBasis basis(spec.n_modes());
  const auto split = junction::build_hamiltonian(spec, basis);
  const auto q1 = junction::charge_op(spec, basis, Region::one);
  const auto j = junction::current_op(split, q1).op;
  fock::TimeDependentHamiltonian h(split.total + complex(o.voltage, 0.0) * q1);
  h.validate();

  const auto s1 = bcs::region_solution(spec, Region::one, o.theta0);
  const auto s2 = bcs::region_solution(spec, Region::two);
  const auto v0 = bcs::embed_product_state(s1, s2, spec, basis);

  // Each sample t_k carries stencil points t_k ± h, t_k ± 2h; evolution
  // starts at t_0 − 2h = 0.
  const double hs = o.stencil_step;
  const auto n = static_cast<std::size_t>(std::llround(o.duration / o.sample_step));
  std::vector<double> grid;
  grid.reserve(5 * n);
  r.times.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2 * hs + static_cast<double>(k) * o.sample_step;
    r.times[k] = t;
    for (int s = -2; s <= 2; ++s) grid.push_back(t + s * hs);
  }

  std::vector<double> jq(grid.size());
  std::vector<double> qq(grid.size());
  std::size_t at = 0;
  fock::EvolveOptions eo;
  eo.tol = o.tol;
  eo.max_krylov = o.max_krylov;
  r.stats = fock::evolve(v0, h, grid, eo, [&](double, const fock::StateVector& v) {
    // J is only needed at stencil centres.
    if (at % 5 == 2) jq[at] = fock::expectation(j, v).real();
    qq[at] = fock::expectation(q1, v).real();
    ++at;
  });

  r.current.resize(n);
  r.charge_region1.resize(n);
  r.ehrenfest.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double* q = &qq[5 * k];
    const double dq = (q[0] - 8 * q[1] + 8 * q[3] - q[4]) / (12 * hs);
    r.current[k] = jq[5 * k + 2];
    r.charge_region1[k] = q[2];
    r.ehrenfest[k] = std::abs(dq - r.current[k]);
    r.max_ehrenfest = std::max(r.max_ehrenfest, r.ehrenfest[k]);
  }
  const auto [lo, hi] = std::minmax_element(r.current.begin(), r.current.end());
  r.current_spread = *hi - *lo;

  // Hann-windowed DFT of the mean-removed current.
  double mean = 0.0;
  for (double x : r.current) mean += x;
  mean /= static_cast<double>(n);
  const double span = static_cast<double>(n) * o.sample_step;
  r.bin_width = 2 * std::numbers::pi / span;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (1 - std::cos(2 * std::numbers::pi * static_cast<double>(i) /
                                         static_cast<double>(n)));
    x[i] = (r.current[i] - mean) * w;
  }
  const std::size_t half = n / 2;
  r.omega.resize(half);
  r.power.resize(half);
  for (std::size_t k = 0; k < half; ++k) {
    complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double phase = -2 * std::numbers::pi * static_cast<double>((k * i) % n) /
                           static_cast<double>(n);
      acc += x[i] * complex(std::cos(phase), std::sin(phase));
    }
    r.omega[k] = static_cast<double>(k) * r.bin_width;
    r.power[k] = std::norm(acc);
  }
  std::size_t peak = half > 1 ? 1 : 0;
  for (std::size_t k = 1; k < half; ++k) {
    if (r.power[k] > r.power[peak]) peak = k;
  }
  r.peak_omega = r.omega.empty() ? 0.0 : r.omega[peak];
  r.expected_omega = 2 * spec.charge_unit * std::abs(o.voltage);
  r.within_bin = o.voltage != 0.0 && std::abs(r.peak_omega - r.expected_omega) <= r.bin_width;
  return r;
}

}  // namespace josephson::experiments
