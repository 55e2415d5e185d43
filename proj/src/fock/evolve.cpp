#include "josephson/fock/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "josephson/errors.hpp"
#include "josephson/fock/kernels.hpp"

namespace josephson::fock {

namespace {

using Vec = std::vector<complex>;

struct KrylovResult {
  Vec y;
  double error = 0.0;
  int dimension = 0;
  bool converged = false;
};

// exp(-i dt T) e_1 for the real symmetric tridiagonal T.
Eigen::VectorXcd expm_tridiagonal_e1(const std::vector<double>& alpha,
                                     const std::vector<double>& beta, double dt) {
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index i = 0; i < m; ++i) diag(i) = alpha[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
  Eigen::VectorXcd out(m);
  if (m == 1) {
    out(0) = std::exp(complex(0.0, -dt * diag(0)));
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const auto& vecs = es.eigenvectors();
  const auto& vals = es.eigenvalues();
  for (Eigen::Index k = 0; k < m; ++k) {
    complex acc = 0.0;
    for (Eigen::Index l = 0; l < m; ++l) {
      acc += vecs(k, l) * std::exp(complex(0.0, -dt * vals(l))) * vecs(0, l);
    }
    out(k) = acc;
  }
  return out;
}

KrylovResult krylov_step(const TimeDependentHamiltonian& h, double t_mid, const Vec& v,
                         double dt, double budget, int max_dim, Execution exec,
                         long& matvecs) {
  const std::size_t n = v.size();
  const double beta0 = kernels::norm(v, exec);
  KrylovResult result;
  if (beta0 == 0.0) {
    result.y = v;
    result.converged = true;
    return result;
  }
  std::vector<Vec> q;
  q.emplace_back(v);
  for (auto& x : q.back()) x /= beta0;
  std::vector<double> alpha;
  std::vector<double> beta;
  Vec w(n);

  for (int j = 0; j < max_dim; ++j) {
    h.apply(t_mid, q[j], w, exec);
    ++matvecs;
    const double a = kernels::dot(q[j], w, exec).real();
    for (std::size_t i = 0; i < n; ++i) w[i] -= a * q[j][i];
    if (j > 0) {
      const double b_prev = beta[j - 1];
      for (std::size_t i = 0; i < n; ++i) w[i] -= b_prev * q[j - 1][i];
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qi : q) {
        const complex c = kernels::dot(qi, w, exec);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * qi[i];
      }
    }
    const double b = kernels::norm(w, exec);
    alpha.push_back(a);

    const Eigen::VectorXcd coeffs = expm_tridiagonal_e1(alpha, beta, dt);
    const double err = beta0 * b * std::abs(coeffs(coeffs.size() - 1));
    result.error = err;
    result.dimension = j + 1;
    if (err <= budget || b == 0.0) {
      result.y.assign(n, 0.0);
      for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        const complex c = beta0 * coeffs(k);
        const auto& qk = q[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < n; ++i) result.y[i] += c * qk[i];
      }
      result.converged = true;
      return result;
    }
    beta.push_back(b);
    q.emplace_back(w);
    for (auto& x : q.back()) x /= b;
  }
  return result;
}

double distance(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TimeDependentHamiltonian::TimeDependentHamiltonian(SparseOperator constant_part) {
  terms_.push_back({std::move(constant_part), {}});
}

void TimeDependentHamiltonian::add_term(SparseOperator op,
                                        std::function<double(double)> coefficient) {
  if (!(op.basis() == basis())) {
    throw StructuralError("Hamiltonian terms must share one basis");
  }
  terms_.push_back({std::move(op), std::move(coefficient)});
}

bool TimeDependentHamiltonian::time_independent() const {
  return std::none_of(terms_.begin(), terms_.end(),
                      [](const Term& t) { return static_cast<bool>(t.coefficient); });
}

void TimeDependentHamiltonian::validate() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const double scale = std::max(1.0, terms_[i].op.max_abs());
    const double defect = terms_[i].op.hermiticity_defect();
    if (defect > 1e-12 * scale) {
      throw ValidationError("Hamiltonian term " + std::to_string(i) +
                            " is not hermitian: ‖A − A†‖_max = " + std::to_string(defect));
    }
  }
}

void TimeDependentHamiltonian::apply(double t, std::span<const complex> x, std::span<complex> y,
                                     Execution exec) const {
  std::fill(y.begin(), y.end(), complex{0.0, 0.0});
  for (const auto& term : terms_) {
    const double c = term.coefficient ? term.coefficient(t) : 1.0;
    if (c != 0.0) kernels::spmv_accumulate(term.op, c, x, y, exec);
  }
}

SparseOperator TimeDependentHamiltonian::at(double t) const {
  SparseOperator total(basis());
  for (const auto& term : terms_) {
    const double c = term.coefficient ? term.coefficient(t) : 1.0;
    total = total + complex(c, 0.0) * term.op;
  }
  return total;
}

EvolveStats evolve(StateVector v, const TimeDependentHamiltonian& h,
                   std::span<const double> t_grid, const EvolveOptions& options,
                   const TrajectoryObserver& observe) {
  if (!(options.tol > 0.0)) throw ValidationError("evolution tolerance must be positive");
  if (options.max_krylov < 2) throw ValidationError("Krylov dimension must be at least 2");
  if (t_grid.empty()) throw ValidationError("time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw ValidationError("time grid must be strictly increasing");
    }
  }
  if (!(v.basis() == h.basis())) {
    throw StructuralError("state and Hamiltonian live on different bases");
  }
  h.validate();
  v.require_normalized(1e-10);

  EvolveStats stats;
  const bool autonomous = h.time_independent();
  const double span = t_grid.back() - t_grid.front();
  const double min_step = options.min_step_fraction * std::max(span, 1.0);
  Vec state(v.amplitudes().begin(), v.amplitudes().end());
  double dt = t_grid.size() > 1 ? std::min(options.max_step, t_grid[1] - t_grid[0])
                                : options.max_step;

  if (observe) observe(t_grid.front(), v);
  for (std::size_t g = 1; g < t_grid.size(); ++g) {
    double t = t_grid[g - 1];
    const double target = t_grid[g];
    while (t < target) {
      double step = std::min(dt, target - t);
      const bool truncated = step < dt;
      if (target - (t + step) < 1e-14 * std::max(1.0, std::abs(target))) step = target - t;
      if (step < min_step) {
        std::ostringstream msg;
        msg << "step size underflow at t = " << t << ": dt = " << step
            << " < " << min_step << " after " << stats.rejected_steps
            << " rejected steps (tol = " << options.tol << ")";
        throw IntegrationError(msg.str());
      }
      const double budget = options.tol * step;
      double next_dt = step;
      bool accepted = false;
      Vec next;
      if (autonomous) {
        auto r = krylov_step(h, t + 0.5 * step, state, step, budget, options.max_krylov,
                             options.exec, stats.matvecs);
        if (r.converged) {
          accepted = true;
          next = std::move(r.y);
          if (r.dimension <= options.max_krylov / 2) {
            next_dt = step * 1.5;
          } else if (r.dimension > 3 * options.max_krylov / 4) {
            next_dt = step * 0.8;
          }
        } else {
          next_dt = step * 0.5;
        }
      } else {
        auto full = krylov_step(h, t + 0.5 * step, state, step, 0.25 * budget,
                                options.max_krylov, options.exec, stats.matvecs);
        auto half = krylov_step(h, t + 0.25 * step, state, 0.5 * step, 0.125 * budget,
                                options.max_krylov, options.exec, stats.matvecs);
        KrylovResult second;
        if (half.converged) {
          second = krylov_step(h, t + 0.75 * step, half.y, 0.5 * step, 0.125 * budget,
                               options.max_krylov, options.exec, stats.matvecs);
        }
        if (full.converged && half.converged && second.converged) {
          const double err = distance(full.y, second.y);
          const double factor = err == 0.0 ? 2.0 : 0.9 * std::cbrt(0.5 * budget / err);
          if (err <= 0.5 * budget) {
            accepted = true;
            next = std::move(second.y);
            next_dt = step * std::clamp(factor, 0.2, 2.0);
          } else {
            next_dt = step * std::clamp(factor, 0.1, 0.9);
          }
        } else {
          next_dt = step * 0.5;
        }
      }
      if (accepted) {
        state = std::move(next);
        t = (step == target - t) ? target : t + step;
        ++stats.accepted_steps;
        const double drift = std::abs(kernels::norm(state, options.exec) - 1.0);
        stats.max_norm_drift = std::max(stats.max_norm_drift, drift);
        dt = truncated ? std::max(dt, next_dt) : next_dt;
      } else {
        ++stats.rejected_steps;
        dt = next_dt;
      }
      dt = std::min(dt, options.max_step);
    }
    if (observe) observe(target, StateVector(v.basis(), state));
  }
  return stats;
}

std::vector<StateVector> evolve_trajectory(const StateVector& v,
                                           const TimeDependentHamiltonian& h,
                                           std::span<const double> t_grid,
                                           const EvolveOptions& options) {
  std::vector<StateVector> out;
  out.reserve(t_grid.size());
  evolve(v, h, t_grid, options, [&](double, const StateVector& s) { out.push_back(s); });
  return out;
}

StateVector dense_propagate(const SparseOperator& h, const StateVector& v, double t) {
  if (!(h.basis() == v.basis())) {
    throw StructuralError("state and Hamiltonian live on different bases");
  }
  const double defect = h.hermiticity_defect();
  if (defect > 1e-12 * std::max(1.0, h.max_abs())) {
    throw ValidationError("dense propagation needs a hermitian Hamiltonian");
  }
  const Eigen::MatrixXcd dense = h.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  const auto n = static_cast<Eigen::Index>(v.dimension());
  Eigen::VectorXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = v[static_cast<std::size_t>(i)];
  Eigen::VectorXcd coeffs = es.eigenvectors().adjoint() * x;
  for (Eigen::Index i = 0; i < n; ++i) {
    coeffs(i) *= std::exp(complex(0.0, -t * es.eigenvalues()(i)));
  }
  const Eigen::VectorXcd y = es.eigenvectors() * coeffs;
  return StateVector(v.basis(), std::vector<complex>(y.data(), y.data() + n));
}

}  // namespace josephson::fock
