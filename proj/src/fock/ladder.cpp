#include "josephson/fock/ladder.hpp"

#include <algorithm>

namespace josephson::fock {

Monomial adjoint(std::span<const LadderOp> ops) {
  Monomial out;
  out.reserve(ops.size());
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) out.push_back(it->adjoint());
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

Polynomial Polynomial::scaled(complex factor) const {
  Polynomial out = *this;
  for (auto& t : out.terms_) t.coefficient *= factor;
  return out;
}

Polynomial Polynomial::adjoint() const {
  Polynomial out;
  for (const auto& t : terms_) out.add(std::conj(t.coefficient), fock::adjoint(t.ops));
  return out;
}

Polynomial operator+(Polynomial a, const Polynomial& b) {
  a += b;
  return a;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) {
      Monomial ops = x.ops;
      ops.insert(ops.end(), y.ops.begin(), y.ops.end());
      out.add(x.coefficient * y.coefficient, std::move(ops));
    }
  }
  return out;
}

}  // namespace josephson::fock
