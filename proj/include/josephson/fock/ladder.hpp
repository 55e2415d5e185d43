#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "josephson/fock/basis.hpp"

namespace josephson::fock {

using complex = std::complex<double>;

enum class LadderKind : std::uint8_t { creation, annihilation };

struct LadderOp {
  int mode = 0;
  LadderKind kind = LadderKind::annihilation;

  bool is_creation() const { return kind == LadderKind::creation; }
  LadderOp adjoint() const {
    return {mode, is_creation() ? LadderKind::annihilation : LadderKind::creation};
  }
  friend bool operator==(const LadderOp&, const LadderOp&) = default;
};

inline LadderOp create(int mode) { return {mode, LadderKind::creation}; }
inline LadderOp annihilate(int mode) { return {mode, LadderKind::annihilation}; }

// Product of ladder operators in written order: the rightmost factor acts first.
using Monomial = std::vector<LadderOp>;

Monomial adjoint(std::span<const LadderOp> ops);

struct BitAction {
  FockState state;
  double sign;
};

// Jordan-Wigner action of a single ladder operator on a basis state.
// a†_j picks up (-1)^(number of occupied modes with index < j).
inline std::optional<BitAction> apply_ladder(LadderOp op, FockState s) {
  const FockState bit = FockState{1} << op.mode;
  const bool occupied = (s & bit) != 0;
  if (occupied == op.is_creation()) return std::nullopt;
  const double sign = (std::popcount(s & (bit - 1)) & 1) ? -1.0 : 1.0;
  return BitAction{s ^ bit, sign};
}

// Action of a monomial on a basis state; nullopt when it annihilates the state.
inline std::optional<BitAction> apply_monomial(std::span<const LadderOp> ops, FockState s) {
  double sign = 1.0;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const auto step = apply_ladder(*it, s);
    if (!step) return std::nullopt;
    s = step->state;
    sign *= step->sign;
  }
  return BitAction{s, sign};
}

struct Term {
  complex coefficient;
  Monomial ops;
};

// Formal linear combination of ladder monomials. No normal ordering or
// simplification is attempted; both evaluation routes (matrix and Wick)
// consume the terms as written.
class Polynomial {
 public:
  Polynomial() = default;

  void add(complex coefficient, Monomial ops) {
    terms_.push_back({coefficient, std::move(ops)});
  }
  Polynomial& operator+=(const Polynomial& other);

  Polynomial scaled(complex factor) const;
  Polynomial adjoint() const;

  std::span<const Term> terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

 private:
  std::vector<Term> terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
// Product in written order: every term of a followed by every term of b.
Polynomial operator*(const Polynomial& a, const Polynomial& b);

}  // namespace josephson::fock
