#pragma once

#include <cstddef>
#include <cstdint>

namespace josephson::fock {

// Occupation pattern of the modes: bit j set means mode j is occupied.
using FockState = std::uint32_t;

inline constexpr int kDefaultModeCap = 24;
inline constexpr int kMaxModeCap = 30;

// Occupation-number basis over n fermionic modes. Mode j is bit j; the
// physical meaning of j (region, site, spin) is assigned by the model layer.
class FockBasis {
 public:
  // Throws CapacityError when n_modes exceeds mode_cap (itself at most 30).
  explicit FockBasis(int n_modes, int mode_cap = kDefaultModeCap);

  int n_modes() const { return n_modes_; }
  std::size_t dimension() const { return std::size_t{1} << n_modes_; }

  friend bool operator==(const FockBasis&, const FockBasis&) = default;

 private:
  int n_modes_;
};

inline FockBasis build_basis(int n_modes, int mode_cap = kDefaultModeCap) {
  return FockBasis(n_modes, mode_cap);
}

}  // namespace josephson::fock
