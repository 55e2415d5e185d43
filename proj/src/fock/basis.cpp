#include "josephson/fock/basis.hpp"

#include <string>

#include "josephson/errors.hpp"

namespace josephson::fock {

FockBasis::FockBasis(int n_modes, int mode_cap) : n_modes_(n_modes) {
  if (mode_cap < 1 || mode_cap > kMaxModeCap) {
    throw ValidationError("mode cap must lie in [1, " + std::to_string(kMaxModeCap) +
                          "], got " + std::to_string(mode_cap));
  }
  if (n_modes < 1) {
    throw ValidationError("a Fock basis needs at least one mode, got " +
                          std::to_string(n_modes));
  }
  if (n_modes > mode_cap) {
    throw CapacityError("requested Fock dimension 2^" + std::to_string(n_modes) +
                        " exceeds the cap 2^" + std::to_string(mode_cap));
  }
}

}  // namespace josephson::fock
