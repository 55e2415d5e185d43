#include "josephson/junction/spec.hpp"

#include <cmath>
#include <string>

#include "josephson/errors.hpp"

namespace josephson::junction {

int JunctionSpec::sites_in(Region r) const {
  switch (r) {
    case Region::one:
      return L1;
    case Region::two:
      return L2;
    case Region::both:
      return L1 + L2;
  }
  return 0;
}

void JunctionSpec::validate() const {
  const auto finite = [](double x) { return std::isfinite(x); };
  if (L1 < 1) throw ValidationError("L1 must be at least 1, got " + std::to_string(L1));
  if (L2 < 1) throw ValidationError("L2 must be at least 1, got " + std::to_string(L2));
  if (!finite(t_hop)) throw ValidationError("t_hop must be finite");
  if (!finite(mu)) throw ValidationError("mu must be finite");
  if (!finite(g11) || g11 < 0) throw ValidationError("g11 must be finite and >= 0");
  if (!finite(g22) || g22 < 0) throw ValidationError("g22 must be finite and >= 0");
  if (!finite(g12)) throw ValidationError("g12 must be finite");
  if (!finite(charge_unit) || charge_unit <= 0) {
    throw ValidationError("charge_unit must be finite and > 0");
  }
  if (!finite(cross_hop)) throw ValidationError("cross_hop must be finite");
}

Eigen::MatrixXd hopping_matrix(int sites, double t_hop, Boundary boundary) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(sites, sites);
  for (int x = 0; x + 1 < sites; ++x) {
    h(x, x + 1) = -t_hop;
    h(x + 1, x) = -t_hop;
  }
  if (boundary == Boundary::periodic && sites > 2) {
    h(0, sites - 1) = -t_hop;
    h(sites - 1, 0) = -t_hop;
  }
  return h;
}

}  // namespace josephson::junction
