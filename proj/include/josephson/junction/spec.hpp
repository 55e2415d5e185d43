#pragma once

#include <Eigen/Dense>

namespace josephson::junction {

enum class Boundary { open, periodic };
enum class Region { one = 1, two = 2, both = 3 };
enum class Spin { up = 0, down = 1 };

// Two lattice regions joined at an ideal phase boundary. Sites are numbered
// region-major (region 1 first), and each site carries an up and a down
// mode: mode = 2 * site + spin.
struct JunctionSpec {
  int L1 = 1;
  int L2 = 1;
  double t_hop = 1.0;
  double mu = 0.0;
  double g11 = 1.0;
  double g22 = 1.0;
  double g12 = 0.1;
  double charge_unit = 1.0;  // |e|
  Boundary boundary = Boundary::periodic;
  // Single-particle hopping across the boundary. Zero for an ideal junction;
  // nonzero only for null tests.
  double cross_hop = 0.0;

  // The 1/|Λ| normalization of the pairing interaction.
  double volume_norm() const { return static_cast<double>(L1 + L2); }
  int n_sites() const { return L1 + L2; }
  int n_modes() const { return 2 * n_sites(); }
  int sites_in(Region r) const;
  int first_site(Region r) const { return r == Region::two ? L1 : 0; }
  Region region_of_site(int site) const { return site < L1 ? Region::one : Region::two; }

  // Throws ValidationError naming the offending field.
  void validate() const;
};

inline int mode_index(int site, Spin s) { return 2 * site + static_cast<int>(s); }

// Hopping amplitudes h_xy for M sites: −t on each bond. Periodic chains
// close the ring only for M > 2 so no bond is counted twice.
Eigen::MatrixXd hopping_matrix(int sites, double t_hop, Boundary boundary);

}  // namespace josephson::junction
