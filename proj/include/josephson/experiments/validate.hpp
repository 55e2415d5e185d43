#pragma once

#include <string>
#include <cstdint>
#include <vector>

#include "josephson/junction/spec.hpp"

namespace josephson::experiments {

struct CheckResult {
  std::string name;
  double value = 0.0;      // measured defect or statistic
  double threshold = 0.0;  // pass when value < threshold (ac bin distance: <=)
  bool passed = false;
  bool skipped = false;
  std::string detail;
};

// max over mode pairs of ‖{a_i, a†_j} − δ_ij‖ and ‖{a_i, a_j}‖.
double car_defect(int n_modes);

// The invariant suite on `spec` plus the fixed two-site and M = 64 models.
// Checks that need the exact engine are skipped when spec has more than
// 12 modes. Failures inside a check are reported, never thrown.
std::vector<CheckResult> validation_suite(const junction::JunctionSpec& spec,
                                          double tolerance = 1e-10, std::uint64_t seed = 0);

}  // namespace josephson::experiments
