#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "bek/grid.hpp"

namespace bek {

struct IndataSpec {
  std::string generator = "zero";  // zero | kernel_mode | bump | random
  double amplitude = 1.0;
  double center = 1.0;   // bump position in p_x
  double width = 0.5;    // bump width
  double a_E = 0.0;      // kernel_mode coefficients
  double b_M = 0.0;
  uint64_t seed = 1234;
};

// per-node in-data vector; the solver only reads the p_x > 0 entries at the
// boundary but the full vector is convenient for exact-solution tests
Eigen::VectorXd make_indata(const MomentumGrid& grid, const IndataSpec& spec);

}  // namespace bek
