#include "bek/generators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace bek {

Eigen::VectorXd make_indata(const MomentumGrid& grid, const IndataSpec& spec) {
  const int np = static_cast<int>(grid.size());
  Eigen::VectorXd f = Eigen::VectorXd::Zero(np);
  if (spec.generator == "zero") return f;
  if (spec.generator == "kernel_mode") {
    for (int i = 0; i < np; ++i) {
      const GridNode& nd = grid.node(i);
      const double opP = 1.0 + planck_P(nd.psq);
      f[i] = spec.a_E * nd.psq * opP + spec.b_M * nd.px * opP;
    }
    return f;
  }
  if (spec.generator == "bump") {
    const double s2 = spec.width * spec.width;
    for (int i = 0; i < np; ++i) {
      const GridNode& nd = grid.node(i);
      const double dx = nd.px - spec.center;
      f[i] = spec.amplitude * std::exp(-(dx * dx + nd.y) / s2);
    }
    return f;
  }
  if (spec.generator == "random") {
    // bounded in the (1+|p|)^3 data norm by construction
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i < np; ++i) {
      const double c = 1.0 + std::sqrt(grid.node(i).psq);
      f[i] = spec.amplitude * uni(rng) / (c * c * c);
    }
    return f;
  }
  throw std::invalid_argument("invalid-generator: " + spec.generator);
}

}  // namespace bek
