#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "bek/hydro.hpp"

using namespace bek;

namespace {

std::shared_ptr<MomentumGrid> test_grid() {
  return std::make_shared<MomentumGrid>(1.0, 6.0, 16, 16, true);
}

Eigen::VectorXd random_vec(const MomentumGrid& g, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd f(g.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double c = 1.0 + std::sqrt(g.node(i).psq);
    f[i] = uni(rng) / (c * c * c);
  }
  return f;
}

}  // namespace

TEST_CASE("moment constants are positive and consistent") {
  HydroBasis basis(test_grid());
  CHECK(basis.alpha2() > 0.0);
  CHECK(basis.beta2() > 0.0);
  CHECK(basis.gamma() > 0.0);
  // alpha2 and beta2 are the squared rho-norms of the invariants
  const auto& rho = basis.rho();
  const double a2 =
      (rho.array() * basis.psi_M().array().square()).sum();
  const double b2 =
      (rho.array() * basis.psi_E().array().square()).sum();
  CHECK(a2 == doctest::Approx(basis.alpha2()).epsilon(1e-13));
  CHECK(b2 == doctest::Approx(basis.beta2()).epsilon(1e-13));
  // the invariants are rho-orthogonal by parity
  const double cross =
      (rho.array() * basis.psi_E().array() * basis.psi_M().array()).sum();
  CHECK(std::abs(cross) <= 1e-14 * basis.beta2());
}

TEST_CASE("decomposition is a projection") {
  auto g = test_grid();
  HydroBasis basis(g);
  const Eigen::VectorXd f =
      0.7 * basis.psi_E() - 1.3 * basis.psi_M() + random_vec(*g, 5);
  double a, b;
  basis.decompose(f, a, b);
  const Eigen::VectorXd w = basis.remainder(f);
  double aw, bw;
  basis.decompose(w, aw, bw);
  CHECK(std::abs(aw) <= 1e-12 * std::abs(a));
  CHECK(std::abs(bw) <= 1e-12 * std::abs(b));
  // idempotence: re-decomposing f - w returns the same coefficients
  double a2, b2;
  basis.decompose(f - w, a2, b2);
  CHECK(a2 == doctest::Approx(a).epsilon(1e-12));
  CHECK(b2 == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("energy flux of the momentum mode is gamma") {
  HydroBasis basis(test_grid());
  CHECK(basis.energy_flux(basis.psi_M()) ==
        doctest::Approx(basis.gamma()).epsilon(1e-13));
  // even mode carries no flux
  CHECK(std::abs(basis.energy_flux(basis.psi_E())) <= 1e-14 * basis.gamma());
  // flux/coefficient link: flux = b gamma + flux(w)
  auto g = test_grid();
  const Eigen::VectorXd f =
      0.4 * basis.psi_E() + 0.9 * basis.psi_M() + random_vec(*g, 9);
  double a, b;
  basis.decompose(f, a, b);
  const Eigen::VectorXd w = basis.remainder(f);
  CHECK(basis.energy_flux(f) ==
        doctest::Approx(b * basis.gamma() + basis.energy_flux(w))
            .epsilon(1e-12));
}

TEST_CASE("the two entropy-flux formulas agree identically") {
  auto g = test_grid();
  HydroBasis basis(g);
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    const Eigen::VectorXd f = 0.5 * basis.psi_E() - 0.2 * basis.psi_M() +
                              random_vec(*g, seed);
    const double w1 = basis.entropy_flux(f);
    const double w2 = basis.entropy_flux_from_w(f);
    CHECK(w1 == doctest::Approx(w2).epsilon(1e-11));
  }
}

TEST_CASE("decay constants follow the closed formulas") {
  HydroBasis basis(test_grid());
  DecayConstants c = decay_constants(basis, 0.42);
  CHECK(c.c2 >= 2.0 * (1.0 - 1e-12));  // Cauchy-Schwarz lower bound
  CHECK(c.c3 == c.c2);
  CHECK(c.c1 == std::min(0.5 * 0.42, 0.5 * 0.42 / c.c2));
  // homogeneity in nu0
  DecayConstants c2x = decay_constants(basis, 0.84);
  CHECK(c2x.c1 == doctest::Approx(2.0 * c.c1).epsilon(1e-15));
  CHECK(c.c1 <= 0.5 * c.nu0);
}

TEST_CASE("gamma extrapolation hits the series value") {
  const double pi = std::numbers::pi;
  const double oracle = gamma_series_oracle(200000);
  // zeta(5/2) = 1.3414872572509171
  const double closed = 1.25 * std::pow(pi, 1.5) * 1.3414872572509171;
  CHECK(oracle == doctest::Approx(closed).epsilon(1e-6));
  const double extrap = gamma_extrapolated(1.0, 6.0, 128, 128);
  CHECK(std::abs(extrap - oracle) / oracle < 1e-2);
}
