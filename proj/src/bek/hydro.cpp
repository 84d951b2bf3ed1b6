#include "bek/hydro.hpp"

#include <cmath>
#include <numbers>

namespace bek {

HydroBasis::HydroBasis(std::shared_ptr<const MomentumGrid> grid)
    : grid_(std::move(grid)) {
  const MomentumGrid& g = *grid_;
  const int np = static_cast<int>(g.size());
  psi_E_.resize(np);
  psi_M_.resize(np);
  rho_.resize(np);
  flux_E_.resize(np);
  flux_M_.resize(np);
  for (int i = 0; i < np; ++i) {
    const GridNode& nd = g.node(i);
    const double P = planck_P(nd.psq);
    const double M = planck_M(nd.psq);
    psi_E_[i] = nd.psq * (1.0 + P);
    psi_M_[i] = nd.px * (1.0 + P);
    rho_[i] = M * nd.weight;
    // rho p_x psi = weight p_x (...) P since M (1+P) = P
    flux_E_[i] = nd.weight * nd.px * nd.psq * P;
    flux_M_[i] = nd.weight * nd.px * nd.px * P;
    const double PP = P * (1.0 + P) * nd.weight;
    alpha2_ += nd.px * nd.px * PP;
    beta2_ += nd.psq * nd.psq * PP;
    gamma_ += nd.px * nd.px * nd.psq * PP;
    px4_ += nd.px * nd.px * nd.px * nd.px * PP;
    px2p4_ += nd.px * nd.px * nd.psq * nd.psq * PP;
  }
}

void HydroBasis::decompose(const Eigen::VectorXd& f, double& a,
                           double& b) const {
  a = (rho_.array() * psi_E_.array() * f.array()).sum() / beta2_;
  b = (rho_.array() * psi_M_.array() * f.array()).sum() / alpha2_;
}

Eigen::VectorXd HydroBasis::remainder(const Eigen::VectorXd& f) const {
  double a, b;
  decompose(f, a, b);
  return f - a * psi_E_ - b * psi_M_;
}

double HydroBasis::energy_flux(const Eigen::VectorXd& f) const {
  return flux_E_.dot(f);
}

double HydroBasis::momentum_flux(const Eigen::VectorXd& f) const {
  return flux_M_.dot(f);
}

double HydroBasis::entropy_flux(const Eigen::VectorXd& f) const {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i)
    s += rho_[i] * grid_->node(i).px * f[i] * f[i];
  return 0.5 * s;
}

double HydroBasis::entropy_flux_from_w(const Eigen::VectorXd& f) const {
  double a, b;
  decompose(f, a, b);
  const Eigen::VectorXd w = f - a * psi_E_ - b * psi_M_;
  // the psi_E^2 and psi_M^2 diagonal terms vanish by mirror symmetry
  double quad = 0.0;
  for (int i = 0; i < w.size(); ++i)
    quad += rho_[i] * grid_->node(i).px * w[i] * w[i];
  return a * b * gamma_ + a * energy_flux(w) + b * momentum_flux(w) +
         0.5 * quad;
}

DecayConstants decay_constants(const HydroBasis& basis, double nu0) {
  DecayConstants c;
  c.nu0 = nu0;
  c.c2 = 2.0 / basis.gamma() * std::sqrt(basis.px4() * basis.px2p4());
  c.c3 = c.c2;
  c.c1 = std::min(0.5 * nu0, 0.5 * nu0 / c.c2);
  return c;
}

double gamma_extrapolated(double lambda, double p_max, int n_x, int n_y) {
  auto gamma_on = [&](double lam) {
    MomentumGrid g(lam, p_max, n_x, n_y, true);
    double s = 0.0;
    for (const GridNode& nd : g.nodes()) {
      const double P = planck_P(nd.psq);
      s += nd.px * nd.px * nd.psq * P * (1.0 + P) * nd.weight;
    }
    return s;
  };
  // the removed-core deficit is ~ lambda^3, so one Richardson step over
  // (lambda, lambda/2) leaves O(lambda^7)
  const double g1 = gamma_on(lambda);
  const double g2 = gamma_on(0.5 * lambda);
  return g2 + (g2 - g1) / 7.0;
}

double gamma_series_oracle(int terms) {
  // gamma = (4 pi / 3) int r^6 P(1+P) dr with P(1+P) = sum_k k e^{-k r^2}
  // and int r^6 e^{-k r^2} dr = (15/16) sqrt(pi) k^{-7/2}
  const double pi = std::numbers::pi;
  double zeta = 0.0;
  for (int k = terms; k >= 1; --k) zeta += std::pow(k, -2.5);
  return 4.0 * pi / 3.0 * 15.0 / 16.0 * std::sqrt(pi) * zeta;
}

}  // namespace bek
