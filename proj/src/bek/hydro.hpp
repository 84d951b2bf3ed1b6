#pragma once

#include <Eigen/Dense>
#include <memory>

#include "bek/grid.hpp"

namespace bek {

// Collision-invariant directions and the moment constants built from them.
class HydroBasis {
 public:
  explicit HydroBasis(std::shared_ptr<const MomentumGrid> grid);

  const Eigen::VectorXd& psi_E() const { return psi_E_; }
  const Eigen::VectorXd& psi_M() const { return psi_M_; }
  const Eigen::VectorXd& rho() const { return rho_; }

  double alpha2() const { return alpha2_; }  // int p_x^2 P(1+P)
  double beta2() const { return beta2_; }    // int |p|^4 P(1+P)
  double gamma() const { return gamma_; }    // int p_x^2 |p|^2 P(1+P)
  double px4() const { return px4_; }        // int p_x^4 P(1+P)
  double px2p4() const { return px2p4_; }    // int p_x^2 |p|^4 P(1+P)

  // hydrodynamic coefficients of f = a psi_E + b psi_M + w
  void decompose(const Eigen::VectorXd& f, double& a, double& b) const;
  Eigen::VectorXd remainder(const Eigen::VectorXd& f) const;

  // int p_x |p|^2 f P dp; equals gamma at f = psi_M
  double energy_flux(const Eigen::VectorXd& f) const;
  // int p_x^2 f P dp
  double momentum_flux(const Eigen::VectorXd& f) const;
  // W = (1/2) int p_x f^2 P/(1+P) dp
  double entropy_flux(const Eigen::VectorXd& f) const;
  // same quantity assembled from the hydro decomposition; identical up to
  // roundoff by the mirror symmetry of the grid
  double entropy_flux_from_w(const Eigen::VectorXd& f) const;

  const MomentumGrid& grid() const { return *grid_; }
  std::shared_ptr<const MomentumGrid> grid_ptr() const { return grid_; }

 private:
  std::shared_ptr<const MomentumGrid> grid_;
  Eigen::VectorXd psi_E_, psi_M_, rho_;
  Eigen::VectorXd flux_E_, flux_M_;  // rho p_x psi_E, rho p_x psi_M
  double alpha2_ = 0.0, beta2_ = 0.0, gamma_ = 0.0;
  double px4_ = 0.0, px2p4_ = 0.0;
};

struct DecayConstants {
  double nu0 = 0.0;
  double c2 = 0.0;  // (2/gamma) sqrt(int p_x^4 P(1+P) int p_x^2 |p|^4 P(1+P))
  double c3 = 0.0;  // equals c2 (same Cauchy-Schwarz pairing)
  double c1 = 0.0;  // min{nu0/2, nu0/(2 c2)}
};

DecayConstants decay_constants(const HydroBasis& basis, double nu0);

// gamma with the cutoffs removed: Richardson in lambda (lambda, lambda/2)
// over dedicated quadrature grids; the p_max tail is exponentially small.
double gamma_extrapolated(double lambda, double p_max, int n_x, int n_y);

// the lambda -> 0, p_max -> infinity limit of gamma by term-by-term Gaussian
// moments of P(1+P) = sum_k k e^{-k|p|^2}; equals (5/4) pi^{3/2} zeta(5/2)
double gamma_series_oracle(int terms);

}  // namespace bek
