#pragma once

#include <Eigen/Dense>
#include <memory>

#include "bek/grid.hpp"

namespace bek {

struct OperatorOptions {
  double n = 1.0;            // condensate density constant
  int nu_quad_points = 512;  // x-resolution of the collision-frequency sweep
  bool symmetrize = true;    // replace L by its weighted symmetric part
  bool deflate = true;       // make psi_E, psi_M exact null vectors
};

// Closed-form reduced kernels. Zero whenever the triangle indicator or any
// |p_i| >= lambda cutoff fails; the cutoff keeps e^{delta}-1 away from zero.
double kernel_k1(const GridNode& p, const GridNode& p2, double lambda);
double kernel_k2(const GridNode& p, const GridNode& p1, double lambda);
double kernel_k3(const GridNode& p, const GridNode& p3, double lambda);

// Collision frequency nu(p), split into its two terms. Each term reduces to
// a 2D integral over (x, y); y is integrated in closed form (Bose-function
// antiderivatives), x by composite midpoint with `points` cells.
double nu_term1(const GridNode& p, double lambda, double n, int points);
double nu_term2(const GridNode& p, double lambda, double n, int points);

// Measure of the term-1 domain at lambda = 0 (the ellipse); the closed form
// is (1/3)(p_x^2 + 2 p_r^2)^{3/2}.
double term1_measure(const GridNode& p, int points);
double term1_measure_closed_form(const GridNode& p);

// Discretized L = K - nu on a momentum grid.
class CollisionOperator {
 public:
  CollisionOperator(std::shared_ptr<const MomentumGrid> grid,
                    const OperatorOptions& opts);

  const MomentumGrid& grid() const { return *grid_; }
  std::shared_ptr<const MomentumGrid> grid_ptr() const { return grid_; }
  const OperatorOptions& options() const { return opts_; }
  const PlanckTable& planck() const { return planck_; }

  const Eigen::VectorXd& nu() const { return nu_; }
  const Eigen::MatrixXd& K() const { return K_; }
  // raw discretization: K - diag(nu)
  Eigen::MatrixXd L_raw() const;
  // the operator used by the solver, honoring symmetrize/deflate options
  const Eigen::MatrixXd& L() const { return L_; }

  // rho_i = (P/(1+P))_i * weight_i; the discrete weighted inner product
  const Eigen::VectorXd& rho() const { return rho_; }
  double inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
    return (rho_.array() * f.array() * g.array()).sum();
  }

  // ||rho K - (rho K)^T||_F / ||rho K||_F of the raw assembly
  double symmetry_defect() const { return symmetry_defect_; }

  double n() const { return opts_.n; }

 private:
  std::shared_ptr<const MomentumGrid> grid_;
  OperatorOptions opts_;
  PlanckTable planck_;
  Eigen::VectorXd nu_;
  Eigen::MatrixXd K_;
  Eigen::MatrixXd L_;
  Eigen::VectorXd rho_;
  double symmetry_defect_ = 0.0;
};

struct SpectrumReport {
  double alpha0 = 0.0;        // largest K/nu eigenvalue off the kernel, < 1
  double nu0_spectral = 0.0;  // spectral-gap constant of Eq-type (Lf,f) bound
  double nu0_fit = 0.0;       // min nu(p)/(1+|p|)^3
  double nu1_fit = 0.0;       // max nu(p)/(1+|p|)^3
  double kernel_residual_E = 0.0;  // ||L psi_E||_rho / ||nu psi_E||_rho
  double kernel_residual_M = 0.0;
  double symmetry_defect = 0.0;
  int near_zero_count = 0;  // eigenvalues of L within kernel tolerance of 0
  double kernel_tolerance = 0.0;
  // kernel eigenvectors of the gap eigenproblem, for orthogonal test vectors
  Eigen::MatrixXd kernel_vectors;
};

SpectrumReport spectral_report(const CollisionOperator& op);

}  // namespace bek
