#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bek/collision.hpp"
#include "bek/hydro.hpp"

namespace bek {

enum class Scheme { direct_sparse, source_iteration, epsilon_chain };

Scheme scheme_from_string(const std::string& s);
std::string scheme_to_string(Scheme s);

struct SlabConfig {
  double l = 60.0;
  int n_cells = 240;       // x-intervals; points are 0..n_cells
  double epsilon = 0.0;    // regularization; 0 = unregularized
  Scheme scheme = Scheme::direct_sparse;
  double tol = 1e-9;
  int max_iter = 100000;
  double eps0 = 0.5;       // epsilon_chain start
  double eps_min = 1e-4;   // epsilon_chain floor before extrapolation
};

struct ConvergenceHistory {
  std::vector<double> residuals;
  std::vector<double> eps_values;  // epsilon_chain schedule
  int iterations = 0;
  bool converged = true;
};

// shifted slab solution: columns are x-points, rows momentum nodes
struct SlabField {
  Eigen::MatrixXd f;
  ConvergenceHistory history;
};

SlabField solve_slab(const Eigen::VectorXd& f0_shifted, const SlabConfig& cfg,
                     const CollisionOperator& op);

struct MilneSolution {
  SlabConfig cfg;
  double E_target = 0.0;
  std::vector<double> x;
  Eigen::MatrixXd f;       // full solution, shift added back
  Eigen::MatrixXd ftilde;  // zero-flux shifted field
  // trajectories, one entry per x-point; E and W are the conservative
  // staggered forms on interior points and pointwise at x = l
  std::vector<double> a, b, E, W, wnorm2;
  double a_inf = 0.0, b_inf = 0.0;
  ConvergenceHistory history;
};

MilneSolution solve_milne(const Eigen::VectorXd& f0, double E_flux,
                          const SlabConfig& cfg, const CollisionOperator& op,
                          const HydroBasis& basis);

struct DecayReport {
  bool eta_defined = false;
  std::string eta_flag;  // "ok", "kernel-mode"
  double eta_fit = 0.0;
  double c_fit = 0.0;  // prefactor of the fitted c e^{-2 eta x}
  double a_inf = 0.0, b_inf = 0.0;
  double b_inf_conserved = 0.0;  // mean staggered energy flux / gamma
  double drift_a = 0.0;  // max_x deviation of gamma a + int p_x^2 w P dp
  double drift_b = 0.0;  // max_x deviation of gamma b + int p_x|p|^2 w P dp
  double flux_drift = 0.0;
  double entropy_increase = 0.0;  // max over steps of W_{j+1} - W_j
  double entropy_min = 0.0;
  double window_x0 = 0.0, window_x1 = 0.0;
  int fit_samples = 0;
};

DecayReport decay_diagnostics(const MilneSolution& sol,
                              const DecayConstants& consts,
                              const HydroBasis& basis);

// sup over x of the weighted L2 distance between two solutions of the same
// problem, relative to the solution scale
double cross_validate(const MilneSolution& sa, const MilneSolution& sb,
                      const MomentumGrid& grid);

// characteristic-integral resolvent of the epsilon-regularized transport
// operator: g solves g/2 - (p_x/(2 eps)) dg/dx = f with g(0, p_x>0) = 0 and
// specular reflection at x = l; exact for piecewise-linear f
Eigen::MatrixXd transport_resolvent(const Eigen::MatrixXd& f, double eps,
                                    double l, const MomentumGrid& grid);

// discrete residual of the defining equation, central differences in x
Eigen::MatrixXd transport_resolvent_residual(const Eigen::MatrixXd& f,
                                             const Eigen::MatrixXd& g,
                                             double eps, double l,
                                             const MomentumGrid& grid);

}  // namespace bek
