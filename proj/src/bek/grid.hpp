#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bek {

struct InvalidDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One quadrature node in the reduced momentum variables (p_x, y = p_r^2),
// together with the rectangle cell it was clipped from.
struct GridNode {
  double px = 0.0;
  double y = 0.0;       // p_r^2 >= 0
  double psq = 0.0;     // |p|^2 = px^2 + y
  double weight = 0.0;  // represents pi * dp_x * dy on the truncated domain
  // owning cell (pre-clip), needed for kernel assembly
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  double cell_area = 0.0;  // clipped area, weight = pi * cell_area
  int mirror = -1;         // index of the (-px, y) partner node
};

// Cylindrically symmetric momentum quadrature on lambda <= |p| <= p_max.
// Composite midpoint cells in (p_x, y), clipped exactly against the two
// circles; mirrored in p_x so odd moments cancel by pairing.
class MomentumGrid {
 public:
  MomentumGrid(double lambda, double p_max, int n_x, int n_y,
               bool refine_near_cutoff);

  double lambda() const { return lambda_; }
  double p_max() const { return p_max_; }
  int n_x() const { return n_x_; }
  int n_y() const { return n_y_; }
  bool refined() const { return refine_; }
  size_t size() const { return nodes_.size(); }
  const std::vector<GridNode>& nodes() const { return nodes_; }
  const GridNode& node(size_t i) const { return nodes_[i]; }

  // sum of weights; equals (4*pi/3)(p_max^3 - lambda^3) up to clipping accuracy
  double volume() const;
  static double analytic_volume(double lambda, double p_max);

  // quadrature of a per-node integrand
  double moment(std::span<const double> values) const;

  uint64_t hash() const;

 private:
  double lambda_, p_max_;
  int n_x_, n_y_;
  bool refine_;
  std::vector<GridNode> nodes_;
};

// Equilibrium weight tables at the grid nodes.
struct PlanckTable {
  std::vector<double> P;        // 1/(e^{|p|^2} - 1)
  std::vector<double> M;        // e^{-|p|^2}, equals P/(1+P)
  std::vector<double> ratio;    // P/(1+P)
  std::vector<double> product;  // P(1+P)
};

PlanckTable planck_table(const MomentumGrid& grid);

// scalar helpers
double planck_P(double psq);
double planck_M(double psq);

}  // namespace bek
