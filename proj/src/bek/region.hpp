#pragma once

#include <vector>

namespace bek {

// Quadratic curve y = c0 + c1*x + c2*x^2.
struct Quad {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double eval(double x) const { return c0 + x * (c1 + x * c2); }
};

// Area, centroid and validity of the region
//   { (x,y) : a <= x <= b,  max_i lo_i(x) < y < min_j hi_j(x) }
// where all bounding curves are quadratics in x.
struct ClipResult {
  double area = 0.0;
  double cx = 0.0;   // centroid, valid when area > 0
  double cy = 0.0;
};

// Exact clipping: breakpoints are pairwise curve intersections, each
// segment integrates a fixed quadratic height with 3-point Gauss.
ClipResult clip_region(const std::vector<Quad>& uppers,
                       const std::vector<Quad>& lowers,
                       double a, double b);

}  // namespace bek
