#include "bek/region.hpp"

#include <algorithm>
#include <cmath>

namespace bek {
namespace {

// Roots of f - g inside (a, b).
void add_intersections(const Quad& f, const Quad& g, double a, double b,
                       std::vector<double>& out) {
  const double c2 = f.c2 - g.c2;
  const double c1 = f.c1 - g.c1;
  const double c0 = f.c0 - g.c0;
  const double eps = 1e-14;
  if (std::abs(c2) < eps) {
    if (std::abs(c1) < eps) return;
    const double r = -c0 / c1;
    if (r > a && r < b) out.push_back(r);
    return;
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc <= 0.0) return;
  const double s = std::sqrt(disc);
  // numerically stable pair
  const double q = -0.5 * (c1 + (c1 >= 0.0 ? s : -s));
  const double r1 = q / c2;
  const double r2 = (std::abs(q) > 0.0) ? c0 / q : r1;
  if (r1 > a && r1 < b) out.push_back(r1);
  if (r2 > a && r2 < b && r2 != r1) out.push_back(r2);
}

double eval_min(const std::vector<Quad>& qs, double x) {
  double v = qs[0].eval(x);
  for (size_t i = 1; i < qs.size(); ++i) v = std::min(v, qs[i].eval(x));
  return v;
}

double eval_max(const std::vector<Quad>& qs, double x) {
  double v = qs[0].eval(x);
  for (size_t i = 1; i < qs.size(); ++i) v = std::max(v, qs[i].eval(x));
  return v;
}

}  // namespace

ClipResult clip_region(const std::vector<Quad>& uppers,
                       const std::vector<Quad>& lowers,
                       double a, double b) {
  ClipResult res;
  if (!(b > a) || uppers.empty() || lowers.empty()) return res;

  std::vector<double> pts;
  pts.reserve(16);
  pts.push_back(a);
  pts.push_back(b);
  for (size_t i = 0; i < uppers.size(); ++i)
    for (size_t j = i + 1; j < uppers.size(); ++j)
      add_intersections(uppers[i], uppers[j], a, b, pts);
  for (size_t i = 0; i < lowers.size(); ++i)
    for (size_t j = i + 1; j < lowers.size(); ++j)
      add_intersections(lowers[i], lowers[j], a, b, pts);
  for (const auto& u : uppers)
    for (const auto& l : lowers) add_intersections(u, l, a, b, pts);
  std::sort(pts.begin(), pts.end());

  // 3-point Gauss-Legendre on [-1, 1]
  static const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

  double area = 0.0, mx = 0.0, my = 0.0;
  for (size_t s = 0; s + 1 < pts.size(); ++s) {
    const double xa = pts[s], xb = pts[s + 1];
    if (xb - xa < 1e-15) continue;
    const double xm = 0.5 * (xa + xb);
    if (eval_min(uppers, xm) <= eval_max(lowers, xm)) continue;
    const double h = 0.5 * (xb - xa);
    for (int g = 0; g < 3; ++g) {
      const double x = xm + h * gx[g];
      const double hi = eval_min(uppers, x);
      const double lo = eval_max(lowers, x);
      const double dy = std::max(0.0, hi - lo);
      const double wgt = gw[g] * h;
      area += wgt * dy;
      mx += wgt * x * dy;
      my += wgt * 0.5 * (hi * hi - lo * lo);
    }
  }
  res.area = area;
  if (area > 0.0) {
    res.cx = mx / area;
    res.cy = my / area;
  }
  return res;
}

}  // namespace bek
