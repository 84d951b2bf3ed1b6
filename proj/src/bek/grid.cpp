#include "bek/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "bek/region.hpp"

namespace bek {

namespace {

constexpr double kPi = std::numbers::pi;

struct CellGeom {
  double x0, x1, y0, y1;
};

}  // namespace

MomentumGrid::MomentumGrid(double lambda, double p_max, int n_x, int n_y,
                           bool refine_near_cutoff)
    : lambda_(lambda), p_max_(p_max), n_x_(n_x), n_y_(n_y),
      refine_(refine_near_cutoff) {
  if (!(lambda > 0.0) || !(p_max > lambda))
    throw InvalidDomain("invalid-domain: require 0 < lambda < p_max");
  if (n_x < 4 || n_y < 4)
    throw InvalidDomain("invalid-domain: require n_x, n_y >= 4");
  if (n_x % 2 != 0)
    throw InvalidDomain("invalid-domain: n_x must be even (p_x symmetry)");

  const double y_max = p_max * p_max;
  const double dx = p_max / (n_x / 2);  // cells on p_x > 0 half, then mirrored
  const double dy = y_max / n_y;

  const Quad outer{p_max * p_max, 0.0, -1.0};   // y < p_max^2 - x^2
  const Quad inner{lambda * lambda, 0.0, -1.0}; // y > lambda^2 - x^2

  std::vector<GridNode> half;
  auto emit_cell = [&](const CellGeom& c, auto&& self, int depth) -> void {
    const std::vector<Quad> ups = {Quad{c.y1, 0.0, 0.0}, outer};
    const std::vector<Quad> los = {Quad{c.y0, 0.0, 0.0}, inner};
    const ClipResult clip = clip_region(ups, los, c.x0, c.x1);
    if (clip.area <= 0.0) return;
    const double full = (c.x1 - c.x0) * (c.y1 - c.y0);
    const bool partial = clip.area < full * (1.0 - 1e-12);
    if (partial && refine_ && depth < 2) {
      const double xm = 0.5 * (c.x0 + c.x1), ym = 0.5 * (c.y0 + c.y1);
      self(CellGeom{c.x0, xm, c.y0, ym}, self, depth + 1);
      self(CellGeom{xm, c.x1, c.y0, ym}, self, depth + 1);
      self(CellGeom{c.x0, xm, ym, c.y1}, self, depth + 1);
      self(CellGeom{xm, c.x1, ym, c.y1}, self, depth + 1);
      return;
    }
    GridNode nd;
    nd.x0 = c.x0; nd.x1 = c.x1; nd.y0 = c.y0; nd.y1 = c.y1;
    nd.cell_area = clip.area;
    nd.weight = kPi * clip.area;
    if (!partial) {
      nd.px = 0.5 * (c.x0 + c.x1);
      nd.y = 0.5 * (c.y0 + c.y1);
    } else {
      nd.px = clip.cx;
      nd.y = clip.cy;
      const double r2 = nd.px * nd.px + nd.y;
      if (r2 < lambda_ * lambda_ || r2 > p_max_ * p_max_ || nd.y < c.y0 ||
          nd.y > c.y1) {
        // centroid of a crescent cell can fall outside; midpoint of the
        // vertical slice through cx is always interior
        const double hi = std::min(c.y1, outer.eval(nd.px));
        const double lo = std::max(c.y0, std::max(0.0, inner.eval(nd.px)));
        nd.y = 0.5 * (hi + lo);
      }
    }
    nd.psq = nd.px * nd.px + nd.y;
    half.push_back(nd);
  };

  for (int ix = 0; ix < n_x / 2; ++ix) {
    for (int iy = 0; iy < n_y; ++iy) {
      CellGeom c{ix * dx, (ix + 1) * dx, iy * dy, (iy + 1) * dy};
      emit_cell(c, emit_cell, 0);
    }
  }

  nodes_.reserve(2 * half.size());
  const int nh = static_cast<int>(half.size());
  for (int i = 0; i < nh; ++i) {
    GridNode pos = half[i];
    GridNode neg = pos;
    neg.px = -pos.px;
    neg.x0 = -pos.x1;
    neg.x1 = -pos.x0;
    pos.mirror = 2 * i + 1;
    neg.mirror = 2 * i;
    nodes_.push_back(pos);
    nodes_.push_back(neg);
  }
}

double MomentumGrid::analytic_volume(double lambda, double p_max) {
  return 4.0 * kPi / 3.0 * (p_max * p_max * p_max - lambda * lambda * lambda);
}

double MomentumGrid::volume() const {
  double v = 0.0;
  for (const auto& n : nodes_) v += n.weight;
  return v;
}

double MomentumGrid::moment(std::span<const double> values) const {
  if (values.size() != nodes_.size())
    throw std::invalid_argument("size-mismatch: integrand vs grid nodes");
  double s = 0.0;
  for (size_t i = 0; i < nodes_.size(); ++i) s += nodes_[i].weight * values[i];
  return s;
}

uint64_t MomentumGrid::hash() const {
  // FNV-1a over the node coordinates and weights
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double d) {
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    std::memcpy(&bits, &d, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(lambda_);
  mix(p_max_);
  mix(static_cast<double>(nodes_.size()));
  for (const auto& n : nodes_) {
    mix(n.px);
    mix(n.y);
    mix(n.weight);
  }
  return h;
}

double planck_P(double psq) { return 1.0 / std::expm1(psq); }
double planck_M(double psq) { return std::exp(-psq); }

PlanckTable planck_table(const MomentumGrid& grid) {
  PlanckTable t;
  const size_t n = grid.size();
  t.P.resize(n);
  t.M.resize(n);
  t.ratio.resize(n);
  t.product.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double s = grid.node(i).psq;
    const double P = planck_P(s);
    const double M = planck_M(s);
    t.P[i] = P;
    t.M[i] = M;
    t.ratio[i] = P / (1.0 + P);  // equals M analytically
    t.product[i] = P * (1.0 + P);
  }
  return t;
}

}  // namespace bek
