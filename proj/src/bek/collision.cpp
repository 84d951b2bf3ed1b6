#include "bek/collision.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bek/region.hpp"

namespace bek {

namespace {

constexpr double kPi = std::numbers::pi;

// antiderivative of the Bose function: d/ds ln(1 - e^{-s}) = 1/(e^s - 1)
inline double phi(double s) { return std::log1p(-std::exp(-s)); }

inline double sq(double v) { return v * v; }

}  // namespace

double kernel_k1(const GridNode& p, const GridNode& p2, double lambda) {
  const double d = p.psq - p2.psq;  // |p3|^2 after the energy delta
  if (d < lambda * lambda) return 0.0;
  if (p.psq - p2.psq - sq(p.px - p2.px) <= 0.0) return 0.0;
  const double P2 = 1.0 / std::expm1(p2.psq);
  return P2 * (std::expm1(p.psq) / std::expm1(d) - 1.0);
}

double kernel_k2(const GridNode& p, const GridNode& p1, double lambda) {
  const double d = p1.psq - p.psq;
  if (d < lambda * lambda) return 0.0;
  if (p1.psq - p.psq - sq(p1.px - p.px) <= 0.0) return 0.0;
  const double P1 = 1.0 / std::expm1(p1.psq);
  const double invP = std::expm1(p.psq);
  return P1 * (invP + 1.0 + invP / std::expm1(d));
}

double kernel_k3(const GridNode& p, const GridNode& p3, double lambda) {
  (void)lambda;  // |p1|^2 = |p|^2 + |p3|^2 >= 2 lambda^2 automatically
  const double s = p.psq + p3.psq;
  if (p.psq + p3.psq - sq(p.px + p3.px) <= 0.0) return 0.0;
  const double P3 = 1.0 / std::expm1(p3.psq);
  return P3 * (std::expm1(p.psq) / std::expm1(s) - 1.0);
}

double term1_measure(const GridNode& p, int points) {
  // area of { y > 0, y + 2(x - px/2)^2 < px^2/2 + p_r^2 }
  const double half = 0.5 * std::sqrt(p.px * p.px + 2.0 * p.y);
  const double xa = 0.5 * p.px - half, xb = 0.5 * p.px + half;
  const double dx = (xb - xa) / points;
  double s = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = xa + (i + 0.5) * dx;
    const double u = p.psq - x * x - sq(p.px - x);
    if (u > 0.0) s += u;
  }
  return s * dx;
}

double term1_measure_closed_form(const GridNode& p) {
  return std::pow(p.px * p.px + 2.0 * p.y, 1.5) / 3.0;
}

double nu_term1(const GridNode& p, double lambda, double n, int points) {
  const double l2 = lambda * lambda;
  if (p.psq - l2 <= 0.0) return 0.0;
  const double half = 0.5 * std::sqrt(p.px * p.px + 2.0 * p.y);
  const double xcut = std::sqrt(p.psq - l2);  // |p2|^2 <= |p|^2 - lambda^2
  const double xa = std::max(0.5 * p.px - half, -xcut);
  const double xb = std::min(0.5 * p.px + half, xcut);
  if (xb <= xa) return 0.0;
  const double dx = (xb - xa) / points;
  double s = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = xa + (i + 0.5) * dx;
    const double c = p.psq - x * x;  // |p3|^2 = c - y
    const double hi = std::min(p.psq - x * x - sq(p.px - x), c - l2);
    const double lo = std::max(0.0, l2 - x * x);
    if (hi <= lo) continue;
    double v = hi - lo;                        // the "1" of 1 + P2 + P3
    v += phi(x * x + hi) - phi(x * x + lo);    // P2 piece
    v += phi(c - lo) - phi(c - hi);            // P3 piece
    s += v;
  }
  return n * kPi * kPi * s * dx;
}

double nu_term2(const GridNode& p, double lambda, double n, int points) {
  const double l2 = lambda * lambda;
  const double X = 7.5;  // integrand bounded by e^{-x^2 - max(0, l2 - x^2)}
  const double dx = 2.0 * X / points;
  double s = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = -X + (i + 0.5) * dx;
    const double lo =
        std::max({0.0, l2 - x * x, 2.0 * p.px * x - p.y});
    if (x * x + lo > 60.0) continue;
    // y integrated in closed form up to infinity
    s += phi(p.psq + x * x + lo) - phi(x * x + lo);
  }
  return 2.0 * n * kPi * kPi * s * dx;
}

namespace {

// Indicator bounds of one reduced kernel, as quadratics in the column
// variables (x, y): region is  max(lowers) < y < min(uppers).
struct KernelBounds {
  std::vector<Quad> uppers;
  std::vector<Quad> lowers;
};

// bounds[0] of each list is reserved for the column cell's own y-range
void row_bounds(const GridNode& p, double lambda, double p_max,
                KernelBounds& k1, KernelBounds& k2, KernelBounds& k3) {
  const double l2 = lambda * lambda;
  const Quad outer{p_max * p_max, 0.0, -1.0};
  const Quad inner{l2, 0.0, -1.0};
  const Quad cell{0.0, 0.0, 0.0};

  k1.uppers = {cell, outer,
               Quad{p.psq - p.px * p.px, 2.0 * p.px, -2.0},  // triangle
               Quad{p.psq - l2, 0.0, -1.0}};                 // |p3| >= lambda
  k1.lowers = {cell, inner};

  k2.uppers = {cell, outer};
  k2.lowers = {cell, inner,
               Quad{p.psq + p.px * p.px, -2.0 * p.px, 0.0},  // triangle
               Quad{p.psq + l2, 0.0, -1.0}};                 // |p3| >= lambda

  k3.uppers = {cell, outer};
  k3.lowers = {cell, inner,
               Quad{-p.y, 2.0 * p.px, 0.0}};                 // triangle
}

// -1 violated everywhere, +1 satisfied everywhere, 0 crossing
int classify_upper(const Quad& u, const GridNode& cell) {
  // constraint y < u(x) over the cell rectangle
  double umin = std::min(u.eval(cell.x0), u.eval(cell.x1));
  double umax = std::max(u.eval(cell.x0), u.eval(cell.x1));
  if (u.c2 != 0.0) {
    const double xv = -u.c1 / (2.0 * u.c2);
    if (xv > cell.x0 && xv < cell.x1) {
      const double v = u.eval(xv);
      umin = std::min(umin, v);
      umax = std::max(umax, v);
    }
  }
  if (umin >= cell.y1) return 1;
  if (umax <= cell.y0) return -1;
  return 0;
}

int classify_lower(const Quad& l, const GridNode& cell) {
  double lmin = std::min(l.eval(cell.x0), l.eval(cell.x1));
  double lmax = std::max(l.eval(cell.x0), l.eval(cell.x1));
  if (l.c2 != 0.0) {
    const double xv = -l.c1 / (2.0 * l.c2);
    if (xv > cell.x0 && xv < cell.x1) {
      const double v = l.eval(xv);
      lmin = std::min(lmin, v);
      lmax = std::max(lmax, v);
    }
  }
  if (lmax <= cell.y0) return 1;
  if (lmin >= cell.y1) return -1;
  return 0;
}

}  // namespace

CollisionOperator::CollisionOperator(std::shared_ptr<const MomentumGrid> grid,
                                     const OperatorOptions& opts)
    : grid_(std::move(grid)), opts_(opts), planck_(planck_table(*grid_)) {
  const MomentumGrid& g = *grid_;
  const int np = static_cast<int>(g.size());
  const double lambda = g.lambda();
  const double p_max = g.p_max();
  const double pref = 2.0 * kPi * opts_.n * kPi;  // 2 pi n * (pi dx dy)

  nu_.resize(np);
  for (int i = 0; i < np; ++i) {
    nu_[i] = nu_term1(g.node(i), lambda, opts_.n, opts_.nu_quad_points) +
             nu_term2(g.node(i), lambda, opts_.n, opts_.nu_quad_points);
  }

  K_.setZero(np, np);
  KernelBounds b1, b2, b3;
  using KernelFn = double (*)(const GridNode&, const GridNode&, double);
  const KernelFn fns[3] = {&kernel_k1, &kernel_k2, &kernel_k3};
  for (int i = 0; i < np; ++i) {
    const GridNode& p = g.node(i);
    row_bounds(p, lambda, p_max, b1, b2, b3);
    KernelBounds* bounds[3] = {&b1, &b2, &b3};
    for (int j = 0; j < np; ++j) {
      const GridNode& q = g.node(j);
      double entry = 0.0;
      for (int m = 0; m < 3; ++m) {
        KernelBounds& kb = *bounds[m];
        // classify the extra (indicator) bounds over the column cell
        bool out = false, crossing = false;
        for (size_t u = 2; u < kb.uppers.size() && !out; ++u) {
          const int c = classify_upper(kb.uppers[u], q);
          if (c < 0) out = true;
          else if (c == 0) crossing = true;
        }
        for (size_t l = 2; l < kb.lowers.size() && !out; ++l) {
          const int c = classify_lower(kb.lowers[l], q);
          if (c < 0) out = true;
          else if (c == 0) crossing = true;
        }
        if (out) continue;
        if (!crossing) {
          entry += fns[m](p, q, lambda) * q.cell_area;
          continue;
        }
        kb.uppers[0] = Quad{q.y1, 0.0, 0.0};
        kb.lowers[0] = Quad{q.y0, 0.0, 0.0};
        const ClipResult clip = clip_region(kb.uppers, kb.lowers, q.x0, q.x1);
        if (clip.area <= 0.0) continue;
        GridNode rep = q;
        rep.px = clip.cx;
        rep.y = clip.cy;
        rep.psq = rep.px * rep.px + rep.y;
        double v = fns[m](p, rep, lambda);
        if (v == 0.0) {
          // centroid can graze an indicator boundary; fall back to the
          // midpoint of the clipped vertical slice through cx
          double hi = kb.uppers[0].eval(rep.px), lo = kb.lowers[0].eval(rep.px);
          for (size_t u = 1; u < kb.uppers.size(); ++u)
            hi = std::min(hi, kb.uppers[u].eval(rep.px));
          for (size_t l = 1; l < kb.lowers.size(); ++l)
            lo = std::max(lo, kb.lowers[l].eval(rep.px));
          if (hi > lo) {
            rep.y = 0.5 * (hi + lo);
            rep.psq = rep.px * rep.px + rep.y;
            v = fns[m](p, rep, lambda);
          }
        }
        entry += v * clip.area;
      }
      K_(i, j) = pref * entry;
    }
  }

  rho_.resize(np);
  for (int i = 0; i < np; ++i) rho_[i] = planck_.ratio[i] * g.node(i).weight;

  // weighted symmetry defect of the raw assembly
  {
    Eigen::MatrixXd WK = rho_.asDiagonal() * K_;
    const double num = (WK - WK.transpose()).norm();
    const double den = WK.norm();
    symmetry_defect_ = (den > 0.0) ? num / den : 0.0;
  }

  L_ = K_;
  L_.diagonal() -= nu_;
  if (opts_.symmetrize) {
    Eigen::MatrixXd WL = rho_.asDiagonal() * L_;
    WL = 0.5 * (WL + WL.transpose()).eval();
    L_ = rho_.cwiseInverse().asDiagonal() * WL;
  }
  if (opts_.deflate) {
    // rho-orthogonal projector off span{psi_E, psi_M}
    Eigen::VectorXd psiE(np), psiM(np);
    for (int i = 0; i < np; ++i) {
      const double opP = 1.0 + planck_.P[i];
      psiE[i] = g.node(i).psq * opP;
      psiM[i] = g.node(i).px * opP;
    }
    auto project = [&](Eigen::MatrixXd& A, bool rows) {
      for (const Eigen::VectorXd* psi : {&psiE, &psiM}) {
        const double nrm = inner(*psi, *psi);
        const Eigen::VectorXd rp = rho_.asDiagonal() * (*psi);
        if (rows) {
          // A <- A - psi (rho psi)^T A / nrm
          A -= (*psi) * ((rp.transpose() * A) / nrm);
        } else {
          A -= ((A * (*psi)) / nrm) * rp.transpose();
        }
      }
    };
    project(L_, false);  // L Pi
    project(L_, true);   // Pi L Pi
  }
}

Eigen::MatrixXd CollisionOperator::L_raw() const {
  Eigen::MatrixXd L = K_;
  L.diagonal() -= nu_;
  return L;
}

SpectrumReport spectral_report(const CollisionOperator& op) {
  SpectrumReport rep;
  const MomentumGrid& g = op.grid();
  const int np = static_cast<int>(g.size());
  const Eigen::VectorXd& rho = op.rho();
  const Eigen::VectorXd& nu = op.nu();
  const PlanckTable& pl = op.planck();
  rep.symmetry_defect = op.symmetry_defect();

  Eigen::VectorXd psiE(np), psiM(np), cube(np);
  for (int i = 0; i < np; ++i) {
    const double opP = 1.0 + pl.P[i];
    psiE[i] = g.node(i).psq * opP;
    psiM[i] = g.node(i).px * opP;
    const double w = 1.0 + std::sqrt(g.node(i).psq);
    cube[i] = w * w * w;
  }

  const Eigen::MatrixXd Lraw = op.L_raw();
  auto wnorm = [&](const Eigen::VectorXd& v) {
    return std::sqrt((rho.array() * v.array().square()).sum());
  };
  rep.kernel_residual_E = wnorm(Lraw * psiE) / wnorm(nu.asDiagonal() * psiE);
  rep.kernel_residual_M = wnorm(Lraw * psiM) / wnorm(nu.asDiagonal() * psiM);

  rep.nu0_fit = std::numeric_limits<double>::infinity();
  rep.nu1_fit = 0.0;
  for (int i = 0; i < np; ++i) {
    const double r = nu[i] / cube[i];
    rep.nu0_fit = std::min(rep.nu0_fit, r);
    rep.nu1_fit = std::max(rep.nu1_fit, r);
  }

  // spectral gap: -(Lf,f) >= mu ((1+|p|)^3 f, f) as a symmetric generalized
  // eigenproblem; two near-zero eigenvalues mark the kernel
  Eigen::MatrixXd Q = rho.asDiagonal() * Lraw;
  Q = (-0.5 * (Q + Q.transpose())).eval();
  Eigen::MatrixXd B = (rho.array() * cube.array()).matrix().asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gap(Q, B);
  if (gap.info() != Eigen::Success)
    throw std::runtime_error("eigensolver-failure: ill-conditioned grid");
  const Eigen::VectorXd mu = gap.eigenvalues();

  auto rayleigh = [&](const Eigen::VectorXd& v) {
    return std::abs(v.dot(Q * v)) / v.dot(B * v);
  };
  rep.kernel_tolerance =
      std::max(1e-9, 5.0 * std::max(rayleigh(psiE), rayleigh(psiM)));
  int nz = 0;
  for (int i = 0; i < np; ++i)
    if (std::abs(mu[i]) < rep.kernel_tolerance) ++nz;
  rep.near_zero_count = nz;
  int first = 0;
  while (first < np && std::abs(mu[first]) < rep.kernel_tolerance) ++first;
  rep.nu0_spectral = (first < np) ? mu[first] : 0.0;
  rep.kernel_vectors.resize(np, std::min(nz, 2));
  for (int k = 0; k < rep.kernel_vectors.cols(); ++k)
    rep.kernel_vectors.col(k) = gap.eigenvectors().col(k);

  // eigenvalues of K/nu; the kernel sits at 1, the rest below alpha0 < 1
  Eigen::MatrixXd QK = rho.asDiagonal() * op.K();
  QK = (0.5 * (QK + QK.transpose())).eval();
  Eigen::MatrixXd Bnu = (rho.array() * nu.array()).matrix().asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ks(QK, Bnu);
  if (ks.info() != Eigen::Success)
    throw std::runtime_error("eigensolver-failure: ill-conditioned grid");
  rep.alpha0 = (np >= 3) ? ks.eigenvalues()[np - 3] : 0.0;
  return rep;
}

}  // namespace bek
