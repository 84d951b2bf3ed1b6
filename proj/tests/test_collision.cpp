#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "bek/collision.hpp"

using namespace bek;

namespace {

GridNode point(double px, double y) {
  GridNode n;
  n.px = px;
  n.y = y;
  n.psq = px * px + y;
  return n;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("reduced kernels match hand-evaluated closed forms") {
  const double lam = 0.5;
  // k1 at |p|^2 = 4, |p2|^2 = 1, collinear: P(1) ((e^4-1)/(e^3-1) - 1)
  {
    const double v = kernel_k1(point(0.0, 4.0), point(0.0, 1.0), lam);
    const double expect = 1.0 / (std::exp(1.0) - 1.0) *
                          ((std::exp(4.0) - 1.0) / (std::exp(3.0) - 1.0) - 1.0);
    CHECK(v == doctest::Approx(expect).epsilon(1e-14));
  }
  // k2 at |p|^2 = 1, |p1|^2 = 4: P(4) (e - 1 + 1 + (e-1)/(e^3-1))
  {
    const double v = kernel_k2(point(0.0, 1.0), point(0.0, 4.0), lam);
    const double e1 = std::expm1(1.0);
    const double expect = 1.0 / (std::exp(4.0) - 1.0) *
                          (e1 + 1.0 + e1 / (std::exp(3.0) - 1.0));
    CHECK(v == doctest::Approx(expect).epsilon(1e-14));
  }
  // k3 at |p|^2 = |p3|^2 = 1: P(1) ((e-1)/(e^2-1) - 1)
  {
    const double v = kernel_k3(point(0.0, 1.0), point(0.0, 1.0), lam);
    const double expect = 1.0 / (std::exp(1.0) - 1.0) *
                          ((std::exp(1.0) - 1.0) / (std::exp(2.0) - 1.0) - 1.0);
    CHECK(v == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("kernel support conditions") {
  const double lam = 0.5;
  // below the cutoff in the energy transfer
  CHECK(kernel_k1(point(0.0, 1.1), point(0.0, 1.0), lam) == 0.0);
  // k1/k2 triangle: |p|^2 - |q|^2 must exceed (p_x - q_x)^2
  CHECK(kernel_k1(point(2.0, 0.0), point(-1.0, 0.5), lam) == 0.0);
  CHECK(kernel_k1(point(1.0, 3.0), point(0.9, 0.5), lam) > 0.0);
  // k3 triangle uses the sum p_x + p_3x: opposite-sign p_x pairs survive
  // (the kernel itself is negative, P at the higher energy is smaller)
  CHECK(kernel_k3(point(1.0, 0.5), point(-1.0, 0.5), lam) < 0.0);
  CHECK(kernel_k3(point(1.0, 0.5), point(1.0, 0.5), lam) == 0.0);
}

TEST_CASE("weighted detailed-balance symmetry of the kernel sum") {
  // M(p) [k1(p,q) + k2(p,q) + k3(p,q)] is symmetric in (p,q) pointwise
  const double lam = 0.7;
  const GridNode ps[] = {point(0.3, 1.2), point(-1.1, 0.4), point(2.0, 1.5),
                         point(0.9, 3.0)};
  for (const GridNode& p : ps) {
    for (const GridNode& q : ps) {
      const double lhs =
          std::exp(-p.psq) * (kernel_k1(p, q, lam) + kernel_k2(p, q, lam) +
                              kernel_k3(p, q, lam));
      const double rhs =
          std::exp(-q.psq) * (kernel_k1(q, p, lam) + kernel_k2(q, p, lam) +
                              kernel_k3(q, p, lam));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("ellipse measure quadrature converges to the closed form") {
  const GridNode p = point(1.3, 2.0);
  const double exact = term1_measure_closed_form(p);
  const double e1 = std::abs(term1_measure(p, 128) - exact) / exact;
  const double e2 = std::abs(term1_measure(p, 256) - exact) / exact;
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 > 2.0);
}

TEST_CASE("collision frequency bounds") {
  const double lam = 1.0, n = 1.0;
  const GridNode ps[] = {point(0.7, 1.0), point(-1.5, 4.0), point(3.0, 9.0),
                         point(0.2, 1.1)};
  const double zeta32 = 2.6123753486854883;
  for (const GridNode& p : ps) {
    const double t1 = nu_term1(p, lam, n, 512);
    const double t2 = nu_term2(p, lam, n, 512);
    CHECK(t1 >= 0.0);
    CHECK(t2 > 0.0);
    CHECK(t2 <= 2.0 * n * kPi * kPi * std::sqrt(kPi) * zeta32);
    const double upper = n * kPi * kPi * (1.0 + 2.0 / std::expm1(lam * lam)) *
                         term1_measure_closed_form(p);
    CHECK(t1 <= upper * (1.0 + 1e-12));
  }
}

TEST_CASE("assembled operator structure on a coarse grid") {
  auto grid = std::make_shared<MomentumGrid>(1.0, 5.0, 16, 16, true);
  OperatorOptions opts;
  opts.nu_quad_points = 256;
  CollisionOperator op(grid, opts);

  // raw assembly is weighted-symmetric up to discretization error; the
  // defect is dominated by collocation slivers along the support cutoffs
  CHECK(op.symmetry_defect() < 0.5);

  // solver operator is symmetrized to roundoff
  {
    Eigen::MatrixXd WL = op.rho().asDiagonal() * op.L();
    const double defect = (WL - WL.transpose()).norm() / WL.norm();
    CHECK(defect < 1e-12);
  }

  // deflation makes the collision invariants exact null vectors
  const int np = static_cast<int>(grid->size());
  Eigen::VectorXd psiE(np), psiM(np);
  for (int i = 0; i < np; ++i) {
    const double opP = 1.0 + planck_P(grid->node(i).psq);
    psiE[i] = grid->node(i).psq * opP;
    psiM[i] = grid->node(i).px * opP;
  }
  CHECK((op.L() * psiE).norm() <= 1e-12 * (op.nu().asDiagonal() * psiE).norm());
  CHECK((op.L() * psiM).norm() <= 1e-12 * (op.nu().asDiagonal() * psiM).norm());

  SpectrumReport rep = spectral_report(op);
  CHECK(rep.near_zero_count == 2);
  CHECK(rep.alpha0 < 1.0);
  CHECK(rep.alpha0 > 0.0);
  CHECK(rep.nu0_spectral > 0.0);
  CHECK(rep.nu0_fit > 0.0);
  CHECK(rep.nu1_fit >= rep.nu0_fit);
  // raw kernel residuals are small discretization leftovers
  CHECK(rep.kernel_residual_E < 0.1);
  CHECK(rep.kernel_residual_M < 0.1);
}

TEST_CASE("kernel residuals shrink under refinement") {
  OperatorOptions opts;
  opts.nu_quad_points = 256;
  CollisionOperator coarse(std::make_shared<MomentumGrid>(1.0, 5.0, 12, 12,
                                                          true),
                           opts);
  CollisionOperator fine(std::make_shared<MomentumGrid>(1.0, 5.0, 24, 24,
                                                        true),
                         opts);
  SpectrumReport rc = spectral_report(coarse);
  SpectrumReport rf = spectral_report(fine);
  CHECK(rc.kernel_residual_E / rf.kernel_residual_E > 2.0);
  CHECK(rc.kernel_residual_M / rf.kernel_residual_M > 2.0);
  CHECK(fine.symmetry_defect() < coarse.symmetry_defect());
}
