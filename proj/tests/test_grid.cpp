#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bek/grid.hpp"
#include "bek/region.hpp"

using namespace bek;

TEST_CASE("clip_region reproduces simple areas") {
  // unit square
  std::vector<Quad> ups = {Quad{1.0, 0.0, 0.0}};
  std::vector<Quad> los = {Quad{0.0, 0.0, 0.0}};
  ClipResult r = clip_region(ups, los, 0.0, 1.0);
  CHECK(r.area == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.cx == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.cy == doctest::Approx(0.5).epsilon(1e-12));

  // area under a parabola: int_0^1 (1 - x^2) dx = 2/3, exact for Gauss-3
  ups = {Quad{1.0, 0.0, -1.0}};
  r = clip_region(ups, los, 0.0, 1.0);
  CHECK(r.area == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  // empty region
  ups = {Quad{-1.0, 0.0, 0.0}};
  r = clip_region(ups, los, 0.0, 1.0);
  CHECK(r.area == 0.0);

  // two crossing bounds: min(x, 1-x) over [0,1] -> area 1/4
  ups = {Quad{0.0, 1.0, 0.0}, Quad{1.0, -1.0, 0.0}};
  r = clip_region(ups, los, 0.0, 1.0);
  CHECK(r.area == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(r.cx == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("grid volume matches the closed form exactly") {
  for (bool refine : {false, true}) {
    MomentumGrid g(1.0, 6.0, 16, 16, refine);
    const double exact = MomentumGrid::analytic_volume(1.0, 6.0);
    CHECK(g.volume() == doctest::Approx(exact).epsilon(1e-12));
  }
  MomentumGrid g2(0.5, 4.0, 8, 12, true);
  CHECK(g2.volume() ==
        doctest::Approx(MomentumGrid::analytic_volume(0.5, 4.0))
            .epsilon(1e-12));
}

TEST_CASE("invalid domains are rejected") {
  CHECK_THROWS_AS(MomentumGrid(6.0, 6.0, 16, 16, false), InvalidDomain);
  CHECK_THROWS_AS(MomentumGrid(7.0, 6.0, 16, 16, false), InvalidDomain);
  CHECK_THROWS_AS(MomentumGrid(-1.0, 6.0, 16, 16, false), InvalidDomain);
  CHECK_THROWS_AS(MomentumGrid(1.0, 6.0, 15, 16, false), InvalidDomain);
  CHECK_THROWS_AS(MomentumGrid(1.0, 6.0, 2, 16, false), InvalidDomain);
}

TEST_CASE("nodes sit inside the truncated domain, mirrored in p_x") {
  MomentumGrid g(1.0, 6.0, 16, 16, true);
  REQUIRE(g.size() % 2 == 0);
  for (size_t i = 0; i < g.size(); ++i) {
    const GridNode& nd = g.node(i);
    CHECK(nd.y >= 0.0);
    CHECK(nd.psq >= 1.0 - 1e-12);
    CHECK(nd.psq <= 36.0 + 1e-12);
    CHECK(nd.px != 0.0);
    const GridNode& m = g.node(nd.mirror);
    CHECK(m.px == -nd.px);
    CHECK(m.y == nd.y);
    CHECK(m.weight == nd.weight);  // bitwise, so odd moments cancel exactly
    CHECK(m.mirror == static_cast<int>(i));
  }
}

TEST_CASE("odd moments vanish by pairing") {
  MomentumGrid g(1.0, 6.0, 16, 16, true);
  std::vector<double> odd(g.size());
  double scale = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    odd[i] = g.node(i).px * g.node(i).psq;
    scale += std::abs(odd[i]) * g.node(i).weight;
  }
  CHECK(std::abs(g.moment(odd)) <= 1e-14 * scale);
}

TEST_CASE("moment rejects mismatched sizes") {
  MomentumGrid g(1.0, 6.0, 8, 8, false);
  std::vector<double> bad(g.size() + 1, 1.0);
  CHECK_THROWS_AS(g.moment(bad), std::invalid_argument);
}

TEST_CASE("planck tables satisfy the algebraic identities") {
  MomentumGrid g(1.0, 6.0, 16, 16, true);
  PlanckTable t = planck_table(g);
  for (size_t i = 0; i < g.size(); ++i) {
    CHECK(t.ratio[i] == doctest::Approx(t.M[i]).epsilon(1e-14));
    CHECK(t.product[i] ==
          doctest::Approx(t.P[i] * (1.0 + t.P[i])).epsilon(1e-14));
    CHECK(t.P[i] > 0.0);
    CHECK(t.M[i] * (1.0 + t.P[i]) == doctest::Approx(t.P[i]).epsilon(1e-14));
  }
}

TEST_CASE("grid hash is deterministic and parameter-sensitive") {
  MomentumGrid a(1.0, 6.0, 16, 16, true);
  MomentumGrid b(1.0, 6.0, 16, 16, true);
  MomentumGrid c(1.0, 6.0, 16, 18, true);
  MomentumGrid d(1.1, 6.0, 16, 16, true);
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash() != d.hash());
}
