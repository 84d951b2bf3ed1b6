#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bek/bek.h"

namespace {

struct Grid {
  bek_grid* g = nullptr;
  ~Grid() { bek_grid_destroy(g); }
};

struct Op {
  bek_operator* o = nullptr;
  ~Op() { bek_operator_destroy(o); }
};

struct Sol {
  bek_solution* s = nullptr;
  ~Sol() { bek_solution_destroy(s); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  bek_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("grid lifecycle and errors") {
  Grid g;
  REQUIRE(bek_grid_create(1.0, 6.0, 12, 12, 1, &g.g) == BEK_OK);
  CHECK(bek_grid_size(g.g) > 0);
  CHECK(bek_grid_volume(g.g) ==
        doctest::Approx(bek_grid_analytic_volume(1.0, 6.0)).epsilon(1e-12));
  CHECK(bek_grid_hash(g.g) != 0);

  std::vector<double> px(bek_grid_size(g.g)), w(bek_grid_size(g.g));
  CHECK(bek_grid_nodes(g.g, px.data(), nullptr, w.data()) == BEK_OK);
  for (double v : w) CHECK(v > 0.0);

  bek_grid* bad = nullptr;
  CHECK(bek_grid_create(7.0, 6.0, 12, 12, 1, &bad) == BEK_ERR_DOMAIN);
  CHECK(std::strlen(bek_last_error()) > 0);
  CHECK(bek_grid_create(1.0, 6.0, 12, 12, 1, nullptr) == BEK_ERR_INVALID_ARG);
}

TEST_CASE("operator, reports and solve through the C interface") {
  Grid g;
  REQUIRE(bek_grid_create(1.0, 5.0, 10, 10, 1, &g.g) == BEK_OK);
  const int np = bek_grid_size(g.g);

  Op op;
  REQUIRE(bek_operator_create(g.g, 1.0, 128, 1, 1, &op.o) == BEK_OK);
  CHECK(bek_operator_symmetry_defect(op.o) < 1.0);

  std::vector<double> nu(np);
  REQUIRE(bek_operator_nu(op.o, nu.data()) == BEK_OK);
  for (double v : nu) CHECK(v > 0.0);

  char* meta = nullptr;
  REQUIRE(bek_operator_meta_json(op.o, 42, &meta) == BEK_OK);
  const std::string meta_s = take(meta);
  CHECK(meta_s.find("grid_hash") != std::string::npos);
  CHECK(meta_s.find("symmetry_defect") != std::string::npos);

  char* spec = nullptr;
  REQUIRE(bek_spectrum_json(op.o, 42, &spec) == BEK_OK);
  CHECK(take(spec).find("alpha0") != std::string::npos);

  // kernel-mode data: the even mode is an exact stationary solution
  std::vector<double> f0(np);
  REQUIRE(bek_indata(g.g, "kernel_mode", 1.0, 0.0, 0.0, 1.0, 0.0, 1,
                     f0.data()) == BEK_OK);
  CHECK(bek_indata(g.g, "nope", 1, 0, 0, 0, 0, 1, f0.data()) ==
        BEK_ERR_INVALID_ARG);

  bek_slab_config cfg{20.0, 80, 0.0, "direct_sparse", 1e-9, 100000, 0.5, 1e-4};
  Sol sol;
  REQUIRE(bek_solve_milne(op.o, f0.data(), 0.0, &cfg, &sol.s) == BEK_OK);
  const int pts = bek_solution_points(sol.s);
  CHECK(pts == 81);
  std::vector<double> a(pts), b(pts);
  REQUIRE(bek_solution_trajectory(sol.s, "a", a.data()) == BEK_OK);
  REQUIRE(bek_solution_trajectory(sol.s, "b", b.data()) == BEK_OK);
  for (int j = 0; j < pts; ++j) {
    CHECK(a[j] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(b[j]) <= 1e-8);
  }
  CHECK(bek_solution_trajectory(sol.s, "nope", b.data()) ==
        BEK_ERR_INVALID_ARG);

  double disc = -1.0;
  REQUIRE(bek_cross_validate(sol.s, sol.s, g.g, &disc) == BEK_OK);
  CHECK(disc == 0.0);

  const auto dir = std::filesystem::temp_directory_path() / "bek_capi_test";
  std::filesystem::create_directories(dir);
  REQUIRE(bek_solution_write_csv(sol.s, (dir / "solution.csv").c_str()) ==
          BEK_OK);
  REQUIRE(bek_solution_write_field_bin(sol.s, (dir / "field.bin").c_str()) ==
          BEK_OK);
  std::ifstream csv(dir / "solution.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x,a,b,E,W,wnorm2");

  char* diag = nullptr;
  REQUIRE(bek_solution_diagnostics_json(sol.s, op.o, 42, &diag) == BEK_OK);
  const std::string diag_s = take(diag);
  CHECK(diag_s.find("kernel-mode") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("hashes and oracles") {
  CHECK(bek_hash_string("abc") == bek_hash_string("abc"));
  CHECK(bek_hash_string("abc") != bek_hash_string("abd"));
  CHECK(bek_gamma_series_oracle(100000) == doctest::Approx(9.3372).epsilon(1e-4));
}
