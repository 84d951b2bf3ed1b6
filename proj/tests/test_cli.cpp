#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(BEK_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("bek_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

const std::string kSmall =
    "--set grid.n_x=10 --set grid.n_y=10 --set grid.p_max=5.0 "
    "--set operator.nu_quad_points=128";

}  // namespace

TEST_CASE("assemble writes the operator report") {
  TempDir tmp;
  const int rc = run("assemble " + kSmall + " --out " + tmp.path.string());
  CHECK(rc == 0);
  CHECK(fs::exists(tmp.path / "operator.meta.json"));
  CHECK(fs::exists(tmp.path / "nu.csv"));
  const std::string meta = slurp(tmp.path / "operator.meta.json");
  CHECK(meta.find("symmetry_defect") != std::string::npos);
  CHECK(meta.find("config_hash") != std::string::npos);
}

TEST_CASE("invalid domain exits with the config error code") {
  TempDir tmp;
  CHECK(run("assemble --set grid.lambda=7.0 --out " + tmp.path.string()) == 1);
  CHECK(run("assemble --set grid.n_x=9 --out " + tmp.path.string()) == 1);
  CHECK(run("solve --set slab.scheme=bogus " + kSmall + " --out " +
            tmp.path.string()) == 1);
}

TEST_CASE("solve writes trajectories, field and diagnostics") {
  TempDir tmp;
  const int rc =
      run("solve " + kSmall +
          " --set indata.generator=kernel_mode --set indata.a_E=1.0"
          " --set slab.l=20.0 --set slab.n_cells=80 --out " +
          tmp.path.string());
  CHECK(rc == 0);
  CHECK(fs::exists(tmp.path / "solution.csv"));
  CHECK(fs::exists(tmp.path / "field.csv"));
  CHECK(fs::exists(tmp.path / "field.bin"));
  CHECK(fs::exists(tmp.path / "diagnostics.json"));
  const std::string diag = slurp(tmp.path / "diagnostics.json");
  CHECK(diag.find("kernel-mode") != std::string::npos);

  // a(x) stays at 1 for the stationary even mode
  std::ifstream csv(tmp.path / "solution.csv");
  std::string line;
  std::getline(csv, line);  // header
  while (std::getline(csv, line)) {
    const size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
    const double a = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    CHECK(a == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("reports are reproducible byte for byte") {
  TempDir t1, t2;
  REQUIRE(run("constants " + kSmall + " --out " + t1.path.string()) == 0);
  REQUIRE(run("constants " + kSmall + " --out " + t2.path.string()) == 0);
  CHECK(slurp(t1.path / "constants.json") ==
        slurp(t2.path / "constants.json"));
  CHECK(!slurp(t1.path / "constants.json").empty());
}

TEST_CASE("spectrum report") {
  TempDir tmp;
  REQUIRE(run("spectrum " + kSmall + " --out " + tmp.path.string()) == 0);
  const std::string s = slurp(tmp.path / "spectrum.json");
  CHECK(s.find("near_zero_count") != std::string::npos);
}

TEST_CASE("sweep emits the study table") {
  TempDir tmp;
  const int rc =
      run("sweep " + kSmall +
          " --set indata.generator=random --set slab.l=16.0"
          " --set slab.n_cells=64 --out " +
          tmp.path.string());
  CHECK(rc == 0);
  const std::string csv = slurp(tmp.path / "sweep.csv");
  CHECK(csv.find("slab_length") != std::string::npos);
  CHECK(csv.find("x_refinement") != std::string::npos);
  CHECK(csv.find("epsilon") != std::string::npos);
}
