// command-line front end; talks to the library through the C API only
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bek/bek.h"

using nlohmann::json;

namespace {

json default_config() {
  return json{
      {"grid",
       {{"lambda", 1.0},
        {"p_max", 6.0},
        {"n_x", 32},
        {"n_y", 32},
        {"refine_near_cutoff", true}}},
      {"physics", {{"n", 1.0}}},
      {"operator",
       {{"symmetrize", true}, {"deflate", true}, {"nu_quad_points", 512}}},
      {"slab",
       {{"l", 60.0},
        {"n_cells", 240},
        {"scheme", "direct_sparse"},
        {"epsilon", 0.0},
        {"tol", 1e-9},
        {"max_iter", 100000},
        {"eps0", 0.5},
        {"eps_min", 1e-4}}},
      {"indata",
       {{"generator", "zero"},
        {"amplitude", 1.0},
        {"center", 1.0},
        {"width", 0.5},
        {"a_E", 0.0},
        {"b_M", 0.0},
        {"E", 0.0}}},
      {"verify",
       {{"solve_nx", 20},
        {"solve_ny", 20},
        {"slab_l", 24.0},
        {"slab_cells", 480},
        {"slab_l_short", 40.0},
        {"slab_cells_short", 160}}},
      {"seed", 1234}};
}

void merge(json& base, const json& patch) {
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    if (it->is_object() && base.contains(it.key()) &&
        base[it.key()].is_object()) {
      merge(base[it.key()], *it);
    } else {
      base[it.key()] = *it;
    }
  }
}

void apply_set(json& cfg, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos)
    throw std::runtime_error("config-invalid: --set expects key=value, got " +
                             kv);
  const std::string key = kv.substr(0, eq);
  const std::string val = kv.substr(eq + 1);
  json* node = &cfg;
  size_t pos = 0;
  while (true) {
    const size_t dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot - pos);
    if (part.empty())
      throw std::runtime_error("config-invalid: empty key segment in " + kv);
    if (dot == std::string::npos) {
      json parsed;
      try {
        parsed = json::parse(val);
      } catch (...) {
        parsed = val;  // bare strings allowed
      }
      (*node)[part] = parsed;
      return;
    }
    node = &(*node)[part];
    pos = dot + 1;
  }
}

struct StrDeleter {
  void operator()(char* s) const { bek_string_free(s); }
};
using CStr = std::unique_ptr<char, StrDeleter>;

int exit_for(int code) {
  if (code == BEK_OK) return 0;
  if (code == BEK_ERR_INVALID_ARG || code == BEK_ERR_DOMAIN) return 1;
  return 2;
}

[[noreturn]] void die(int code) {
  std::cerr << "error: " << bek_last_error() << "\n";
  std::exit(exit_for(code));
}

struct GridDeleter {
  void operator()(bek_grid* g) const { bek_grid_destroy(g); }
};
struct OpDeleter {
  void operator()(bek_operator* o) const { bek_operator_destroy(o); }
};
struct SolDeleter {
  void operator()(bek_solution* s) const { bek_solution_destroy(s); }
};

std::unique_ptr<bek_grid, GridDeleter> make_grid(const json& cfg) {
  const json& g = cfg.at("grid");
  bek_grid* raw = nullptr;
  const int rc = bek_grid_create(
      g.at("lambda").get<double>(), g.at("p_max").get<double>(),
      g.at("n_x").get<int>(), g.at("n_y").get<int>(),
      g.at("refine_near_cutoff").get<bool>() ? 1 : 0, &raw);
  if (rc != BEK_OK) die(rc);
  return std::unique_ptr<bek_grid, GridDeleter>(raw);
}

std::unique_ptr<bek_operator, OpDeleter> make_operator(const json& cfg,
                                                       const bek_grid* g) {
  const json& o = cfg.at("operator");
  bek_operator* raw = nullptr;
  const int rc = bek_operator_create(
      g, cfg.at("physics").at("n").get<double>(),
      o.at("nu_quad_points").get<int>(), o.at("symmetrize").get<bool>() ? 1 : 0,
      o.at("deflate").get<bool>() ? 1 : 0, &raw);
  if (rc != BEK_OK) die(rc);
  return std::unique_ptr<bek_operator, OpDeleter>(raw);
}

std::vector<double> make_indata_vec(const json& cfg, const bek_grid* g) {
  const json& d = cfg.at("indata");
  std::vector<double> f0(bek_grid_size(g));
  const std::string gen = d.at("generator").get<std::string>();
  const int rc = bek_indata(
      g, gen.c_str(), d.at("amplitude").get<double>(),
      d.at("center").get<double>(), d.at("width").get<double>(),
      d.at("a_E").get<double>(), d.at("b_M").get<double>(),
      cfg.at("seed").get<uint64_t>(), f0.data());
  if (rc != BEK_OK) die(rc);
  return f0;
}

bek_slab_config slab_config(const json& cfg, std::string& scheme_storage) {
  const json& s = cfg.at("slab");
  scheme_storage = s.at("scheme").get<std::string>();
  bek_slab_config c;
  c.l = s.at("l").get<double>();
  c.n_cells = s.at("n_cells").get<int>();
  c.epsilon = s.at("epsilon").get<double>();
  c.scheme = scheme_storage.c_str();
  c.tol = s.at("tol").get<double>();
  c.max_iter = s.at("max_iter").get<int>();
  c.eps0 = s.at("eps0").get<double>();
  c.eps_min = s.at("eps_min").get<double>();
  return c;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << p << "\n";
    std::exit(2);
  }
  out << content;
}

std::unique_ptr<bek_solution, SolDeleter> run_solve(
    const json& cfg, const bek_grid* grid, bek_operator* op) {
  const std::vector<double> f0 = make_indata_vec(cfg, grid);
  std::string scheme;
  const bek_slab_config sc = slab_config(cfg, scheme);
  bek_solution* raw = nullptr;
  const int rc = bek_solve_milne(op, f0.data(),
                                 cfg.at("indata").at("E").get<double>(), &sc,
                                 &raw);
  if (rc != BEK_OK) die(rc);
  return std::unique_ptr<bek_solution, SolDeleter>(raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linearized condensate-excitation kinetics: operator assembly "
               "and half-space transport"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::vector<std::string> sets;
  bool dump_matrix = false;
  for (const char* name :
       {"assemble", "spectrum", "constants", "solve", "verify", "sweep"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--set", sets, "override config entries, key.path=value");
    sub->add_option("--out", out_dir, "output directory");
    if (std::string(name) == "assemble")
      sub->add_flag("--dump-matrix", dump_matrix,
                    "also write the gain matrix (field.bin layout)");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  json cfg = default_config();
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("config-invalid: cannot open " +
                                        config_path);
      json user = json::parse(in);
      merge(cfg, user);
    }
    for (const std::string& kv : sets) apply_set(cfg, kv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const std::filesystem::path out(out_dir);
  const uint64_t config_hash = bek_hash_string(cfg.dump().c_str());

  if (cmd == "verify") {
    bek_verify_setup vs;
    bek_verify_setup_defaults(&vs);
    const json& g = cfg.at("grid");
    vs.lambda = g.at("lambda").get<double>();
    vs.p_max = g.at("p_max").get<double>();
    vs.n_x = g.at("n_x").get<int>();
    vs.n_y = g.at("n_y").get<int>();
    vs.n = cfg.at("physics").at("n").get<double>();
    const json& o = cfg.at("operator");
    vs.nu_quad_points = o.at("nu_quad_points").get<int>();
    vs.symmetrize = o.at("symmetrize").get<bool>() ? 1 : 0;
    vs.deflate = o.at("deflate").get<bool>() ? 1 : 0;
    const json& v = cfg.at("verify");
    vs.solve_nx = v.at("solve_nx").get<int>();
    vs.solve_ny = v.at("solve_ny").get<int>();
    vs.slab_l = v.at("slab_l").get<double>();
    vs.slab_cells = v.at("slab_cells").get<int>();
    vs.slab_l_short = v.at("slab_l_short").get<double>();
    vs.slab_cells_short = v.at("slab_cells_short").get<int>();
    vs.tol = cfg.at("slab").at("tol").get<double>();
    vs.eps0 = cfg.at("slab").at("eps0").get<double>();
    vs.eps_min = cfg.at("slab").at("eps_min").get<double>();
    vs.seed = cfg.at("seed").get<uint64_t>();
    char* out_json = nullptr;
    int all_pass = 0;
    const int rc = bek_verify_json(&vs, config_hash, &out_json, &all_pass);
    if (rc != BEK_OK) die(rc);
    CStr holder(out_json);
    write_file(out / "verify.json", out_json);
    std::cout << (all_pass ? "verify: PASS" : "verify: FAIL") << "\n";
    return all_pass ? 0 : 3;
  }

  auto grid = make_grid(cfg);
  auto op = make_operator(cfg, grid.get());

  if (cmd == "assemble") {
    char* meta = nullptr;
    int rc = bek_operator_meta_json(op.get(), config_hash, &meta);
    if (rc != BEK_OK) die(rc);
    CStr holder(meta);
    write_file(out / "operator.meta.json", meta);
    // per-node collision frequency table
    const int np = bek_grid_size(grid.get());
    std::vector<double> px(np), y(np), w(np), nu(np);
    bek_grid_nodes(grid.get(), px.data(), y.data(), w.data());
    bek_operator_nu(op.get(), nu.data());
    std::string csv = "px,y,weight,nu\n";
    char line[128];
    for (int i = 0; i < np; ++i) {
      snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", px[i], y[i],
               w[i], nu[i]);
      csv += line;
    }
    write_file(out / "nu.csv", csv);
    if (dump_matrix) {
      std::vector<double> K(static_cast<size_t>(np) * np);
      rc = bek_operator_gain_matrix(op.get(), K.data());
      if (rc != BEK_OK) die(rc);
      std::ofstream bin(out / "operator.bin", std::ios::binary);
      const uint64_t n64 = np;
      bin.write(reinterpret_cast<const char*>(&n64), sizeof(n64));
      bin.write(reinterpret_cast<const char*>(&n64), sizeof(n64));
      bin.write(reinterpret_cast<const char*>(K.data()),
                static_cast<std::streamsize>(K.size() * sizeof(double)));
    }
    return 0;
  }

  if (cmd == "spectrum") {
    char* s = nullptr;
    const int rc = bek_spectrum_json(op.get(), config_hash, &s);
    if (rc != BEK_OK) die(rc);
    CStr holder(s);
    write_file(out / "spectrum.json", s);
    return 0;
  }

  if (cmd == "constants") {
    char* s = nullptr;
    const int rc = bek_constants_json(op.get(), config_hash, &s);
    if (rc != BEK_OK) die(rc);
    CStr holder(s);
    write_file(out / "constants.json", s);
    return 0;
  }

  if (cmd == "solve") {
    auto sol = run_solve(cfg, grid.get(), op.get());
    int rc = bek_solution_write_csv(sol.get(), (out / "solution.csv").c_str());
    if (rc != BEK_OK) die(rc);
    rc = bek_solution_write_field_csv(sol.get(), (out / "field.csv").c_str());
    if (rc != BEK_OK) die(rc);
    rc = bek_solution_write_field_bin(sol.get(), (out / "field.bin").c_str());
    if (rc != BEK_OK) die(rc);
    char* s = nullptr;
    rc = bek_solution_diagnostics_json(sol.get(), op.get(), config_hash, &s);
    if (rc != BEK_OK) die(rc);
    CStr holder(s);
    write_file(out / "diagnostics.json", s);
    return 0;
  }

  if (cmd == "sweep") {
    // refinement studies around the configured slab problem
    std::string csv =
        "study,param,eta_fit,a_inf,b_inf,flux_drift,entropy_increase,"
        "iterations\n";
    auto run_case = [&](const std::string& study, double param, json c) {
      auto sol = run_solve(c, grid.get(), op.get());
      char* s = nullptr;
      const int rc =
          bek_solution_diagnostics_json(sol.get(), op.get(), config_hash, &s);
      char line[256];
      if (rc != BEK_OK) {
        // fit may be unavailable (e.g. too few samples above the decay
        // floor); keep the row so the study table stays complete
        snprintf(line, sizeof(line), "%s,%.17g,nan,nan,nan,nan,nan,0\n",
                 study.c_str(), param);
        csv += line;
        return;
      }
      CStr holder(s);
      const json d = json::parse(s);
      snprintf(line, sizeof(line), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
               study.c_str(), param, d.at("eta_fit").get<double>(),
               d.at("a_inf").get<double>(), d.at("b_inf").get<double>(),
               d.at("flux_drift").get<double>(),
               d.at("entropy_increase").get<double>(),
               d.at("iterations").get<int>());
      csv += line;
    };
    const double l0 = cfg.at("slab").at("l").get<double>();
    const int n0 = cfg.at("slab").at("n_cells").get<int>();
    for (double fac : {0.5, 1.0, 2.0}) {
      json c = cfg;
      c["slab"]["l"] = l0 * fac;
      c["slab"]["n_cells"] = static_cast<int>(n0 * fac);
      run_case("slab_length", l0 * fac, c);
    }
    for (double fac : {0.5, 1.0, 2.0}) {
      json c = cfg;
      c["slab"]["n_cells"] = static_cast<int>(n0 * fac);
      run_case("x_refinement", n0 * fac, c);
    }
    for (double eps : {0.5, 0.25, 0.125}) {
      json c = cfg;
      c["slab"]["scheme"] = "source_iteration";
      c["slab"]["epsilon"] = eps;
      run_case("epsilon", eps, c);
    }
    write_file(out / "sweep.csv", csv);
    return 0;
  }

  std::cerr << "error: unknown command\n";
  return 1;
}
