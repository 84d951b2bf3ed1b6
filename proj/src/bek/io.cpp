#include "bek/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace bek {

using nlohmann::json;

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string hex(uint64_t v) {
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json grid_block(const MomentumGrid& g) {
  return json{{"lambda", g.lambda()},
              {"p_max", g.p_max()},
              {"n_x", g.n_x()},
              {"n_y", g.n_y()},
              {"refine_near_cutoff", g.refined()},
              {"nodes", g.size()},
              {"volume", g.volume()},
              {"volume_analytic",
               MomentumGrid::analytic_volume(g.lambda(), g.p_max())},
              {"grid_hash", hex(g.hash())}};
}

}  // namespace

std::string operator_meta_json(const CollisionOperator& op,
                               uint64_t config_hash) {
  const Eigen::VectorXd& nu = op.nu();
  json j{{"config_hash", hex(config_hash)},
         {"grid", grid_block(op.grid())},
         {"n", op.n()},
         {"symmetrize", op.options().symmetrize},
         {"deflate", op.options().deflate},
         {"nu_quad_points", op.options().nu_quad_points},
         {"symmetry_defect", op.symmetry_defect()},
         {"nu_min", nu.minCoeff()},
         {"nu_max", nu.maxCoeff()}};
  return j.dump(2) + "\n";
}

std::string spectrum_json(const SpectrumReport& rep, uint64_t grid_hash,
                          uint64_t config_hash) {
  json j{{"config_hash", hex(config_hash)},
         {"grid_hash", hex(grid_hash)},
         {"alpha0", rep.alpha0},
         {"nu0_spectral", rep.nu0_spectral},
         {"nu0_fit", rep.nu0_fit},
         {"nu1_fit", rep.nu1_fit},
         {"kernel_residual_E", rep.kernel_residual_E},
         {"kernel_residual_M", rep.kernel_residual_M},
         {"symmetry_defect", rep.symmetry_defect},
         {"near_zero_count", rep.near_zero_count},
         {"kernel_tolerance", rep.kernel_tolerance}};
  return j.dump(2) + "\n";
}

std::string constants_json(const HydroBasis& basis, const DecayConstants& c,
                           const SpectrumReport& rep, double gamma_extrap,
                           double gamma_oracle, uint64_t grid_hash,
                           uint64_t config_hash) {
  json j{{"config_hash", hex(config_hash)},
         {"grid_hash", hex(grid_hash)},
         {"alpha2", basis.alpha2()},
         {"beta2", basis.beta2()},
         {"gamma", basis.gamma()},
         {"gamma_extrapolated", gamma_extrap},
         {"gamma_series_oracle", gamma_oracle},
         {"nu0", c.nu0},
         {"nu1", rep.nu1_fit},
         {"alpha0", rep.alpha0},
         {"c1", c.c1},
         {"c2", c.c2},
         {"c3", c.c3}};
  return j.dump(2) + "\n";
}

std::string diagnostics_json(const MilneSolution& sol, const DecayReport& rep,
                             uint64_t grid_hash, uint64_t config_hash) {
  json j{{"config_hash", hex(config_hash)},
         {"grid_hash", hex(grid_hash)},
         {"scheme", scheme_to_string(sol.cfg.scheme)},
         {"l", sol.cfg.l},
         {"n_cells", sol.cfg.n_cells},
         {"E_target", sol.E_target},
         {"iterations", sol.history.iterations},
         {"converged", sol.history.converged},
         {"eps_values", sol.history.eps_values},
         {"eta_defined", rep.eta_defined},
         {"eta_flag", rep.eta_flag},
         {"eta_fit", rep.eta_fit},
         {"c_fit", rep.c_fit},
         {"fit_samples", rep.fit_samples},
         {"a_inf", rep.a_inf},
         {"b_inf", rep.b_inf},
         {"b_inf_conserved", rep.b_inf_conserved},
         {"drift_a", rep.drift_a},
         {"drift_b", rep.drift_b},
         {"flux_drift", rep.flux_drift},
         {"entropy_increase", rep.entropy_increase},
         {"entropy_min", rep.entropy_min},
         {"window_x0", rep.window_x0},
         {"window_x1", rep.window_x1}};
  return j.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io-error: cannot open " + path);
  out << content;
  if (!out) throw std::runtime_error("io-error: write failed for " + path);
}

void write_solution_csv(const std::string& path, const MilneSolution& sol) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io-error: cannot open " + path);
  out << "x,a,b,E,W,wnorm2\n";
  out.precision(17);
  for (size_t j = 0; j < sol.x.size(); ++j) {
    out << sol.x[j] << ',' << sol.a[j] << ',' << sol.b[j] << ',' << sol.E[j]
        << ',' << sol.W[j] << ',' << sol.wnorm2[j] << '\n';
  }
}

void write_field_csv(const std::string& path, const MomentumGrid& grid,
                     const MilneSolution& sol) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io-error: cannot open " + path);
  out.precision(17);
  out << "px,y,weight";
  for (double x : sol.x) out << ",f@" << x;
  out << '\n';
  for (Eigen::Index i = 0; i < sol.f.rows(); ++i) {
    const GridNode& nd = grid.node(i);
    out << nd.px << ',' << nd.y << ',' << nd.weight;
    for (Eigen::Index j = 0; j < sol.f.cols(); ++j) out << ',' << sol.f(i, j);
    out << '\n';
  }
}

void write_field_bin(const std::string& path, const MilneSolution& sol) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io-error: cannot open " + path);
  const uint64_t rows = sol.f.rows(), cols = sol.f.cols();
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  out.write(reinterpret_cast<const char*>(sol.f.data()),
            static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!out) throw std::runtime_error("io-error: write failed for " + path);
}

}  // namespace bek
