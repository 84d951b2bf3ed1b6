#include "bek/bek.h"

#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "bek/collision.hpp"
#include "bek/generators.hpp"
#include "bek/grid.hpp"
#include "bek/hydro.hpp"
#include "bek/io.hpp"
#include "bek/slab.hpp"
#include "bek/verify.hpp"

struct bek_grid {
  std::shared_ptr<const bek::MomentumGrid> g;
};

struct bek_operator {
  std::shared_ptr<const bek::MomentumGrid> g;
  std::unique_ptr<bek::CollisionOperator> op;
  std::unique_ptr<bek::HydroBasis> basis;
  std::optional<bek::SpectrumReport> spectrum;

  const bek::SpectrumReport& report() {
    if (!spectrum) spectrum = bek::spectral_report(*op);
    return *spectrum;
  }
};

struct bek_solution {
  std::shared_ptr<const bek::MomentumGrid> g;
  bek::MilneSolution sol;
};

namespace {

thread_local std::string g_error;

int fail(int code, const std::string& msg) {
  g_error = msg;
  return code;
}

int classify(const std::exception& e) {
  if (dynamic_cast<const bek::InvalidDomain*>(&e)) return BEK_ERR_DOMAIN;
  if (dynamic_cast<const std::invalid_argument*>(&e))
    return BEK_ERR_INVALID_ARG;
  const std::string what = e.what();
  if (what.rfind("io-error", 0) == 0) return BEK_ERR_IO;
  if (what.rfind("solver-", 0) == 0 || what.rfind("fit-window", 0) == 0 ||
      what.rfind("eigensolver", 0) == 0)
    return BEK_ERR_SOLVER;
  return BEK_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return fail(classify(e), e.what());
  } catch (...) {
    return fail(BEK_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bek::SlabConfig to_cpp(const bek_slab_config* cfg) {
  bek::SlabConfig c;
  if (!cfg) return c;
  c.l = cfg->l;
  c.n_cells = cfg->n_cells;
  c.epsilon = cfg->epsilon;
  if (cfg->scheme) c.scheme = bek::scheme_from_string(cfg->scheme);
  c.tol = cfg->tol;
  c.max_iter = cfg->max_iter;
  c.eps0 = cfg->eps0;
  c.eps_min = cfg->eps_min;
  return c;
}

}  // namespace

extern "C" {

const char* bek_last_error(void) { return g_error.c_str(); }

void bek_string_free(char* s) { delete[] s; }

int bek_grid_create(double lambda, double p_max, int n_x, int n_y,
                    int refine_near_cutoff, bek_grid** out) {
  if (!out) return fail(BEK_ERR_INVALID_ARG, "null output pointer");
  return guarded([&] {
    auto g = std::make_shared<bek::MomentumGrid>(lambda, p_max, n_x, n_y,
                                                 refine_near_cutoff != 0);
    *out = new bek_grid{std::move(g)};
    return BEK_OK;
  });
}

void bek_grid_destroy(bek_grid* g) { delete g; }

int bek_grid_size(const bek_grid* g) {
  return g ? static_cast<int>(g->g->size()) : 0;
}

double bek_grid_volume(const bek_grid* g) { return g ? g->g->volume() : 0.0; }

double bek_grid_analytic_volume(double lambda, double p_max) {
  return bek::MomentumGrid::analytic_volume(lambda, p_max);
}

uint64_t bek_grid_hash(const bek_grid* g) { return g ? g->g->hash() : 0; }

int bek_grid_nodes(const bek_grid* g, double* px, double* y, double* weight) {
  if (!g) return fail(BEK_ERR_INVALID_ARG, "null grid");
  for (size_t i = 0; i < g->g->size(); ++i) {
    const bek::GridNode& nd = g->g->node(i);
    if (px) px[i] = nd.px;
    if (y) y[i] = nd.y;
    if (weight) weight[i] = nd.weight;
  }
  return BEK_OK;
}

int bek_operator_create(const bek_grid* g, double n, int nu_quad_points,
                        int symmetrize, int deflate, bek_operator** out) {
  if (!g || !out) return fail(BEK_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    bek::OperatorOptions opts;
    opts.n = n;
    opts.nu_quad_points = nu_quad_points;
    opts.symmetrize = symmetrize != 0;
    opts.deflate = deflate != 0;
    if (!(n > 0.0))
      throw std::invalid_argument("invalid-arg: n must be > 0");
    if (nu_quad_points < 16)
      throw std::invalid_argument("invalid-arg: nu_quad_points must be >= 16");
    auto h = std::make_unique<bek_operator>();
    h->g = g->g;
    h->op = std::make_unique<bek::CollisionOperator>(g->g, opts);
    h->basis = std::make_unique<bek::HydroBasis>(g->g);
    *out = h.release();
    return BEK_OK;
  });
}

void bek_operator_destroy(bek_operator* op) { delete op; }

double bek_operator_symmetry_defect(const bek_operator* op) {
  return op ? op->op->symmetry_defect() : 0.0;
}

int bek_operator_nu(const bek_operator* op, double* out) {
  if (!op || !out) return fail(BEK_ERR_INVALID_ARG, "null argument");
  const Eigen::VectorXd& nu = op->op->nu();
  std::memcpy(out, nu.data(), sizeof(double) * nu.size());
  return BEK_OK;
}

int bek_operator_gain_matrix(const bek_operator* op, double* out) {
  if (!op || !out) return fail(BEK_ERR_INVALID_ARG, "null argument");
  const Eigen::MatrixXd& K = op->op->K();
  for (Eigen::Index i = 0; i < K.rows(); ++i)
    for (Eigen::Index j = 0; j < K.cols(); ++j) out[i * K.cols() + j] = K(i, j);
  return BEK_OK;
}

int bek_operator_meta_json(const bek_operator* op, uint64_t config_hash,
                           char** out) {
  if (!op || !out) return fail(BEK_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    *out = dup_string(bek::operator_meta_json(*op->op, config_hash));
    return BEK_OK;
  });
}

int bek_spectrum_json(bek_operator* op, uint64_t config_hash, char** out) {
  if (!op || !out) return fail(BEK_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    *out = dup_string(
        bek::spectrum_json(op->report(), op->g->hash(), config_hash));
    return BEK_OK;
  });
}

int bek_constants_json(bek_operator* op, uint64_t config_hash, char** out) {
  if (!op || !out) return fail(BEK_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const bek::SpectrumReport& rep = op->report();
    const bek::DecayConstants dc =
        bek::decay_constants(*op->basis, rep.nu0_spectral);
    const double extrap = bek::gamma_extrapolated(op->g->lambda(),
                                                  op->g->p_max(), 256, 256);
    const double oracle = bek::gamma_series_oracle(200000);
    *out = dup_string(bek::constants_json(*op->basis, dc, rep, extrap, oracle,
                                          op->g->hash(), config_hash));
    return BEK_OK;
  });
}

int bek_indata(const bek_grid* g, const char* generator, double amplitude,
               double center, double width, double a_E, double b_M,
               uint64_t seed, double* out) {
  if (!g || !generator || !out)
    return fail(BEK_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    bek::IndataSpec spec;
    spec.generator = generator;
    spec.amplitude = amplitude;
    spec.center = center;
    spec.width = width;
    spec.a_E = a_E;
    spec.b_M = b_M;
    spec.seed = seed;
    Eigen::VectorXd f = bek::make_indata(*g->g, spec);
    std::memcpy(out, f.data(), sizeof(double) * f.size());
    return BEK_OK;
  });
}

int bek_solve_milne(bek_operator* op, const double* f0, double energy_flux,
                    const bek_slab_config* cfg, bek_solution** out) {
  if (!op || !f0 || !cfg || !out)
    return fail(BEK_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const bek::SlabConfig c = to_cpp(cfg);
    Eigen::Map<const Eigen::VectorXd> f0v(f0, op->g->size());
    auto s = std::make_unique<bek_solution>();
    s->g = op->g;
    s->sol = bek::solve_milne(f0v, energy_flux, c, *op->op, *op->basis);
    *out = s.release();
    return BEK_OK;
  });
}

void bek_solution_destroy(bek_solution* s) { delete s; }

int bek_solution_points(const bek_solution* s) {
  return s ? static_cast<int>(s->sol.x.size()) : 0;
}

int bek_solution_trajectory(const bek_solution* s, const char* name,
                            double* out) {
  if (!s || !name || !out) return fail(BEK_ERR_INVALID_ARG, "null argument");
  const std::vector<double>* src = nullptr;
  const std::string n = name;
  if (n == "x") src = &s->sol.x;
  else if (n == "a") src = &s->sol.a;
  else if (n == "b") src = &s->sol.b;
  else if (n == "E") src = &s->sol.E;
  else if (n == "W") src = &s->sol.W;
  else if (n == "wnorm2") src = &s->sol.wnorm2;
  if (!src) return fail(BEK_ERR_INVALID_ARG, "unknown trajectory: " + n);
  std::memcpy(out, src->data(), sizeof(double) * src->size());
  return BEK_OK;
}

int bek_solution_write_csv(const bek_solution* s, const char* path) {
  if (!s || !path) return fail(BEK_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    bek::write_solution_csv(path, s->sol);
    return BEK_OK;
  });
}

int bek_solution_write_field_csv(const bek_solution* s, const char* path) {
  if (!s || !path) return fail(BEK_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    bek::write_field_csv(path, *s->g, s->sol);
    return BEK_OK;
  });
}

int bek_solution_write_field_bin(const bek_solution* s, const char* path) {
  if (!s || !path) return fail(BEK_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    bek::write_field_bin(path, s->sol);
    return BEK_OK;
  });
}

int bek_solution_diagnostics_json(const bek_solution* s, bek_operator* op,
                                  uint64_t config_hash, char** out) {
  if (!s || !op || !out) return fail(BEK_ERR_INVALID_ARG, "null argument");
  if (s->g->hash() != op->g->hash())
    return fail(BEK_ERR_INVALID_ARG, "grid-mismatch: solution vs operator");
  return guarded([&] {
    const bek::DecayConstants dc =
        bek::decay_constants(*op->basis, op->report().nu0_spectral);
    const bek::DecayReport rep =
        bek::decay_diagnostics(s->sol, dc, *op->basis);
    *out = dup_string(
        bek::diagnostics_json(s->sol, rep, s->g->hash(), config_hash));
    return BEK_OK;
  });
}

int bek_cross_validate(const bek_solution* sa, const bek_solution* sb,
                       const bek_grid* g, double* out) {
  if (!sa || !sb || !g || !out)
    return fail(BEK_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    *out = bek::cross_validate(sa->sol, sb->sol, *g->g);
    return BEK_OK;
  });
}

void bek_verify_setup_defaults(bek_verify_setup* s) {
  if (!s) return;
  const bek::VerifySetup d;
  s->lambda = d.lambda;
  s->p_max = d.p_max;
  s->n_x = d.n_x;
  s->n_y = d.n_y;
  s->n = d.op_opts.n;
  s->nu_quad_points = d.op_opts.nu_quad_points;
  s->symmetrize = d.op_opts.symmetrize ? 1 : 0;
  s->deflate = d.op_opts.deflate ? 1 : 0;
  s->solve_nx = d.solve_nx;
  s->solve_ny = d.solve_ny;
  s->slab_l = d.slab_l;
  s->slab_cells = d.slab_cells;
  s->slab_l_short = d.slab_l_short;
  s->slab_cells_short = d.slab_cells_short;
  s->tol = d.tol;
  s->eps0 = d.eps0;
  s->eps_min = d.eps_min;
  s->seed = d.seed;
}

int bek_verify_json(const bek_verify_setup* s, uint64_t config_hash,
                    char** out, int* all_pass) {
  if (!s || !out) return fail(BEK_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    bek::VerifySetup v;
    v.lambda = s->lambda;
    v.p_max = s->p_max;
    v.n_x = s->n_x;
    v.n_y = s->n_y;
    v.op_opts.n = s->n;
    v.op_opts.nu_quad_points = s->nu_quad_points;
    v.op_opts.symmetrize = s->symmetrize != 0;
    v.op_opts.deflate = s->deflate != 0;
    v.solve_nx = s->solve_nx;
    v.solve_ny = s->solve_ny;
    v.slab_l = s->slab_l;
    v.slab_cells = s->slab_cells;
    v.slab_l_short = s->slab_l_short;
    v.slab_cells_short = s->slab_cells_short;
    v.tol = s->tol;
    v.eps0 = s->eps0;
    v.eps_min = s->eps_min;
    v.seed = s->seed;
    const std::vector<bek::Check> checks = bek::verify_suite(v);
    if (all_pass) *all_pass = bek::all_pass(checks) ? 1 : 0;
    *out = dup_string(bek::verify_json(checks, config_hash));
    return BEK_OK;
  });
}

double bek_gamma_series_oracle(int terms) {
  return bek::gamma_series_oracle(terms);
}

double bek_gamma_extrapolated(double lambda, double p_max, int n_x, int n_y) {
  return bek::gamma_extrapolated(lambda, p_max, n_x, n_y);
}

uint64_t bek_hash_string(const char* s) {
  return s ? bek::fnv1a(s) : 0;
}

}  // extern "C"
