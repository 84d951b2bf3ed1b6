#include "bek/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

#include <json.hpp>

#include "bek/generators.hpp"
#include "bek/hydro.hpp"

namespace bek {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeta32 = 2.6123753486854883;

double now_s() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

struct Suite {
  std::vector<Check>& cs;
  double group_start = 0.0;
  size_t group_first = 0;

  void begin_group() {
    group_start = now_s();
    group_first = cs.size();
  }
  void end_group() {
    const double el = now_s() - group_start;
    for (size_t i = group_first; i < cs.size(); ++i)
      cs[i].group_elapsed_s = el;
  }
  void add(const std::string& name, bool pass, double measured, double bound,
           const std::string& detail = "") {
    cs.push_back(Check{name, pass, measured, bound, detail, 0.0});
  }
  void le(const std::string& name, double measured, double bound,
          const std::string& detail = "") {
    add(name, measured <= bound, measured, bound, detail);
  }
  void ge(const std::string& name, double measured, double bound,
          const std::string& detail = "") {
    add(name, measured >= bound, measured, bound, detail);
  }
};

Eigen::VectorXd cube_weight(const MomentumGrid& g) {
  Eigen::VectorXd c(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    const double w = 1.0 + std::sqrt(g.node(i).psq);
    c[i] = w * w * w;
  }
  return c;
}

// ||L psi||_rho / ||nu psi||_rho for the two collision invariants
void kernel_residuals(const CollisionOperator& op, double& rE, double& rM) {
  const MomentumGrid& g = op.grid();
  const int np = static_cast<int>(g.size());
  Eigen::VectorXd psiE(np), psiM(np);
  for (int i = 0; i < np; ++i) {
    const double opP = 1.0 + planck_P(g.node(i).psq);
    psiE[i] = g.node(i).psq * opP;
    psiM[i] = g.node(i).px * opP;
  }
  const Eigen::MatrixXd L = op.L_raw();
  const Eigen::VectorXd& rho = op.rho();
  auto wnorm = [&](const Eigen::VectorXd& v) {
    return std::sqrt((rho.array() * v.array().square()).sum());
  };
  rE = wnorm(L * psiE) / wnorm(op.nu().asDiagonal() * psiE);
  rM = wnorm(L * psiM) / wnorm(op.nu().asDiagonal() * psiM);
}

double weighted_field_dist(const Eigen::MatrixXd& f, const Eigen::VectorXd& ref,
                           const Eigen::VectorXd& rho) {
  // max over x of the rho-norm distance to the x-independent reference,
  // relative to the reference norm
  const double den =
      std::sqrt((rho.array() * ref.array().square()).sum()) + 1e-300;
  double num = 0.0;
  for (int j = 0; j < f.cols(); ++j) {
    const Eigen::VectorXd d = f.col(j) - ref;
    num = std::max(num, std::sqrt((rho.array() * d.array().square()).sum()));
  }
  return num / den;
}

}  // namespace

std::vector<Check> verify_suite(const VerifySetup& s) {
  std::vector<Check> checks;
  Suite suite{checks};

  auto grid = std::make_shared<MomentumGrid>(s.lambda, s.p_max, s.n_x, s.n_y,
                                             true);
  CollisionOperator op(grid, s.op_opts);
  const SpectrumReport rep = spectral_report(op);

  // ---- criterion 1: ellipse-measure oracle ----------------------------
  suite.begin_group();
  {
    std::vector<double> errs;
    for (int level = 0; level < 3; ++level) {
      const int points = s.op_opts.nu_quad_points << level;
      double emax = 0.0;
      const size_t stride = std::max<size_t>(1, grid->size() / 17);
      for (size_t i = 0; i < grid->size(); i += stride) {
        const GridNode& p = grid->node(i);
        const double exact = term1_measure_closed_form(p);
        emax = std::max(emax,
                        std::abs(term1_measure(p, points) - exact) / exact);
      }
      errs.push_back(emax);
    }
    suite.le("1.ellipse_rel_err", errs[0], 1e-3);
    suite.ge("1.ellipse_refine_ratio_a", errs[0] / std::max(errs[1], 1e-300),
             2.0);
    suite.ge("1.ellipse_refine_ratio_b", errs[1] / std::max(errs[2], 1e-300),
             2.0);
  }
  suite.end_group();

  // ---- criterion 2: collision-frequency growth ------------------------
  suite.begin_group();
  {
    suite.ge("2.nu_ratio_min", rep.nu0_fit, 1e-12);
    suite.le("2.nu_ratio_max_finite", rep.nu1_fit,
             std::numeric_limits<double>::max());
    const double t2_bound =
        2.0 * op.n() * kPi * kPi * std::sqrt(kPi) * kZeta32;
    double t2_max = 0.0, t1_excess = 0.0;
    for (size_t i = 0; i < grid->size(); ++i) {
      const GridNode& p = grid->node(i);
      t2_max = std::max(
          t2_max, nu_term2(p, s.lambda, op.n(), s.op_opts.nu_quad_points));
      // term-1 upper bound: (1 + 2P(lambda^2)) times the ellipse measure
      const double up = op.n() * kPi * kPi *
                        (1.0 + 2.0 / std::expm1(s.lambda * s.lambda)) *
                        term1_measure_closed_form(p);
      const double t1 =
          nu_term1(p, s.lambda, op.n(), s.op_opts.nu_quad_points);
      t1_excess = std::max(t1_excess, (t1 - up) / up);
    }
    suite.le("2.nu_term2_bound", t2_max, t2_bound);
    suite.le("2.nu_term1_upper", t1_excess, 1e-12);
  }
  suite.end_group();

  // ---- criterion 3: operator structure --------------------------------
  suite.begin_group();
  {
    // defect of the solver operator (after optional symmetrization)
    const Eigen::MatrixXd WL = op.rho().asDiagonal() * op.L();
    const double defect =
        (WL - WL.transpose()).norm() / std::max(WL.norm(), 1e-300);
    suite.le("3.symmetry_defect", defect, 1e-8);
    suite.add("3.near_null_count", rep.near_zero_count == 2,
              rep.near_zero_count, 2.0);
    suite.le("3.alpha0", rep.alpha0, 1.0 - 1e-12);

    CollisionOperator fine(std::make_shared<MomentumGrid>(
                               s.lambda, s.p_max, 2 * s.n_x, 2 * s.n_y, true),
                           s.op_opts);
    double fE, fM;
    kernel_residuals(fine, fE, fM);
    suite.ge("3.residual_refine_E", rep.kernel_residual_E / fE, 2.0);
    suite.ge("3.residual_refine_M", rep.kernel_residual_M / fM, 2.0);

    // spectral inequality on random kernel-orthogonal vectors
    const int np = static_cast<int>(grid->size());
    Eigen::MatrixXd Q = op.rho().asDiagonal() * op.L_raw();
    Q = (-0.5 * (Q + Q.transpose())).eval();
    const Eigen::VectorXd bdiag =
        op.rho().array() * cube_weight(*grid).array();
    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd v(np);
      for (int i = 0; i < np; ++i) v[i] = gauss(rng);
      for (int k = 0; k < rep.kernel_vectors.cols(); ++k) {
        const Eigen::VectorXd& u = rep.kernel_vectors.col(k);
        const double proj = (bdiag.array() * u.array() * v.array()).sum() /
                            (bdiag.array() * u.array().square()).sum();
        v -= proj * u;
      }
      const double bb = (bdiag.array() * v.array().square()).sum();
      worst = std::min(worst, v.dot(Q * v) / (rep.nu0_spectral * bb));
    }
    suite.ge("3.spectral_inequality", worst, 1.0 - 1e-8,
             "min over 100 vectors of -(Lv,v)/(nu0 (1+|p|)^3 v,v)");
  }
  suite.end_group();

  // ---- criterion 4: constants ------------------------------------------
  HydroBasis basis(grid);
  suite.begin_group();
  {
    const double oracle = gamma_series_oracle(200000);
    const double extrap = gamma_extrapolated(s.lambda, s.p_max, 256, 256);
    suite.le("4.gamma_extrapolated", std::abs(extrap - oracle) / oracle, 1e-2);
    const DecayConstants dc = decay_constants(basis, rep.nu0_spectral);
    suite.add("4.c1_formula",
              dc.c1 == std::min(0.5 * dc.nu0, 0.5 * dc.nu0 / dc.c2), dc.c1,
              std::min(0.5 * dc.nu0, 0.5 * dc.nu0 / dc.c2));
    suite.ge("4.c2_lower", dc.c2, 2.0 * (1.0 - 1e-12));
    suite.ge("4.positive_moments",
             std::min({basis.alpha2(), basis.beta2(), basis.gamma()}), 1e-12);
  }
  suite.end_group();

  // shared solver-scale objects
  auto sgrid = std::make_shared<MomentumGrid>(s.lambda, s.p_max, s.solve_nx,
                                              s.solve_ny, true);
  CollisionOperator sop(sgrid, s.op_opts);
  HydroBasis sbasis(sgrid);
  const SpectrumReport srep = spectral_report(sop);
  const DecayConstants sconsts = decay_constants(sbasis, srep.nu0_spectral);

  SlabConfig short_cfg;
  short_cfg.l = s.slab_l_short;
  short_cfg.n_cells = s.slab_cells_short;
  short_cfg.tol = s.tol;
  short_cfg.eps0 = s.eps0;
  short_cfg.eps_min = s.eps_min;

  // ---- criterion 5: exact solutions ------------------------------------
  suite.begin_group();
  try {
    IndataSpec km;
    km.generator = "kernel_mode";
    km.a_E = 1.0;
    const Eigen::VectorXd fE = make_indata(*sgrid, km);
    MilneSolution solE = solve_milne(fE, 0.0, short_cfg, sop, sbasis);
    suite.le("5.kernel_mode_psiE",
             weighted_field_dist(solE.f, fE, sbasis.rho()), 1e-8);

    km.a_E = 0.0;
    km.b_M = 0.7;
    const Eigen::VectorXd fM = make_indata(*sgrid, km);
    MilneSolution solM =
        solve_milne(fM, 0.7 * sbasis.gamma(), short_cfg, sop, sbasis);
    suite.le("5.kernel_mode_psiM",
             weighted_field_dist(solM.f, fM, sbasis.rho()), 1e-8);

    MilneSolution sol0 = solve_milne(
        Eigen::VectorXd::Zero(sgrid->size()), 0.0, short_cfg, sop, sbasis);
    suite.le("5.zero_uniqueness", sol0.f.cwiseAbs().maxCoeff(), 1e-10);
  } catch (const std::exception& e) {
    suite.add("5.exception", false, 0.0, 0.0, e.what());
  }
  suite.end_group();

  // ---- criterion 6: structural suite on random data --------------------
  suite.begin_group();
  try {
    SlabConfig long_cfg = short_cfg;
    long_cfg.l = s.slab_l;
    long_cfg.n_cells = s.slab_cells;

    IndataSpec rnd;
    rnd.generator = "random";
    rnd.amplitude = 1.0;
    rnd.seed = s.seed;
    const Eigen::VectorXd f0 = make_indata(*sgrid, rnd);
    const double E = 0.8 * sbasis.gamma();
    MilneSolution sol = solve_milne(f0, E, long_cfg, sop, sbasis);
    const DecayReport dr = decay_diagnostics(sol, sconsts, sbasis);

    double flux_dev = 0.0;
    for (double Ej : sol.E) flux_dev = std::max(flux_dev, std::abs(Ej - E));
    suite.le("6.flux_constant", flux_dev,
             10.0 * s.tol * std::max(1.0, std::abs(E)));
    suite.le("6.entropy_monotone", dr.entropy_increase, s.tol);
    suite.ge("6.entropy_nonneg", dr.entropy_min, -s.tol);
    suite.ge("6.eta_fit_ge_c1", dr.eta_fit, 0.9 * sconsts.c1,
             "c1 = " + std::to_string(sconsts.c1));
    suite.le("6.b_inf", std::abs(sol.b_inf - E / sbasis.gamma()) /
                            std::abs(E / sbasis.gamma()),
             1e-3);
    suite.le("6.drift_a", dr.drift_a,
             10.0 * s.tol * (1.0 + std::abs(E)));
    suite.le("6.drift_b", dr.drift_b,
             10.0 * s.tol * (1.0 + std::abs(E)));
  } catch (const std::exception& e) {
    suite.add("6.exception", false, 0.0, 0.0, e.what());
  }
  suite.end_group();

  // ---- criterion 7: uniqueness cross-validation -------------------------
  suite.begin_group();
  try {
    struct Case {
      const char* name;
      IndataSpec spec;
      double E;
    };
    std::vector<Case> cases(3);
    cases[0].name = "7.crossval_bump";
    cases[0].spec.generator = "bump";
    cases[0].spec.amplitude = 1.0;
    cases[0].spec.center = 1.2;
    cases[0].spec.width = 0.6;
    cases[0].E = 0.3 * sbasis.gamma();
    cases[1].name = "7.crossval_random";
    cases[1].spec.generator = "random";
    cases[1].spec.amplitude = 1.0;
    cases[1].spec.seed = s.seed + 41;
    cases[1].E = 0.0;
    cases[2].name = "7.crossval_kernel_mode";
    cases[2].spec.generator = "kernel_mode";
    cases[2].spec.a_E = 0.4;
    cases[2].spec.b_M = 0.2;
    cases[2].E = 0.2 * sbasis.gamma();

    for (const Case& c : cases) {
      const Eigen::VectorXd f0 = make_indata(*sgrid, c.spec);
      SlabConfig ca = short_cfg, cb = short_cfg;
      ca.scheme = Scheme::direct_sparse;
      cb.scheme = Scheme::epsilon_chain;
      MilneSolution sa = solve_milne(f0, c.E, ca, sop, sbasis);
      MilneSolution sb = solve_milne(f0, c.E, cb, sop, sbasis);
      suite.le(c.name, cross_validate(sa, sb, *sgrid), 1e-4);
    }
  } catch (const std::exception& e) {
    suite.add("7.exception", false, 0.0, 0.0, e.what());
  }
  suite.end_group();

  // ---- criterion 8: transport resolvent ---------------------------------
  suite.begin_group();
  {
    const int np = static_cast<int>(sgrid->size());
    const double eps = 0.05, lres = 4.0;
    auto smooth_field = [&](int N) {
      Eigen::MatrixXd f(np, N + 1);
      for (int i = 0; i < np; ++i)
        for (int j = 0; j <= N; ++j)
          f(i, j) = std::sin(kPi * (static_cast<double>(j) / N)) *
                    std::exp(-0.5 * sgrid->node(i).psq);
      return f;
    };
    auto res_norm = [&](int N) {
      const Eigen::MatrixXd f = smooth_field(N);
      const Eigen::MatrixXd g = transport_resolvent(f, eps, lres, *sgrid);
      return transport_resolvent_residual(f, g, eps, lres, *sgrid).norm() /
             std::sqrt(static_cast<double>(f.size()));
    };
    const double r1 = res_norm(64), r2 = res_norm(128);
    suite.ge("8.residual_halving", r1 / std::max(r2, 1e-300), 2.0);

    // constant-in-x source against the characteristic closed form
    const int N = 64;
    Eigen::MatrixXd fc(np, N + 1);
    for (int i = 0; i < np; ++i)
      fc.row(i).setConstant(std::exp(-0.5 * sgrid->node(i).psq));
    const Eigen::MatrixXd g = transport_resolvent(fc, eps, lres, *sgrid);
    double dev = 0.0;
    for (int i = 0; i < np; ++i) {
      const double px = sgrid->node(i).px;
      if (px <= 0.0) continue;
      for (int j = 0; j <= N; ++j) {
        const double x = lres * j / N;
        const double exact =
            -2.0 * fc(i, 0) * std::expm1(eps * x / px);
        dev = std::max(dev, std::abs(g(i, j) - exact));
      }
    }
    suite.le("8.closed_form", dev, 1e-8);
  }
  suite.end_group();

  return checks;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string verify_json(const std::vector<Check>& checks,
                        uint64_t config_hash) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Check& c : checks) {
    arr.push_back({{"name", c.name},
                   {"pass", c.pass},
                   {"measured", c.measured},
                   {"bound", c.bound},
                   {"detail", c.detail},
                   {"group_elapsed_s", c.group_elapsed_s}});
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx",
           static_cast<unsigned long long>(config_hash));
  nlohmann::json j{{"config_hash", buf},
                   {"all_pass", all_pass(checks)},
                   {"checks", arr}};
  return j.dump(2) + "\n";
}

}  // namespace bek
