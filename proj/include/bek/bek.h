/* C interface to the condensate-excitation kinetic solver.
 *
 * All functions return BEK_OK (0) or a nonzero error code; the message for
 * the most recent failure on the calling thread is available through
 * bek_last_error(). Objects are opaque handles owned by the caller and
 * released with the matching _destroy function. Strings returned through
 * char** out-parameters are heap-allocated; free them with bek_string_free.
 */
#ifndef BEK_H
#define BEK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  BEK_OK = 0,
  BEK_ERR_INVALID_ARG = 1,
  BEK_ERR_DOMAIN = 2, /* invalid momentum-domain parameters */
  BEK_ERR_SOLVER = 3, /* non-convergence, singular system, resource limit */
  BEK_ERR_IO = 4,
  BEK_ERR_INTERNAL = 5
};

typedef struct bek_grid bek_grid;
typedef struct bek_operator bek_operator;
typedef struct bek_solution bek_solution;

const char* bek_last_error(void);
void bek_string_free(char* s);

/* ---- momentum grid --------------------------------------------------- */

int bek_grid_create(double lambda, double p_max, int n_x, int n_y,
                    int refine_near_cutoff, bek_grid** out);
void bek_grid_destroy(bek_grid* g);
int bek_grid_size(const bek_grid* g);
double bek_grid_volume(const bek_grid* g);
double bek_grid_analytic_volume(double lambda, double p_max);
uint64_t bek_grid_hash(const bek_grid* g);
/* any of px, y, weight may be NULL; arrays must hold bek_grid_size entries */
int bek_grid_nodes(const bek_grid* g, double* px, double* y, double* weight);

/* ---- collision operator ---------------------------------------------- */

int bek_operator_create(const bek_grid* g, double n, int nu_quad_points,
                        int symmetrize, int deflate, bek_operator** out);
void bek_operator_destroy(bek_operator* op);
double bek_operator_symmetry_defect(const bek_operator* op);
int bek_operator_nu(const bek_operator* op, double* out);
/* gain matrix K, row-major, size^2 entries */
int bek_operator_gain_matrix(const bek_operator* op, double* out);
int bek_operator_meta_json(const bek_operator* op, uint64_t config_hash,
                           char** out);
int bek_spectrum_json(bek_operator* op, uint64_t config_hash, char** out);
int bek_constants_json(bek_operator* op, uint64_t config_hash, char** out);

/* ---- in-data generators ----------------------------------------------- */

/* generator: "zero" | "kernel_mode" | "bump" | "random" */
int bek_indata(const bek_grid* g, const char* generator, double amplitude,
               double center, double width, double a_E, double b_M,
               uint64_t seed, double* out);

/* ---- half-space / slab solver ----------------------------------------- */

typedef struct bek_slab_config {
  double l;
  int n_cells;
  double epsilon;
  const char* scheme; /* direct_sparse | source_iteration | epsilon_chain */
  double tol;
  int max_iter;
  double eps0;
  double eps_min;
} bek_slab_config;

int bek_solve_milne(bek_operator* op, const double* f0, double energy_flux,
                    const bek_slab_config* cfg, bek_solution** out);
void bek_solution_destroy(bek_solution* s);
int bek_solution_points(const bek_solution* s); /* x-points, n_cells + 1 */
/* name: "x" | "a" | "b" | "E" | "W" | "wnorm2" */
int bek_solution_trajectory(const bek_solution* s, const char* name,
                            double* out);
int bek_solution_write_csv(const bek_solution* s, const char* path);
int bek_solution_write_field_csv(const bek_solution* s, const char* path);
int bek_solution_write_field_bin(const bek_solution* s, const char* path);
int bek_solution_diagnostics_json(const bek_solution* s, bek_operator* op,
                                  uint64_t config_hash, char** out);
int bek_cross_validate(const bek_solution* sa, const bek_solution* sb,
                       const bek_grid* g, double* out);

/* ---- property-verification suite -------------------------------------- */

typedef struct bek_verify_setup {
  double lambda;
  double p_max;
  int n_x, n_y;
  double n;
  int nu_quad_points;
  int symmetrize, deflate;
  int solve_nx, solve_ny;
  double slab_l;
  int slab_cells;
  double slab_l_short;
  int slab_cells_short;
  double tol;
  double eps0, eps_min;
  uint64_t seed;
} bek_verify_setup;

void bek_verify_setup_defaults(bek_verify_setup* s);
int bek_verify_json(const bek_verify_setup* s, uint64_t config_hash,
                    char** out, int* all_pass);

/* ---- scalar helpers ---------------------------------------------------- */

double bek_gamma_series_oracle(int terms);
double bek_gamma_extrapolated(double lambda, double p_max, int n_x, int n_y);
uint64_t bek_hash_string(const char* s);

#ifdef __cplusplus
}
#endif

#endif /* BEK_H */
