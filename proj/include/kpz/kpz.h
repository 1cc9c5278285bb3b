#ifndef KPZ_KPZ_H
#define KPZ_KPZ_H

#include <stddef.h>
#include <stdint.h>

#if defined(KPZ_BUILDING_LIBRARY)
#define KPZ_API __attribute__((visibility("default")))
#else
#define KPZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  KPZ_OK = 0,
  KPZ_ERR_ARG = 1,
  KPZ_ERR_POLE = 2,
  KPZ_ERR_CONVERGENCE = 3,
  KPZ_ERR_CONTOUR_POLE = 4,
  KPZ_ERR_GEOMETRY = 5,
  KPZ_ERR_CONSTRAINT = 6,
  KPZ_ERR_BRANCH = 7,
  KPZ_ERR_SINGULARITY = 8,
  KPZ_ERR_NUMERICAL = 9,
  KPZ_ERR_DOMAIN = 10,
  KPZ_ERR_BUDGET = 11,
  KPZ_ERR_WINDOW = 12,
  KPZ_ERR_INTERNAL = 99
} kpz_status;

typedef enum { KPZ_DIST_EDGE = 0, KPZ_DIST_FAN, KPZ_DIST_A2BM, KPZ_DIST_GUE } kpz_dist_kind;

typedef struct kpz_config kpz_config;    /* numeric configuration */
typedef struct kpz_table kpz_table;      /* distribution table */
typedef struct kpz_samples kpz_samples;  /* vector of doubles */

KPZ_API const char* kpz_version(void);
KPZ_API const char* kpz_status_name(kpz_status s);
/* message of the last failure on the calling thread */
KPZ_API const char* kpz_last_error(void);
KPZ_API void kpz_string_free(char* s);

KPZ_API int kpz_default_threads(void);
KPZ_API void kpz_set_threads(int n);

KPZ_API kpz_status kpz_config_create(kpz_config** out);
KPZ_API void kpz_config_destroy(kpz_config* c);
/* keys: n_per_segment, mu_nodes, mu_x_max, tail_height, imag_tol, range_tol, threads, line_nodes,
   ktilde_x_nodes, ktilde_t_nodes, eps_eta_nodes, eps_zeta_nodes, eps_mu_nodes,
   eps_tol, eps_max_nodes */
KPZ_API kpz_status kpz_config_set(kpz_config* c, const char* key, const char* value);
KPZ_API kpz_status kpz_config_json(const kpz_config* c, char** out);

/* ---- distributions ---- */
KPZ_API kpz_status kpz_dist_point(const kpz_config* c, kpz_dist_kind kind, double T, double X, double s, double* F,
                                  double* imag);
KPZ_API kpz_status kpz_ktilde_point(const kpz_config* c, double T, double s, double* F);
KPZ_API kpz_status kpz_finite_eps_cdf(const kpz_config* c, double eps, double rho_plus, double t, long m, long x,
                                      double* F);
KPZ_API kpz_status kpz_dist_table(const kpz_config* c, kpz_dist_kind kind, double T, double X, const double* s,
                                  size_t n, kpz_table** out);
KPZ_API void kpz_table_destroy(kpz_table* t);
KPZ_API size_t kpz_table_size(const kpz_table* t);
KPZ_API kpz_status kpz_table_row(const kpz_table* t, size_t i, double* s, double* F, double* imag);
/* range and monotonicity check; number of warnings added */
KPZ_API size_t kpz_table_check(kpz_table* t, double monotone_slack, double range_tol);
KPZ_API size_t kpz_table_warning_count(const kpz_table* t);
KPZ_API const char* kpz_table_warning(const kpz_table* t, size_t i);
KPZ_API kpz_status kpz_table_csv(const kpz_table* t, char** out);
KPZ_API kpz_status kpz_table_json(const kpz_table* t, const kpz_config* c, char** out);
/* spline interpolation of the table, clamped outside */
KPZ_API kpz_status kpz_table_eval(const kpz_table* t, double s, double* F);

/* eta, zeta and mu quadrature grids of the edge determinant */
KPZ_API kpz_status kpz_contours_json(const kpz_config* c, double T, double X, char** out);

/* ---- samples ---- */
KPZ_API void kpz_samples_destroy(kpz_samples* s);
KPZ_API size_t kpz_samples_size(const kpz_samples* s);
KPZ_API const double* kpz_samples_data(const kpz_samples* s);
KPZ_API kpz_status kpz_ks_distance(const kpz_samples* s, const kpz_table* t, double* out);

/* ---- simulation; trial k uses an RNG stream derived from (seed, k) ---- */
/* X^2 - 2^{1/3} h^fluc at eps, rho = (0, 1/2) */
KPZ_API kpz_status kpz_sample_edge(double eps, double T, double X, size_t n, uint64_t seed, int threads,
                                   kpz_samples** out);
/* raw h^fluc samples for general densities */
KPZ_API kpz_status kpz_sample_fluctuation(double eps, double T, double X, double rho_minus, double rho_plus, size_t n,
                                          uint64_t seed, int threads, kpz_samples** out);
KPZ_API kpz_status kpz_particle_mc(double eps, double rho_plus, double t, long m, long x, size_t n, uint64_t seed,
                                   int threads, double* p, double* se);
/* mean, profile and se have nv entries */
KPZ_API kpz_status kpz_hydrodynamics(double eps, double rho_minus, double rho_plus, const double* v, size_t nv,
                                     int runs, uint64_t seed, int threads, double* mean, double* profile, double* se);
KPZ_API kpz_status kpz_sandwich(double eps, double T, double X, size_t n, uint64_t seed, int threads,
                                size_t* violations, double* max_excess);
/* thresholds given as NaN are replaced by the sample medians */
KPZ_API kpz_status kpz_fkg(double eps, double T, double X, size_t n, uint64_t seed, int threads, double s1,
                           double s2, double* joint, double* marg1, double* marg2, double* se);

/* ---- checks ---- */
KPZ_API kpz_status kpz_validate(const kpz_config* c, int full, char** json, int* all_pass);
KPZ_API kpz_status kpz_tails(const kpz_config* c, const double* T, size_t nT, const double* y, size_t ny, char** json,
                             int* all_hold);

#ifdef __cplusplus
}
#endif

#endif
