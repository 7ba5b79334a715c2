/* C interface to the gplab numerical core.
 *
 * Every function that can fail returns a gplab_status; on failure the
 * message is available from gplab_last_error() on the calling thread.
 * Objects are opaque handles released with the matching _destroy call.
 * Strings returned through char** are owned by the caller and released with
 * gplab_string_free. Complex arrays are interleaved (re, im) doubles.
 */
#ifndef GPLAB_GPLAB_H
#define GPLAB_GPLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(GPLAB_BUILDING_LIBRARY)
#define GPLAB_API __attribute__((visibility("default")))
#else
#define GPLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gplab_status {
  GPLAB_OK = 0,
  GPLAB_ERR_INVALID_ARGUMENT = 1,
  GPLAB_ERR_GUARDRAIL = 2,
  GPLAB_ERR_NUMERICAL = 3,
  GPLAB_ERR_IO = 4,
  GPLAB_ERR_INTERNAL = 5
} gplab_status;

typedef struct gplab_grid gplab_grid;
typedef struct gplab_potential gplab_potential;
typedef struct gplab_scattering gplab_scattering;
typedef struct gplab_field gplab_field;
typedef struct gplab_nbody gplab_nbody;
typedef struct gplab_kernel gplab_kernel;

GPLAB_API const char* gplab_version(void);
GPLAB_API const char* gplab_last_error(void);
GPLAB_API void gplab_string_free(char* s);

/* Periodic grid [0, L)^d with M points per axis. */
GPLAB_API gplab_status gplab_grid_create(int d, int M, double L, gplab_grid** out);
GPLAB_API void gplab_grid_destroy(gplab_grid* grid);
GPLAB_API size_t gplab_grid_size(const gplab_grid* grid);

/* Radial potential; family is "zero", "bump" or "poly". */
GPLAB_API gplab_status gplab_potential_create(const char* family, double R, double lambda,
                                              gplab_potential** out);
GPLAB_API void gplab_potential_destroy(gplab_potential* V);
/* 4 pi int prefactor V(scale r) r^2 dr */
GPLAB_API gplab_status gplab_potential_b0(const gplab_potential* V, double scale,
                                          double prefactor, double* out);

GPLAB_API gplab_status gplab_scattering_solve(const gplab_potential* V, double r_max, double tol,
                                              gplab_scattering** out);
GPLAB_API void gplab_scattering_destroy(gplab_scattering* sol);
/* Scattering length from the asymptotic fit and from (1/8 pi) int V f. */
GPLAB_API gplab_status gplab_scattering_lengths(const gplab_scattering* sol,
                                                double* a0_asym, double* a0_int);
GPLAB_API gplab_status gplab_scattering_f(const gplab_scattering* sol, double r, double* out);

/* Lowest Neumann eigenvalue on the ball of radius ell1; also returns the
 * scattering length a of V. */
GPLAB_API gplab_status gplab_neumann_solve(const gplab_potential* V, double ell1, double tol,
                                           double* e, double* a);

/* Normalized one-particle profile: kind is "constant", "cosine", "gaussian"
 * or "plane_wave". */
GPLAB_API gplab_status gplab_profile_create(const gplab_grid* grid, const char* kind,
                                            double amplitude, int mode, double width,
                                            double center, gplab_field** out);
/* count is the number of complex entries (the grid size). */
GPLAB_API gplab_status gplab_field_create(const gplab_grid* grid, const double* values,
                                          size_t count, gplab_field** out);
GPLAB_API void gplab_field_destroy(gplab_field* f);
GPLAB_API gplab_status gplab_field_values(const gplab_field* f, double* values, size_t count);

GPLAB_API gplab_status gplab_nbody_product(const gplab_field* phi, int N, gplab_nbody** out);
GPLAB_API void gplab_nbody_destroy(gplab_nbody* state);
GPLAB_API gplab_status gplab_nbody_norm(const gplab_nbody* state, double* out);
/* Strang evolution to t_end under sum_{i<j} prefactor V(scale |x_i - x_j|);
 * V may be NULL for free evolution. */
GPLAB_API gplab_status gplab_nbody_evolve(const gplab_nbody* state, const gplab_potential* V,
                                          double scale, double prefactor, double dt,
                                          double t_end, gplab_nbody** out,
                                          double* max_energy_drift);
GPLAB_API gplab_status gplab_nbody_marginal(const gplab_nbody* state, int k, gplab_kernel** out);

GPLAB_API gplab_status gplab_kernel_pure(const gplab_field* phi, gplab_kernel** out);
GPLAB_API void gplab_kernel_destroy(gplab_kernel* gamma);
GPLAB_API size_t gplab_kernel_dim(const gplab_kernel* gamma);
GPLAB_API gplab_status gplab_kernel_trace(const gplab_kernel* gamma, double* re, double* im);
GPLAB_API gplab_status gplab_kernel_hs_distance(const gplab_kernel* a, const gplab_kernel* b,
                                                double* out);

/* Gross-Pitaevskii flow i u_t = -Delta u + 8 pi a0 |u|^2 u. */
GPLAB_API gplab_status gplab_gp_evolve(const gplab_field* u0, double a0, double dt,
                                       double t_end, gplab_field** out,
                                       double* max_energy_drift);

/* Config text in the sectioned key = value format. `violations` receives a
 * JSON array of {"kind", "message"}; empty array when valid. */
GPLAB_API gplab_status gplab_validate_config(const char* config_text, char** violations);
/* Runs an experiment. Either argument may be NULL: without config_text the
 * experiment's defaults are used; without experiment the config must name
 * one. A config naming a different experiment is a validation failure.
 * exit_code follows the CLI convention (0 ok, 1 failed, 2 validation,
 * 3 guardrail); report receives report.json text, empty if nothing ran.
 * Validation findings are reported through gplab_last_error. */
GPLAB_API gplab_status gplab_run(const char* experiment, const char* config_text,
                                 const char* out_dir, uint64_t seed, int* exit_code,
                                 char** report);

#ifdef __cplusplus
}
#endif

#endif /* GPLAB_GPLAB_H */
