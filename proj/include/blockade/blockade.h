#ifndef BLOCKADE_BLOCKADE_H
#define BLOCKADE_BLOCKADE_H

/* C interface to the blockade library.
 *
 * Every function that can fail returns a status code (BLOCKADE_OK on
 * success). The message of the most recent failure on the calling thread is
 * available from blockade_last_error(). Handles are opaque and must be
 * released with the matching _free function. Strings returned through
 * const char** stay valid until the owning handle is freed.
 */

#include <stddef.h>

#if defined(_WIN32)
#if defined(BLOCKADE_BUILDING_LIBRARY)
#define BLOCKADE_API __declspec(dllexport)
#else
#define BLOCKADE_API __declspec(dllimport)
#endif
#else
#define BLOCKADE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum blockade_status {
  BLOCKADE_OK = 0,
  BLOCKADE_E_INVALID_ARGUMENT = 1,
  BLOCKADE_E_SPACE_MISMATCH = 2,
  BLOCKADE_E_TRUNCATION_TOO_SMALL = 3,
  BLOCKADE_E_DIMENSION_OVERFLOW = 4,
  BLOCKADE_E_SINGULAR_SYSTEM = 5,
  BLOCKADE_E_NOT_CONVERGED = 6,
  BLOCKADE_E_NOT_POSITIVE = 7,
  BLOCKADE_E_UNDEFINED_OBSERVABLE = 8,
  BLOCKADE_E_INTEGRATION_FAILED = 9,
  BLOCKADE_E_CONFIG = 10,
  BLOCKADE_E_IO = 11,
  BLOCKADE_E_INTERNAL = 100
} blockade_status;

typedef struct blockade_sweep blockade_sweep;   /* one or more sweep specs */
typedef struct blockade_result blockade_result; /* results of a run, one per spec */

/* Model parameters in units of kappa1. */
typedef struct blockade_params {
  double g, J, Omega, Delta, kappa1, kappa2, gamma, Gamma1, Gamma2;
} blockade_params;

/* Steady-state observables of the full model. g2 entries are NaN when the
 * mean photon number of that mode is below 1e-14. */
typedef struct blockade_observables {
  double n1, n2, g2_1, g2_2, fidelity_K, residual;
} blockade_observables;

BLOCKADE_API const char* blockade_version(void);
BLOCKADE_API const char* blockade_last_error(void);
BLOCKADE_API const char* blockade_status_name(int status);

/* Sweep specs. */
BLOCKADE_API int blockade_preset_count(size_t* count);
BLOCKADE_API int blockade_preset_name(size_t index, const char** name);
BLOCKADE_API int blockade_sweep_from_preset(const char* name, blockade_sweep** out);
BLOCKADE_API int blockade_sweep_from_config(const char* path, blockade_sweep** out);
BLOCKADE_API int blockade_sweep_from_json(const char* text, blockade_sweep** out);
BLOCKADE_API void blockade_sweep_free(blockade_sweep* sweep);
BLOCKADE_API int blockade_sweep_count(const blockade_sweep* sweep, size_t* count);
BLOCKADE_API int blockade_sweep_label(const blockade_sweep* sweep, size_t index, const char** label);
/* Overrides applied to every spec; pass a negative value to keep a field. */
BLOCKADE_API int blockade_sweep_set_truncation(blockade_sweep* sweep, int n_max_1, int n_max_2);
BLOCKADE_API int blockade_sweep_set_tolerance(blockade_sweep* sweep, double tol);

/* Runs every spec. workers <= 0 uses all hardware threads. Point failures do
 * not fail the run; see blockade_result_failed_rows. */
BLOCKADE_API int blockade_run(const blockade_sweep* sweep, int workers, blockade_result** out);
BLOCKADE_API void blockade_result_free(blockade_result* result);
BLOCKADE_API int blockade_result_count(const blockade_result* result, size_t* count);
BLOCKADE_API int blockade_result_label(const blockade_result* result, size_t index, const char** label);
BLOCKADE_API int blockade_result_rows(const blockade_result* result, size_t index, size_t* rows);
BLOCKADE_API int blockade_result_failed_rows(const blockade_result* result, size_t index, size_t* failed);
BLOCKADE_API int blockade_result_axis(const blockade_result* result, size_t index, size_t row, double* value);
BLOCKADE_API int blockade_result_value(const blockade_result* result, size_t index, size_t row,
                                       const char* observable, double* value);
BLOCKADE_API int blockade_result_wall_time(const blockade_result* result, size_t index, size_t row, double* seconds);
/* Empty string when the row succeeded. */
BLOCKADE_API int blockade_result_row_error(const blockade_result* result, size_t index, size_t row,
                                           const char** message);
/* format: "csv" or "json". */
BLOCKADE_API int blockade_result_export(const blockade_result* result, size_t index, const char* format,
                                        const char* path);

/* Scalar helpers. */
BLOCKADE_API void blockade_params_default(blockade_params* params);
BLOCKADE_API int blockade_analytic_g2(const blockade_params* params, int mode, double* out);
BLOCKADE_API int blockade_optimal_hopping(double kappa2, double* out);
BLOCKADE_API int blockade_optimal_infidelity(double kappa2, double* out);
BLOCKADE_API int blockade_fme_steady_state(const blockade_params* params, int n_max_1, int n_max_2, double tol,
                                           blockade_observables* out);

#ifdef __cplusplus
}
#endif

#endif
