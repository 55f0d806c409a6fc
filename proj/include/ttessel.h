/* C API of the ttessel shared library.
 *
 * All functions return 0 on success and a non-zero error code otherwise;
 * ttl_last_error() yields a thread-local message for the last failing call.
 * Objects are opaque handles released with their matching _free function.
 * Strings returned through char** are owned by the caller and released with
 * ttl_string_free(). Distinct handles may be used concurrently from
 * different threads; a single handle must not be shared without external
 * synchronization.
 */
#ifndef TTESSEL_H
#define TTESSEL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define TTL_OK 0
#define TTL_ERROR 1        /* validation, geometry or numeric failure */
#define TTL_BAD_ARGUMENT 2 /* null handle or malformed argument */

const char* ttl_version(void);
const char* ttl_last_error(void);
void ttl_string_free(char* s);

/* ---- tessellations ---------------------------------------------------- */

typedef struct ttl_tessellation ttl_tessellation;

/* Empty tessellation of the convex polygon with vertices
 * (xy[0],xy[1]),...,(xy[2n-2],xy[2n-1]). */
int ttl_tessellation_empty(const double* xy, int n_vertices, ttl_tessellation** out);
int ttl_tessellation_from_json(const char* text, ttl_tessellation** out);
int ttl_tessellation_to_json(const ttl_tessellation* t, char** out);
/* stats = {nseint, nnbseint, nbseint, u, a2, angle_sum} */
int ttl_tessellation_stats(const ttl_tessellation* t, double stats[6]);
int ttl_tessellation_cell_count(const ttl_tessellation* t, int* out);
void ttl_tessellation_free(ttl_tessellation* t);

/* ---- Gibbs models ------------------------------------------------------ */

typedef struct ttl_model ttl_model;

/* config: {"model": "crtt"|"angle"|"area", "theta": [...]} */
int ttl_model_from_json(const char* config, ttl_model** out);
int ttl_model_dim(const ttl_model* m, int* out);
int ttl_model_energy(const ttl_model* m, const ttl_tessellation* t, double* out);
int ttl_model_statistics(const ttl_model* m, const ttl_tessellation* t, double* out /* dim */);
void ttl_model_free(ttl_model* m);

/* ---- SMF chain ---------------------------------------------------------- */

typedef struct ttl_chain ttl_chain;

/* The chain copies the model and the initial tessellation. The proposal mix
 * (p_split, p_merge, p_flip) must be positive; it is normalized to sum 1. */
int ttl_chain_new(const ttl_model* m, const ttl_tessellation* initial, double p_split,
                  double p_merge, double p_flip, uint64_t seed, ttl_chain** out);
int ttl_chain_run(ttl_chain* c, int64_t iterations);
int ttl_chain_iteration(const ttl_chain* c, int64_t* out);
int ttl_chain_state_json(const ttl_chain* c, char** out);
int ttl_chain_state_stats(const ttl_chain* c, double stats[6]);
int ttl_chain_energy(const ttl_chain* c, double* out);
/* Energy trace rows: {iteration, energy, nseint, nnbseint, nbseint, move}
 * with move 0=none 1=split 2=merge 3=flip (accepted move of the step). */
int ttl_chain_trace_size(const ttl_chain* c, int64_t* out);
int ttl_chain_trace_row(const ttl_chain* c, int64_t index, double row[6]);
int ttl_chain_set_trace_enabled(ttl_chain* c, int enabled);
int ttl_chain_clear_trace(ttl_chain* c);
/* Smallest period renewing at least `renewal_fraction` of the segments alive
 * at a window start, averaged over >= 10 disjoint pilot windows; fails once
 * the candidate period exceeds max_period. */
int ttl_chain_sampling_period(ttl_chain* c, double renewal_fraction, int64_t max_period,
                              int64_t* out);
void ttl_chain_free(ttl_chain* c);

/* ---- pseudolikelihood inference ---------------------------------------- */

/* Closed-form CRTT estimate log(nnbseint pi / u). */
int ttl_crtt_mple(const ttl_tessellation* t, double* out);

/* config: {"epsilon": e, "delta": d, "max_iterations": n,
 *          "initial_theta": [...] | "crtt-start"}  (all fields optional)
 * result: {"theta_hat": [...], "iterations": n, "converged": b,
 *          "trace": [{"theta": [...], "lpl": v}, ...]} */
int ttl_nois(const ttl_model* m, const ttl_tessellation* t, const char* config, uint64_t seed,
             char** result_json);

/* ---- point processes ---------------------------------------------------- */

typedef struct ttl_pattern ttl_pattern;

int ttl_pattern_new(const double* window_xy, int n_window, const double* points_xy, int n_points,
                    ttl_pattern** out);
int ttl_pattern_size(const ttl_pattern* p, int* out);
int ttl_pattern_window_area(const ttl_pattern* p, double* out);
void ttl_pattern_free(ttl_pattern* p);

/* model config: {"model": "poisson"|"strauss", "theta": [...], "radius": R} */
int ttl_pp_lpl(const char* model_config, const ttl_pattern* p, const double* theta, int dim,
               int grid_resolution, double* out);
/* result: {"theta_hat": [...], "iterations": n, "converged": b} */
int ttl_pp_fit_mple(const char* model_config, const ttl_pattern* p, int grid_resolution,
                    char** result_json);
int ttl_pp_fit_logistic(const char* model_config, const ttl_pattern* p, double rho, uint64_t seed,
                        char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* TTESSEL_H */
