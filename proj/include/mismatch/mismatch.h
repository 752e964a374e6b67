#ifndef MISMATCH_MISMATCH_H
#define MISMATCH_MISMATCH_H

/* C interface to the mismatched-decoding analysis library.
 *
 * All functions return mm_status; results come back through out-parameters.
 * Handles are opaque and must be released with the matching _free call.
 * mm_last_error() returns a thread-local message for the most recent failure.
 * Rates, densities and bounds are in nats unless a name says otherwise.
 * A budget argument of 0 selects the built-in default.
 */

#include <stddef.h>
#include <stdint.h>

#include "status.h"

#ifdef __cplusplus
extern "C" {
#endif

typedef struct mm_pair mm_pair;           /* channel + decoding metric (+ block length k) */
typedef struct mm_dist mm_dist;           /* input distribution */
typedef struct mm_spectrum mm_spectrum;   /* finite PMF of a normalized density sum */
typedef struct mm_codebook mm_codebook;   /* fixed codebook */
typedef struct mm_rate_result mm_rate_result;
typedef struct mm_sandwich mm_sandwich;   /* achievability/converse comparison table */

const char* mm_version(void);
const char* mm_last_error(void);

/* ---- problem pairs ---- */

/* w and q are row-major input_size x output_size. The metric is stored
 * rescaled so its largest entry is 1; mm_pair_metric_scale recovers the
 * original scale. */
mm_status mm_pair_create(int32_t input_size, int32_t output_size,
                         const double* w, const double* q,
                         const char* name, mm_pair** out);
mm_status mm_pair_load_json(const char* path, mm_pair** out);
mm_status mm_pair_product_extend(const mm_pair* base, int32_t k,
                                 uint64_t atom_budget, mm_pair** out);
mm_status mm_pair_tilt(const mm_pair* base, double alpha, mm_pair** out);
mm_status mm_pair_erasures_only(const mm_pair* base, mm_pair** out);
void mm_pair_free(mm_pair* p);

mm_status mm_pair_input_size(const mm_pair* p, int32_t* out);
mm_status mm_pair_output_size(const mm_pair* p, int32_t* out);
mm_status mm_pair_block_length(const mm_pair* p, int32_t* out);
mm_status mm_pair_metric_floor(const mm_pair* p, double* out);  /* q_star */
mm_status mm_pair_metric_scale(const mm_pair* p, double* out);
mm_status mm_pair_channel_entry(const mm_pair* p, int32_t x, int32_t y, double* out);
mm_status mm_pair_metric_entry(const mm_pair* p, int32_t x, int32_t y, double* out);

/* ---- input distributions ---- */

mm_status mm_dist_create(const double* p, int32_t size, mm_dist** out);
mm_status mm_dist_uniform(int32_t size, mm_dist** out);
mm_status mm_dist_product(const mm_dist* a, const mm_dist* b, mm_dist** out);
void mm_dist_free(mm_dist* d);
mm_status mm_dist_size(const mm_dist* d, int32_t* out);
mm_status mm_dist_prob(const mm_dist* d, int32_t i, double* out);

/* ---- information densities and spectra ---- */

mm_status mm_density_value(const mm_pair* p, const mm_dist* d,
                           int32_t x, int32_t y, double* out);
mm_status mm_sequence_density(const mm_pair* p, const mm_dist* d,
                              const int32_t* xs, const int32_t* ys, int32_t len,
                              double* out);

mm_status mm_spectrum_exact(const mm_pair* p, const mm_dist* d, int32_t n,
                            uint64_t atom_budget, mm_spectrum** out);
mm_status mm_spectrum_codebook(const mm_codebook* cb, const mm_pair* p,
                               uint64_t enumeration_budget, mm_spectrum** out);
void mm_spectrum_free(mm_spectrum* s);

mm_status mm_spectrum_size(const mm_spectrum* s, int64_t* out);
mm_status mm_spectrum_atom(const mm_spectrum* s, int64_t i,
                           double* value, double* prob);
mm_status mm_spectrum_block_length(const mm_spectrum* s, int32_t* out);
mm_status mm_spectrum_tail_leq(const mm_spectrum* s, double alpha, double* out);
mm_status mm_spectrum_quantile(const mm_spectrum* s, double eps, double* out);
mm_status mm_spectrum_mean(const mm_spectrum* s, double* out);
mm_status mm_spectrum_second_moment(const mm_spectrum* s, double* out);

/* P[(1/n) log L >= eps] <= exp(-n eps) for the change-of-measure ratio L. */
mm_status mm_overshoot_check(const mm_pair* p, const mm_dist* d, int32_t n,
                             double eps, uint64_t atom_budget,
                             double* lhs, double* rhs, int32_t* holds);
/* E[Z_n^2] against the metric-floor bound 2 ln^2(qs) + 2 ln^2(qs / |X|),
 * qs being the metric floor. */
mm_status mm_ui_bound_check(const mm_pair* p, const mm_dist* d, int32_t n,
                            uint64_t atom_budget,
                            double* moment, double* bound, int32_t* holds);

/* ---- rates ---- */

typedef enum mm_rate_mode {
  MM_RATE_GMI = 0,  /* optimize s only */
  MM_RATE_LM = 1,   /* optimize s and per-letter offsets */
  MM_RATE_S1 = 2    /* fixed s = 1, no offsets */
} mm_rate_mode;

/* a may be NULL for no offsets; otherwise it has input_size entries. */
mm_status mm_rate_objective(const mm_pair* p, const mm_dist* d,
                            double s, const double* a, double* out);
mm_status mm_optimize_params(const mm_pair* p, const mm_dist* d,
                             mm_rate_mode mode, mm_rate_result** out);
/* warm may be NULL. restarts counts extra random starting points. */
mm_status mm_optimize_input(const mm_pair* p, mm_rate_mode mode,
                            int32_t restarts, uint64_t seed,
                            const mm_dist* warm, mm_rate_result** out);
mm_status mm_matched_capacity(const mm_pair* p, mm_rate_result** out);
void mm_rate_result_free(mm_rate_result* r);

mm_status mm_rate_value(const mm_rate_result* r, double* out);
mm_status mm_rate_block_length(const mm_rate_result* r, int32_t* out);
mm_status mm_rate_param_s(const mm_rate_result* r, double* out);
mm_status mm_rate_offset_count(const mm_rate_result* r, int32_t* out);
mm_status mm_rate_offset(const mm_rate_result* r, int32_t i, double* out);
mm_status mm_rate_input(const mm_rate_result* r, mm_dist** out);
/* 0 = exact, 1 = converged, 2 = budget_hit */
mm_status mm_rate_status_kind(const mm_rate_result* r, int32_t* out);

mm_status mm_gap_bound(const mm_pair* p, const mm_dist* d,
                       double* eta_upper, double* kl);
mm_status mm_bsc_closed_form(double p, double p_prime,
                             double* capacity, double* s_star);

/* ---- codebooks and decoding ---- */

typedef enum mm_codebook_kind {
  MM_CODEBOOK_IID = 0,
  MM_CODEBOOK_CONSTANT_COMPOSITION = 1
} mm_codebook_kind;

typedef enum mm_decoder_rule {
  MM_DECODER_STOCHASTIC = 0,
  MM_DECODER_MAX_METRIC = 1
} mm_decoder_rule;

mm_status mm_codebook_gen(mm_codebook_kind kind, const mm_dist* d,
                          int32_t n, uint64_t size, uint64_t seed,
                          mm_codebook** out);
mm_status mm_codebook_load_json(const char* path, mm_codebook** out);
mm_status mm_codebook_save_json(const mm_codebook* cb, const char* path);
void mm_codebook_free(mm_codebook* cb);
mm_status mm_codebook_block_length(const mm_codebook* cb, int32_t* out);
mm_status mm_codebook_size(const mm_codebook* cb, uint64_t* out);
mm_status mm_codebook_symbol(const mm_codebook* cb, uint64_t m, int32_t i,
                             int32_t* out);

mm_status mm_exact_error(const mm_codebook* cb, const mm_pair* p,
                         mm_decoder_rule rule, uint64_t enumeration_budget,
                         double* pe);
mm_status mm_mc_error(const mm_codebook* cb, const mm_pair* p,
                      mm_decoder_rule rule, uint64_t trials, uint64_t seed,
                      double* pe, double* std_err);
mm_status mm_pairwise_phi(const mm_pair* p, const mm_dist* d,
                          const int32_t* xs, const int32_t* ys, int32_t len,
                          double* out);
mm_status mm_pc_identity_check(const mm_codebook* cb, const mm_pair* p,
                               uint64_t enumeration_budget,
                               double* lhs, double* rhs, double* abs_diff);

/* ---- finite-blocklength bounds ---- */

/* Reported raw even when vacuous (value > 1, or < 0 for the converse). */
mm_status mm_feinstein_bound(const mm_pair* p, const mm_dist* d, int32_t n,
                             double M, double gamma, double s,
                             uint64_t atom_budget, double* value,
                             int32_t* vacuous);
mm_status mm_rcu_s_bound(const mm_pair* p, const mm_dist* d, int32_t n,
                         double M, double s, uint64_t atom_budget,
                         double* value, int32_t* vacuous);
mm_status mm_verdu_han_bound(const mm_codebook* cb, const mm_pair* p,
                             double gamma, uint64_t enumeration_budget,
                             double* value, int32_t* vacuous);

/* Geometric grid on [1/(2n), 1]; out must hold `points` doubles. */
mm_status mm_gamma_grid(int32_t n, int32_t points, double* out);

mm_status mm_sandwich_run(const mm_pair* p, const mm_dist* d,
                          int32_t n, uint64_t M,
                          const uint64_t* seeds, int32_t n_seeds,
                          const double* gammas, int32_t n_gammas,
                          const double* ss, int32_t n_ss,
                          uint64_t mc_trials, uint64_t enumeration_budget,
                          mm_sandwich** out);
void mm_sandwich_free(mm_sandwich* sw);
mm_status mm_sandwich_rows(const mm_sandwich* sw, int64_t* out);
/* Column order: n, M, gamma, s, seed, pe_exact, pe_mc, stderr, feinstein,
 * rcu, verdu_han, verdict_a, verdict_b (13 doubles; flags are 0/1). */
mm_status mm_sandwich_row(const mm_sandwich* sw, int64_t i, double* cols13);

#ifdef __cplusplus
}
#endif

#endif
