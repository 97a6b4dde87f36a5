/* EdgeExplain — joint inference of multiple label types on a partially
 * labeled graph, plus a label-propagation baseline, a planted-truth graph
 * generator, and an evaluation harness.
 *
 * C interface over the C++ core: opaque handles, integer status codes,
 * thread-local error messages. All functions returning eex_status set the
 * message retrievable via eex_last_error() on failure.
 */
#ifndef EDGEEXPLAIN_H
#define EDGEEXPLAIN_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct eex_dataset eex_dataset; /* graph + schema + observed labels (+ truth) */
typedef struct eex_params eex_params;   /* inference parameters */
typedef struct eex_result eex_result;   /* beliefs + superstep reports */

typedef enum eex_status {
  EEX_OK = 0,
  EEX_ERR_USAGE = 1,    /* invalid arguments or parameters */
  EEX_ERR_DATA = 2,     /* malformed or inconsistent input data */
  EEX_ERR_INTERNAL = 3
} eex_status;

typedef enum eex_mode {
  EEX_MODE_LP = 0,          /* multi-type label propagation */
  EEX_MODE_EDGEEXPLAIN = 1  /* edge-explaining joint inference */
} eex_mode;

/* Message describing the most recent failure on this thread. */
const char* eex_last_error(void);
const char* eex_version(void);

/* ---- parameters -------------------------------------------------------- */

eex_params* eex_params_new(void); /* spec defaults: alpha 10, c 0, clip 8, ... */
void eex_params_free(eex_params* params);

eex_status eex_params_set_alpha(eex_params* params, double alpha);
eex_status eex_params_set_c(eex_params* params, double c);
eex_status eex_params_set_clip(eex_params* params, int clip_size);
eex_status eex_params_set_inner_steps(eex_params* params, int inner_steps);
eex_status eex_params_set_max_supersteps(eex_params* params, int max_supersteps);
eex_status eex_params_set_tol(eex_params* params, double tol);
/* "backtracking" | "lipschitz" */
eex_status eex_params_set_step_policy(eex_params* params, const char* policy);
/* "paper" | "conservative" */
eex_status eex_params_set_lipschitz_rule(eex_params* params, const char* rule);

/* ---- datasets ---------------------------------------------------------- */

/* Reads edges.tsv + labels.tsv (+ ages.tsv, groups.tsv,
 * edge_type_weights.tsv, truth.tsv, reasons.tsv when present). */
eex_status eex_dataset_load(const char* dir, eex_dataset** out);
eex_status eex_dataset_save(const eex_dataset* dataset, const char* dir);
void eex_dataset_free(eex_dataset* dataset);

int64_t eex_dataset_nodes(const eex_dataset* dataset);
int64_t eex_dataset_edges(const eex_dataset* dataset);
int32_t eex_dataset_types(const eex_dataset* dataset);

/* Age-based sparsification: each user keeps edges to its K age-closest
 * friends (kept if either endpoint nominates; group edges always kept). */
eex_status eex_dataset_sparsify_age(const eex_dataset* dataset, int k, eex_dataset** out);

/* Planted-truth synthetic graph from a TOML config. seed_override >= 0
 * replaces the config seed. */
eex_status eex_generate(const char* config_path, int64_t seed_override, eex_dataset** out);

/* ---- inference --------------------------------------------------------- */

eex_status eex_infer(const eex_dataset* dataset, eex_mode mode, const eex_params* params,
                     int threads, eex_result** out);
void eex_result_free(eex_result* result);

int32_t eex_result_supersteps(const eex_result* result);
eex_status eex_result_superstep_stats(const eex_result* result, int32_t index,
                                      double* max_change, double* objective, double* millis,
                                      int64_t* messages);

/* predictions.tsv: node, type, rank, label, probability (ranked per pair) */
eex_status eex_result_write_predictions(const eex_result* result, const char* path);
/* trace.tsv: superstep, max_change, objective, millis, messages */
eex_status eex_result_write_trace(const eex_result* result, const char* path);

/* Ranked labels for one (node, type); fills up to capacity entries and
 * stores the count in *count. Label pointers stay valid until the result is
 * freed. Unknown node or type is a usage error. */
eex_status eex_result_topk(const eex_result* result, const char* node, const char* type,
                           int capacity, const char** labels, double* probs, int* count);

/* ---- evaluation -------------------------------------------------------- */

/* Scores predictions against a truth file (same TSV layout as labels.tsv).
 * Pairs listed in exclude_labels_path (may be NULL) are skipped — pass the
 * training-view labels.tsv to score held-out pairs only. */
eex_status eex_evaluate_files(const char* predictions_path, const char* truth_path,
                              const char* exclude_labels_path, const int* ks, int num_ks,
                              const char* report_path);

/* P(correct in top 3) bucketed by the fraction of label-known neighbors
 * sharing the node's true label. */
eex_status eex_resolution_curve_files(const char* dataset_dir, const char* predictions_path,
                                      const char* truth_path, const char* type,
                                      const char* out_path);

/* Full generate -> (fold ->) infer -> eval sweep over "alpha" or "K".
 * config_path NULL uses generator defaults. folds <= 1 scores against the
 * generator-hidden truth. Writes sweep.tsv rows: param, value, type,
 * recall@1, recall@3, lift@1, lift@3, millis (lift vs the first value). */
eex_status eex_sweep(const char* config_path, int64_t seed_override, const char* param,
                     const double* values, int num_values, const eex_params* params,
                     eex_mode mode, int folds, int threads, const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EDGEEXPLAIN_H */
