#ifndef MMGW_H
#define MMGW_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

// Outcome of every call.
typedef enum MmgwStatus {
  MMGW_STATUS_OK = 0,
  MMGW_STATUS_NULL_POINTER = 1,
  MMGW_STATUS_INVALID_INPUT = 2,
  MMGW_STATUS_DOMAIN = 3,
  MMGW_STATUS_SINGULAR = 4,
  MMGW_STATUS_NUMERICAL = 5,
  MMGW_STATUS_PANIC = 6,
} MmgwStatus;

typedef enum MmgwMethod {
  MMGW_METHOD_NAIVE = 0,
  MMGW_METHOD_SHAPE_MEAN = 1,
  MMGW_METHOD_MMGW_LIN = 2,
  MMGW_METHOD_MMGW_MC = 3,
  MMGW_METHOD_HEURISTIC = 4,
} MmgwMethod;

// A fusion result.
typedef struct MmgwFusion MmgwFusion;

// The outcome of an experiment.
typedef struct MmgwReport MmgwReport;

// An experiment definition.
typedef struct MmgwScenario MmgwScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or an empty string
// after a successful call. Valid until the next call on the same thread.
const char *mmgw_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *mmgw_version(void);

// Square-root transform of an ellipse state: `m_x, m_y, s11, s12, s22`.
//
// # Safety
// `state_in` must point to 5 readable doubles and `out` to 5 writable doubles.
enum MmgwStatus mmgw_transform(const double *state_in, double *out);

// Canonical ellipse state (`alpha` in `[0, π)`, `l ≥ w`) of a transformed state.
//
// # Safety
// `transformed` must point to 5 readable doubles and `out` to 5 writable doubles.
enum MmgwStatus mmgw_inverse_transform(const double *transformed, double *out);

// Jacobian of the transform, row-major.
//
// # Safety
// `state_in` must point to 5 readable doubles and `out` to 25 writable doubles.
enum MmgwStatus mmgw_jacobian(const double *state_in, double *out);

// Exact squared Gaussian Wasserstein distance.
//
// # Safety
// `a` and `b` must point to 5 readable doubles each; `out` must be writable.
enum MmgwStatus mmgw_gw_exact(const double *a, const double *b, double *out);

// Squared distance between the transforms of two ellipses.
//
// # Safety
// `a` and `b` must point to 5 readable doubles each; `out` must be writable.
enum MmgwStatus mmgw_gw_approx(const double *a, const double *b, double *out);

// Fuses two estimates. `samples` and `seed` are used by `MmgwMc` only;
// `method` must be one of the `MmgwMethod` constants.
//
// # Safety
// `mean1`/`mean2` must point to 5 readable doubles, `cov1`/`cov2` to 25, and
// `out` to a writable handle pointer. Free the result with [`mmgw_fusion_free`].
enum MmgwStatus mmgw_fuse(const double *mean1,
                          const double *cov1,
                          const double *mean2,
                          const double *cov2,
                          enum MmgwMethod method,
                          size_t samples,
                          uint64_t seed,
                          struct MmgwFusion **out);

// Fused ellipse state in canonical form.
//
// # Safety
// `fusion` must be a live handle and `out` must point to 5 writable doubles.
enum MmgwStatus mmgw_fusion_state(const struct MmgwFusion *fusion, double *out);

// Fused transformed mean and covariance. Fails with `InvalidInput` for
// methods that do not work in the transformed space.
//
// # Safety
// `fusion` must be a live handle; `mean` must point to 5 and `cov` to 25 writable doubles.
enum MmgwStatus mmgw_fusion_transformed(const struct MmgwFusion *fusion, double *mean, double *cov);

// Variant index chosen by the heuristic, or -1 for other methods.
//
// # Safety
// `fusion` must be a live handle and `out` writable.
enum MmgwStatus mmgw_fusion_k_opt(const struct MmgwFusion *fusion, int32_t *out);

// # Safety
// `fusion` must be null or a handle from [`mmgw_fuse`] not yet freed.
void mmgw_fusion_free(struct MmgwFusion *fusion);

// The built-in two-sensor scenario. Never fails.
struct MmgwScenario *mmgw_scenario_paper(void);

// Parses a scenario from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable handle pointer.
enum MmgwStatus mmgw_scenario_from_json(const char *json, struct MmgwScenario **out);

// # Safety
// `scenario` must be a live handle.
enum MmgwStatus mmgw_scenario_set_seed(struct MmgwScenario *scenario, uint64_t seed);

// # Safety
// `scenario` must be a live handle.
enum MmgwStatus mmgw_scenario_set_runs(struct MmgwScenario *scenario, size_t runs);

// # Safety
// `scenario` must be a live handle.
enum MmgwStatus mmgw_scenario_set_samples(struct MmgwScenario *scenario, size_t samples);

// # Safety
// `scenario` must be null or a live handle.
void mmgw_scenario_free(struct MmgwScenario *scenario);

// Runs the experiment. Configuration errors fail with `InvalidInput`.
//
// # Safety
// `scenario` must be a live handle and `out` a writable handle pointer.
// Free the result with [`mmgw_report_free`].
enum MmgwStatus mmgw_run_experiment(const struct MmgwScenario *scenario, struct MmgwReport **out);

// Aggregate error of one method. `Numerical` if the method failed on every
// run, `InvalidInput` if it was not part of the experiment.
//
// # Safety
// `report` must be a live handle and `out` writable.
enum MmgwStatus mmgw_report_rmgw(const struct MmgwReport *report,
                                 enum MmgwMethod method,
                                 double *out);

// Number of runs on which a method failed.
//
// # Safety
// `report` must be a live handle and `out` writable.
enum MmgwStatus mmgw_report_failed_runs(const struct MmgwReport *report,
                                        enum MmgwMethod method,
                                        size_t *out);

// The full report as JSON. Free the string with [`mmgw_string_free`].
//
// # Safety
// `report` must be a live handle and `out` a writable string pointer.
enum MmgwStatus mmgw_report_to_json(const struct MmgwReport *report, char **out);

// # Safety
// `report` must be null or a live handle.
void mmgw_report_free(struct MmgwReport *report);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void mmgw_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MMGW_H */
