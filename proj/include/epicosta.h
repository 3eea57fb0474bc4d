/* epicosta C API.
 *
 * Thin extern-C surface over the core library.  All functions return an
 * epc_status; outputs are written through out-parameters.  On failure the
 * out-parameters are left untouched and a thread-local message describing
 * the error is available from epc_last_error().
 *
 * Memory: objects created by this API are released with their matching
 * *_free function; strings returned through char** are released with
 * epc_free_str().  Handles are not thread-safe for concurrent mutation,
 * but distinct handles may be used from distinct threads freely.
 *
 * JSON: compound inputs (instances, channel specs, certificates) and
 * compound reports travel as UTF-8 JSON text.  The schemas are the ones
 * the CLI reads and writes; see README.md.
 */

#ifndef EPICOSTA_H_
#define EPICOSTA_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum epc_status {
  EPC_OK = 0,
  EPC_ERR_PARSE = 1,
  EPC_ERR_DIMENSION_MISMATCH = 2,
  EPC_ERR_ASYMMETRIC_INPUT = 3,
  EPC_ERR_NOT_PSD = 4,
  EPC_ERR_NOT_PD = 5,
  EPC_ERR_SINGULAR_INPUT = 6,
  EPC_ERR_SINGULAR_D = 7,
  EPC_ERR_SINGULAR_A = 8,
  EPC_ERR_NO_CONVERGENCE = 9,
  EPC_ERR_INVALID_DISTRIBUTION = 10,
  EPC_ERR_DEGENERATE_COMPONENT = 11,
  EPC_ERR_INVALID_ARGUMENT = 12,
  EPC_ERR_PRECONDITION_VIOLATED = 13,
  EPC_ERR_ENHANCEMENT_PROPERTY = 14,
  EPC_ERR_CERTIFICATE_REJECTED = 15,
  EPC_ERR_INFEASIBLE_B = 16,
  EPC_ERR_GRID_TOO_LARGE = 17,
  EPC_ERR_DIMENSION_TOO_LARGE = 18,
  EPC_ERR_INTERNAL = 19
} epc_status;

/* Library version as "major.minor.patch". Static storage; do not free. */
const char* epc_version(void);

/* Stable identifier for a status code, e.g. "NotPd". Static storage. */
const char* epc_status_name(epc_status s);

/* Message from the most recent failing call on this thread.  Empty string
 * if no call has failed.  Valid until the next failing call on the same
 * thread; do not free. */
const char* epc_last_error(void);

/* Releases a string returned through a char** out-parameter. NULL ok. */
void epc_free_str(char* s);

/* ---- symmetric matrices ---------------------------------------------- */

typedef struct epc_mat epc_mat;

/* Builds an n-by-n symmetric matrix from row-major data.  Symmetrizes
 * tiny asymmetry; rejects material asymmetry. */
epc_status epc_mat_create(int n, const double* rowmajor, epc_mat** out);

/* Parses {"n": int, "rows": [[...], ...]}. */
epc_status epc_mat_from_json(const char* text, epc_mat** out);

epc_status epc_mat_to_json(const epc_mat* m, char** out);

int epc_mat_dim(const epc_mat* m);

/* Row-major copy into caller storage of at least dim*dim doubles. */
epc_status epc_mat_copy(const epc_mat* m, double* rowmajor);

void epc_mat_free(epc_mat* m);

/* ---- matrix operations ------------------------------------------------ */

/* Symmetric PSD square root. */
epc_status epc_sym_sqrt(const epc_mat* m, epc_mat** out);

epc_status epc_logdet(const epc_mat* m, double* out);

/* *out = 1 if a <= b in the semidefinite order (within tol), else 0. */
epc_status epc_loewner_leq(const epc_mat* a, const epc_mat* b, double tol,
                           int* out);

/* Congruence V diagonalizing PD a to identity and symmetric b to
 * eigenvalues: V^T a V = I, V^T b V = diag(lambda2).  V is written
 * row-major (n*n doubles), lambda2 ascending (n doubles). */
epc_status epc_simultaneous_diag(const epc_mat* a, const epc_mat* b,
                                 double* v, double* lambda2);

/* Tests a == c*b for scalar c.  *exists in {0,1}; *c valid when found. */
epc_status epc_proportional(const epc_mat* a, const epc_mat* b, double tol,
                            int* exists, double* c);

/* Nearest (Frobenius) point of {X : 0 <= X <= S} to b. */
epc_status epc_project_box(const epc_mat* b, const epc_mat* s, epc_mat** out);

/* ---- Gaussian information quantities ---------------------------------- */

/* Differential entropy of N(mean, cov) in nats. */
epc_status epc_gaussian_entropy(const epc_mat* cov, double* out);

/* I(Z; DX + Z) for X ~ N(0,bx), Z ~ N(0,nz) independent, in nats. */
epc_status epc_mi_z_given_output(const epc_mat* d, const epc_mat* bx,
                                 const epc_mat* nz, double* out);

/* Error covariances of the MMSE estimates of X resp. Z from DX + Z. */
epc_status epc_mmse_x(const epc_mat* d, const epc_mat* bx, const epc_mat* nz,
                      epc_mat** out);
epc_status epc_mmse_z(const epc_mat* d, const epc_mat* bx, const epc_mat* nz,
                      epc_mat** out);

/* Gradient of D -> I(Z; DX+Z) as an n-by-n row-major array. */
epc_status epc_immse_gradient(const epc_mat* d, const epc_mat* bx,
                              const epc_mat* nz, double* rowmajor);

/* Monte Carlo differential entropy of a Gaussian mixture, with the
 * mixture given as JSON ({"weights": [...], "means": [[...]],
 * "covs": [matrix, ...]}).  Deterministic for fixed (samples, seed). */
epc_status epc_mixture_entropy_mc(const char* mixture_json, int64_t samples,
                                  uint64_t seed, double* value,
                                  double* stderr_out);

/* ---- inequality checks (JSON report calls) ---------------------------- */

/* Evaluates both sides of the interpolated entropy-power inequality for
 * the instance (Gaussian or mixture source).  rhs_scale multiplies the
 * right side before the verdict and exists for fault-injection tests;
 * pass 1.0.  Report: {lhs, rhs, gap, gap_stderr, degenerate_a, samples,
 * seed, violation, equality?: {c?, degenerate, residual}}. */
epc_status epc_epi_check(const char* instance_json, int64_t samples,
                         uint64_t seed, double tol, double rhs_scale,
                         char** report_json);

/* Traces the interpolation path gamma -> F on a grid and checks the
 * endpoint identity against the two sides of the inequality.  Gaussian
 * sources only.  Report: {rows: [{gamma, f, deriv}], f0, f1, lhs, rhs,
 * endpoint_residual, min_deriv, monotone}. */
epc_status epc_path_trace(const char* instance_json, int grid_points,
                          char** report_json);

/* Spot-checks the mutual-information gradient against central finite
 * differences on random instances.  Report: {trials, max_abs_err, step,
 * dim, ok}. */
epc_status epc_immse_check(int dim, int trials, double step, uint64_t seed,
                           double tol, char** report_json);

/* ---- extremal instances and certificates ------------------------------ */

/* Recovers multiplier matrices for a claimed optimum bstar of the
 * weighted entropy objective and returns the certificate as JSON. */
epc_status epc_recover_certificate(const char* instance_json,
                                   const char* bstar_json, char** cert_json);

/* Checks a certificate's stationarity/slackness residuals and, with
 * random_trials > 0, samples that many feasible covariances verifying the
 * certified point attains the maximum.  Report: {residuals: {stationarity,
 * slack_b, slack_s}, valid, trials, max_excess} where max_excess is the
 * largest lhs - rhs over the sampled covariances (<= 0 up to tolerance
 * when the certificate is genuine). */
epc_status epc_extremal_check(const char* instance_json,
                              const char* cert_json, int random_trials,
                              uint64_t seed, char** report_json);

/* Enhanced-noise construction from a two-noise certificate (first
 * constraint noise is enhanced; requires at least one constraint noise).
 * Fails with EPC_ERR_ENHANCEMENT_PROPERTY if a required ordering or
 * identity does not hold.  Report: {n1_tilde, n0_tilde, kkt_residual,
 * dirty_paper_gap, receiver_gap, receiver_gap_literal?}. */
epc_status epc_enhance(const char* instance_json, const char* cert_json,
                       char** report_json);

/* ---- secrecy capacity regions ----------------------------------------- */

/* Traces the weighted-rate boundary of a Gaussian secrecy region at the
 * given mu values.  spec_json: {"s": mat, "n1": mat, "n2": mat, "n3": mat}.
 * scenario 1 or 2 (scenario 2 requires mu >= 1).  threads <= 0 means one
 * worker per hardware thread.  Report: {scenario, rows: [{mu, r1, r2,
 * objective, converged, cert_ok, kkt_stat, kkt_slack_b, kkt_slack_s,
 * support_ok, b: [...]}], all_ok}. */
epc_status epc_region_trace(const char* spec_json, int scenario,
                            const double* mu, int mu_count, uint64_t seed,
                            int threads, double kkt_tol, char** report_json);

/* Exhaustive low-dimensional reference region (n <= 2).  Report:
 * {points: [[r1, r2], ...]} as the Pareto frontier of the rate grid. */
epc_status epc_region_brute(const char* spec_json, int scenario,
                            int resolution, char** report_json);

/* Rate pair of one feasible input covariance.  out = {r1, r2}. */
epc_status epc_rates_for_b(const char* spec_json, int scenario,
                           const epc_mat* b, double out[2]);

/* Maximum of r1 alone (mu = 0 corner). */
epc_status epc_r1_max(const char* spec_json, int scenario, double* out);

/* ---- discrete memoryless regions --------------------------------------- */

/* Rate region of a degraded discrete memoryless triple via auxiliary
 * enumeration.  spec_json: {"w1": [[...]], "d12": [[...]], "d23":
 * [[...]]} (row-stochastic; w2 = w1 d12, w3 = w2 d23).  u_card <= 0
 * selects the default cardinality bound.  Report: {points: [{r1, r2,
 * pu: [...], pxu: [[...]]}]}. */
epc_status epc_dm_region(const char* spec_json, int scenario, int resolution,
                         int u_card, char** report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EPICOSTA_H_ */
