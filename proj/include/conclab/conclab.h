/* concurrence-lab C API: generalized multipartite concurrences, monotonicity
 * gap evaluation and search, and convex-roof estimation behind opaque handles.
 *
 * Conventions:
 *   - Every fallible call returns a conclab_status; CONCLAB_OK is 0.
 *   - On failure, conclab_last_error() describes the problem (thread-local,
 *     valid until the next API call on the same thread).
 *   - Strings returned through char** are heap-allocated; release them with
 *     conclab_string_free(). Handles are released with their *_free call.
 *   - Party indices are 1-based at this boundary; 0 means "automatic" where a
 *     flag/party parameter is optional.
 */
#ifndef CONCLAB_H
#define CONCLAB_H

#include <stdint.h>

#if defined(_WIN32)
#  if defined(CONCLAB_BUILDING_SHARED)
#    define CONCLAB_API __declspec(dllexport)
#  else
#    define CONCLAB_API __declspec(dllimport)
#  endif
#else
#  if defined(CONCLAB_BUILDING_SHARED)
#    define CONCLAB_API __attribute__((visibility("default")))
#  else
#    define CONCLAB_API
#  endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum conclab_status {
  CONCLAB_OK = 0,
  CONCLAB_ERR_INVALID_ARGUMENT = 1,
  CONCLAB_ERR_DIMENSION_MISMATCH = 2,
  CONCLAB_ERR_PARSE = 3,
  CONCLAB_ERR_INVALID_SPEC = 4,
  CONCLAB_ERR_NOT_POSITIVE = 5,
  CONCLAB_ERR_NOT_PSD = 6,
  CONCLAB_ERR_NOT_ISOMETRY = 7,
  CONCLAB_ERR_INAPPLICABLE = 8,
  CONCLAB_ERR_NEGATIVE_RADICAND = 9,
  CONCLAB_ERR_ZERO_SPEC = 10,
  CONCLAB_ERR_SPEC_NOT_SUFFICIENT = 11,
  CONCLAB_ERR_IO = 12,
  CONCLAB_ERR_INTERNAL = 13
} conclab_status;

typedef struct conclab_state conclab_state;     /* pure state */
typedef struct conclab_spec conclab_spec;       /* concurrence functional */
typedef struct conclab_mixed conclab_mixed;     /* density matrix */
typedef struct conclab_witness conclab_witness; /* monotonicity violation */

CONCLAB_API const char* conclab_version(void);
CONCLAB_API const char* conclab_last_error(void);
CONCLAB_API void conclab_string_free(char* text);

/* --- Pure states ---------------------------------------------------------- */

CONCLAB_API conclab_status conclab_state_from_json(const char* json,
                                                   conclab_state** out);
CONCLAB_API conclab_status conclab_state_to_json(const conclab_state* state,
                                                 char** out_json);
CONCLAB_API conclab_status conclab_state_bell_phi_plus(conclab_state** out);
CONCLAB_API conclab_status conclab_state_bell_phi_minus(conclab_state** out);
CONCLAB_API conclab_status conclab_state_ghz(int n_parties, conclab_state** out);
CONCLAB_API conclab_status conclab_state_w(int n_parties, conclab_state** out);
CONCLAB_API conclab_status conclab_state_random(const int* dims, int n_parties,
                                                uint64_t seed, conclab_state** out);
CONCLAB_API conclab_status conclab_state_tensor(const conclab_state* left,
                                                const conclab_state* right,
                                                conclab_state** out);
CONCLAB_API conclab_status conclab_state_norm(const conclab_state* state,
                                              double* out_norm);
CONCLAB_API void conclab_state_free(conclab_state* state);

/* --- Specs ----------------------------------------------------------------- */

/* Structural identities are enforced; parse/constraint failures are reported
 * through the status. Accepts {"N":..,"alpha":{..}} and/or {"N":..,"p":{..}}. */
CONCLAB_API conclab_status conclab_spec_from_json(const char* json,
                                                  conclab_spec** out);
/* as_p_form = 0: full alpha table; nonzero: nonzero sign-pattern weights. */
CONCLAB_API conclab_status conclab_spec_to_json(const conclab_spec* spec,
                                                int as_p_form, char** out_json);
CONCLAB_API conclab_status conclab_spec_symmetric(int n_parties, conclab_spec** out);
CONCLAB_API conclab_status conclab_spec_kappa(double kappa1, conclab_spec** out);
CONCLAB_API conclab_status conclab_spec_normalize(const conclab_spec* spec,
                                                  conclab_spec** out);
CONCLAB_API conclab_status conclab_spec_parties(const conclab_spec* spec, int* out_n);
CONCLAB_API void conclab_spec_free(conclab_spec* spec);

/* Validation accepts structurally broken tables on purpose, so it takes the
 * JSON text directly (handles always hold checked specs). The report JSON
 * carries {complement_symmetry, sum_zero, p_nonnegative, normalized,
 * admissible, issues[]}; out_admissible (nullable) receives 0/1. */
CONCLAB_API conclab_status conclab_validate_spec_json(const char* spec_json,
                                                      char** out_report_json,
                                                      int* out_admissible);

/* --- Pure-state evaluation -------------------------------------------------- */

CONCLAB_API conclab_status conclab_concurrence_pure(const conclab_spec* spec,
                                                    const conclab_state* state,
                                                    double* out_value);
/* out_holds = 1 iff every nontrivial alpha_V <= 0 (sufficient for
 * monotonicity); 0 only means "not decided by this criterion". */
CONCLAB_API conclab_status conclab_sufficient_criterion(const conclab_spec* spec,
                                                        int* out_holds);
/* Gap of the flagged-superposition inequality; negative = violation.
 * expanded = 0 evaluates C on the built superposition, nonzero uses the
 * cross-purity expansion (no superposition state is formed). */
CONCLAB_API conclab_status conclab_gap(const conclab_spec* spec,
                                       const conclab_state* psi,
                                       const conclab_state* phi, double a_re,
                                       double a_im, double b_re, double b_im,
                                       int flag_party_1based, int expanded,
                                       double* out_gap);

/* --- Violation search -------------------------------------------------------- */

typedef struct conclab_search_config {
  uint64_t seed;
  int restarts;              /* random starts per flag party */
  int max_iters;             /* objective evaluation budget; 0 = automatic */
  double tol;                /* witness acceptance: gap < -tol */
  int flag_party_1based;     /* 0 = automatic flag-party choice */
  int structured_candidates; /* nonzero: seed analytic candidate families */
  int threads;               /* 0 = CONCURRENCE_LAB_THREADS env, then hardware */
} conclab_search_config;

CONCLAB_API void conclab_search_config_init(conclab_search_config* config);

/* Analytic witness when some single-element alpha is positive (N >= 3);
 * CONCLAB_ERR_INAPPLICABLE when the construction does not apply. */
CONCLAB_API conclab_status conclab_single_element_counterexample(
    const conclab_spec* spec, int party_1based, conclab_witness** out);

/* Numerical minimization of the gap; *out is NULL when no violation was found
 * (evidence only, not a proof of monotonicity). */
CONCLAB_API conclab_status conclab_search_violation(const conclab_spec* spec,
                                                    const int* dims, int n_parties,
                                                    const conclab_search_config* config,
                                                    conclab_witness** out);
CONCLAB_API conclab_status conclab_search_min_gap(const conclab_spec* spec,
                                                  const int* dims, int n_parties,
                                                  const conclab_search_config* config,
                                                  double* out_min_gap);

CONCLAB_API conclab_status conclab_witness_gap(const conclab_witness* witness,
                                               double* out_gap);
CONCLAB_API conclab_status conclab_witness_flag_party(const conclab_witness* witness,
                                                      int* out_party_1based);
CONCLAB_API conclab_status conclab_witness_to_json(const conclab_witness* witness,
                                                   char** out_json);
CONCLAB_API void conclab_witness_free(conclab_witness* witness);

/* --- Parameter scans ---------------------------------------------------------- */

/* Four-qubit kappa family scan over a uniform grid (grid_points >= 2) on
 * [kappa1_lo, kappa1_hi] in [-7, 0], plus bisection refinement of the
 * violated/monotone boundary. CSV columns: kappa1,kappa2,min_gap,violated.
 * out_boundary may be NULL; it receives NaN when no crossing exists. */
CONCLAB_API conclab_status conclab_kappa_scan_csv(double kappa1_lo, double kappa1_hi,
                                                  int grid_points,
                                                  const conclab_search_config* config,
                                                  char** out_csv, double* out_boundary);

/* Tripartite weight-simplex classification at the given resolution.
 * CSV columns: p1,p2,p3,admissible,monotone. */
CONCLAB_API conclab_status conclab_region_csv(int resolution, char** out_csv);

/* --- Mixed states and the convex roof ------------------------------------------ */

CONCLAB_API conclab_status conclab_mixed_from_json(const char* json,
                                                   conclab_mixed** out);
CONCLAB_API conclab_status conclab_mixed_to_json(const conclab_mixed* rho,
                                                 char** out_json);
CONCLAB_API conclab_status conclab_mixed_from_state(const conclab_state* state,
                                                    conclab_mixed** out);
CONCLAB_API void conclab_mixed_free(conclab_mixed* rho);

typedef struct conclab_roof_config {
  uint64_t seed;
  int restarts;      /* independent optimizer starts (eigen-ensemble always runs) */
  int iters;         /* perturbation steps per start */
  int ensemble_size; /* decomposition size; 0 = twice the rank */
  int threads;
} conclab_roof_config;

CONCLAB_API void conclab_roof_config_init(conclab_roof_config* config);

/* Upper bound on the convex-roof concurrence of rho. */
CONCLAB_API conclab_status conclab_roof_upper(const conclab_spec* spec,
                                              const conclab_mixed* rho,
                                              const conclab_roof_config* config,
                                              double* out_value);

/* Flagged-mixture equality check: lhs = roof(p1 rho1 x |0><0| + p2 rho2 x
 * |1><1|), rhs = p1 roof(rho1) + p2 roof(rho2); residual = lhs - rhs. The
 * concatenated decomposition is injected, so lhs <= rhs + 1e-9 always.
 * Requires a spec passing the sufficient criterion. */
CONCLAB_API conclab_status conclab_flags_check(const conclab_spec* spec,
                                               const conclab_mixed* rho1,
                                               const conclab_mixed* rho2, double p1,
                                               double p2, int flag_party_1based,
                                               const conclab_roof_config* config,
                                               double* out_lhs, double* out_rhs,
                                               double* out_residual);

#ifdef __cplusplus
}
#endif

#endif /* CONCLAB_H */
