#ifndef PTDEPHASE_H
#define PTDEPHASE_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PtdZetaForm {
  PTD_ZETA_FORM_QUADRATIC = 0,
  PTD_ZETA_FORM_QUARTIC = 1,
  PTD_ZETA_FORM_SEXTIC = 2,
} PtdZetaForm;

typedef enum PtdStatus {
  PTD_STATUS_OK = 0,
  PTD_STATUS_NULL_POINTER = 1,
  PTD_STATUS_INVALID_ARGUMENT = 2,
  PTD_STATUS_PT_BROKEN = 3,
  PTD_STATUS_DIMENSION = 4,
  PTD_STATUS_NON_CONVERGENCE = 5,
  PTD_STATUS_NON_FINITE = 6,
  PTD_STATUS_SINGULAR_SIMILARITY = 7,
  PTD_STATUS_PANIC = 8,
} PtdStatus;

/*
 Opaque bath configuration.
 */
typedef struct PtdEnv PtdEnv;

/*
 Opaque qubit configuration.
 */
typedef struct PtdSystem PtdSystem;

typedef struct PtdQuadConfig {
  double rel_tol;
  double abs_tol;
  size_t max_subdivisions;
  double truncation_factor;
} PtdQuadConfig;

/*
 Bath temperature; `zero` selects T = 0 and ignores `value`.
 */
typedef struct PtdTemperature {
  double value;
  bool zero;
} PtdTemperature;

typedef struct PtdEnvParams {
  double tau;
  enum PtdZetaForm zeta_form;
  double delta;
  double amp;
  double cutoff;
  struct PtdTemperature temperature;
  double theta;
} PtdEnvParams;

typedef struct PtdQuadResult {
  double value;
  double abs_error_estimate;
  size_t evaluations;
} PtdQuadResult;

typedef struct PtdComplex {
  double re;
  double im;
} PtdComplex;

typedef struct PtdResidualReport {
  size_t dim;
  double tau;
  double zeta;
  double delta;
  size_t block_size;
  double residual;
} PtdResidualReport;

/*
 Qubit density matrix `[[rho00, rho01], [conj(rho01), rho11]]`.
 */
typedef struct PtdQubitState {
  double rho00;
  struct PtdComplex rho01;
  double rho11;
} PtdQubitState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread; empty after a success.
 The pointer stays valid until the next call on the same thread.
 */
const char *ptd_last_error_message(void);

struct PtdQuadConfig ptd_quad_config_default(void);

/*
 𝒜 = 1, Ω = 0.1, T = 300, δ = 1, θ = π/2, τ = 0, quadratic ζ.
 */
struct PtdEnvParams ptd_env_params_default(void);

/*
 # Safety
 `out` must be writable.
 */
enum PtdStatus ptd_system_new(double alpha_s, struct PtdSystem **out);

/*
 # Safety
 `out` must be writable.
 */
enum PtdStatus ptd_system_from_e1(double e1, struct PtdSystem **out);

/*
 `E₁`, or NaN for a null handle.

 # Safety
 `sys` must be null or a live handle.
 */
double ptd_system_e1(const struct PtdSystem *sys);

/*
 # Safety
 `sys` must be null or a handle from `ptd_system_new`, not freed before.
 */
void ptd_system_free(struct PtdSystem *sys);

/*
 # Safety
 `params` must be readable and `out` writable.
 */
enum PtdStatus ptd_env_new(const struct PtdEnvParams *params, struct PtdEnv **out);

/*
 ζ(τ), or NaN for a null handle.

 # Safety
 `env` must be null or a live handle.
 */
double ptd_env_zeta(const struct PtdEnv *env);

/*
 # Safety
 `env` must be null or a handle from `ptd_env_new`, not freed before.
 */
void ptd_env_free(struct PtdEnv *env);

/*
 Continuum Λ(t). A null `cfg` selects the defaults.

 # Safety
 Handles must be live, `cfg` null or readable, `out` writable.
 */
enum PtdStatus ptd_lambda_continuum(double t,
                                    const struct PtdSystem *sys,
                                    const struct PtdEnv *env,
                                    const struct PtdQuadConfig *cfg,
                                    struct PtdQuadResult *out);

/*
 Hermitian reference λ(t).

 # Safety
 `cfg` null or readable, `out` writable.
 */
enum PtdStatus ptd_lambda_hermitian(double t,
                                    double amp,
                                    double cutoff,
                                    struct PtdTemperature temperature,
                                    const struct PtdQuadConfig *cfg,
                                    struct PtdQuadResult *out);

/*
 Λ on `n` times. `error_out` may be null.

 # Safety
 `times` readable and `lambda_out` writable for `n` values; `error_out`
 null or writable for `n` values.
 */
enum PtdStatus ptd_lambda_series(const double *times,
                                 size_t n,
                                 const struct PtdSystem *sys,
                                 const struct PtdEnv *env,
                                 const struct PtdQuadConfig *cfg,
                                 double *lambda_out,
                                 double *error_out);

/*
 Λ(t) for explicit modes `(omegas[i], couplings[i])`.

 # Safety
 `omegas` and `couplings` readable for `n` values, `out` writable.
 */
enum PtdStatus ptd_lambda_discrete(double t,
                                   const double *omegas,
                                   const struct PtdComplex *couplings,
                                   size_t n,
                                   double e1,
                                   double zeta,
                                   double delta,
                                   struct PtdTemperature temperature,
                                   double *out);

/*
 Discrete Λ(t) from `n_modes` midpoint samples of the bath's spectral
 density on `[0, omega_max]`.

 # Safety
 Handles must be live, `out` writable.
 */
enum PtdStatus ptd_lambda_discretized(double t,
                                      const struct PtdSystem *sys,
                                      const struct PtdEnv *env,
                                      size_t n_modes,
                                      double omega_max,
                                      double *out);

/*
 Bath similarity residual in a Fock space of size `dim`.

 # Safety
 `env` must be live, `out` writable.
 */
enum PtdStatus ptd_similarity_residual(size_t dim,
                                       const struct PtdEnv *env,
                                       double m,
                                       double k,
                                       struct PtdResidualReport *out);

/*
 Composite (qubit ⊗ single bath mode) similarity residual.

 # Safety
 Handles must be live, `out` writable.
 */
enum PtdStatus ptd_composite_residual(size_t dim,
                                      const struct PtdSystem *sys,
                                      const struct PtdEnv *env,
                                      struct PtdComplex coupling,
                                      double m,
                                      double k,
                                      struct PtdResidualReport *out);

/*
 `rho01 → rho01·exp(−lambda)`.

 # Safety
 `rho` readable, `out` writable.
 */
enum PtdStatus ptd_evolve_qubit(const struct PtdQubitState *rho,
                                double lambda,
                                struct PtdQubitState *out);

/*
 Phase-damping channel with flip probability `p`.

 # Safety
 `rho` readable, `out` writable.
 */
enum PtdStatus ptd_dephasing_channel(const struct PtdQubitState *rho,
                                     double p,
                                     struct PtdQubitState *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PTDEPHASE_H */
