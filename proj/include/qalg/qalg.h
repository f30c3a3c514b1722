/* Copyright 2026 The qalg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the qalg numerical core.
 *
 * Every fallible function returns a qalg_status. On failure the out
 * parameters are left untouched and qalg_last_error() describes the problem
 * (the message is per thread and valid until the next failing call).
 *
 * Complex matrices cross the boundary as interleaved (re, im) doubles in
 * row-major order, 2 * rows * cols values in total.
 *
 * A NULL tolerances pointer selects the defaults.
 */

#ifndef QALG_QALG_H_
#define QALG_QALG_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QALG_API __declspec(dllexport)
#else
#define QALG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qalg_status {
    QALG_OK = 0,
    QALG_ERR_DIMENSION = 1,
    QALG_ERR_NOT_HERMITIAN = 2,
    QALG_ERR_NOT_POSITIVE = 3,
    QALG_ERR_INVALID_ARGUMENT = 4,
    QALG_ERR_ILL_CONDITIONED = 5,
    QALG_ERR_NOT_CP = 6,
    QALG_ERR_NO_EQUIVALENCE = 7,
    QALG_ERR_NO_INTERTWINER = 8,
    QALG_ERR_DEGENERATE_SAMPLE = 9,
    QALG_ERR_NOT_A_FACTOR = 10,
    QALG_ERR_NO_CONVERGENCE = 11,
    QALG_ERR_NORMALIZATION = 12,
    QALG_ERR_NULL_ARGUMENT = 100,
    QALG_ERR_INTERNAL = 101
} qalg_status;

QALG_API const char* qalg_status_name(qalg_status status);
QALG_API const char* qalg_last_error(void);
QALG_API const char* qalg_version(void);
/* Name of the pseudo-random generator behind every seeded operation. */
QALG_API const char* qalg_rng_algorithm(void);

typedef struct qalg_tolerances {
    double eps_herm;
    double eps_pos;
    double eps_rank;
    double eps_cluster;
} qalg_tolerances;

QALG_API qalg_tolerances qalg_default_tolerances(void);

/* ---- matrices ---------------------------------------------------------- */

typedef struct qalg_matrix qalg_matrix;

/* data may be NULL for a zero matrix. */
QALG_API qalg_status qalg_matrix_create(size_t rows, size_t cols, const double* data, qalg_matrix** out);
QALG_API void qalg_matrix_free(qalg_matrix* m);
QALG_API size_t qalg_matrix_rows(const qalg_matrix* m);
QALG_API size_t qalg_matrix_cols(const qalg_matrix* m);
/* Copies 2 * rows * cols doubles into data. */
QALG_API qalg_status qalg_matrix_read(const qalg_matrix* m, double* data);

/* Frobenius norm of a - b. */
QALG_API qalg_status qalg_matrix_distance(const qalg_matrix* a, const qalg_matrix* b, double* out);
QALG_API qalg_status qalg_matrix_trace(const qalg_matrix* m, double* re, double* im);
/* ||V^dagger V - 1||_F. */
QALG_API qalg_status qalg_isometry_residual(const qalg_matrix* v, double* out);

QALG_API qalg_status qalg_partial_trace(const qalg_matrix* z, size_t dim_first, size_t dim_second,
                                        int keep_second, qalg_matrix** out);
QALG_API qalg_status qalg_partial_transpose(const qalg_matrix* z, size_t dim_first, size_t dim_second,
                                            int transpose_second, qalg_matrix** out);

/* ---- states and effects ------------------------------------------------ */

typedef struct qalg_state_report {
    int valid;
    double min_eigenvalue;
    double trace_deviation;
    double hermiticity_residual;
} qalg_state_report;

typedef struct qalg_effect_report {
    int valid;
    double min_eigenvalue;
    double max_eigenvalue;
    double hermiticity_residual;
} qalg_effect_report;

QALG_API qalg_status qalg_check_state(const qalg_matrix* m, const qalg_tolerances* tol,
                                      qalg_state_report* report);
QALG_API qalg_status qalg_check_effect(const qalg_matrix* m, const qalg_tolerances* tol,
                                       qalg_effect_report* report);

/* von Neumann entropy in nats; rho must be a valid state. */
QALG_API qalg_status qalg_entropy(const qalg_matrix* rho, const qalg_tolerances* tol, double* out);
QALG_API qalg_status qalg_shannon_entropy(const double* p, size_t n, double* out);
QALG_API qalg_status qalg_is_pure(const qalg_matrix* rho, const qalg_tolerances* tol, int* out);
QALG_API qalg_status qalg_purify(const qalg_matrix* rho, const qalg_tolerances* tol, qalg_matrix** out);

/* states[i] are column vectors of a common dimension. */
QALG_API qalg_status qalg_density_from_ensemble(size_t count, const double* probabilities,
                                                const qalg_matrix* const* states, qalg_matrix** out);

QALG_API qalg_status qalg_density_to_bloch(const qalg_matrix* rho, const qalg_tolerances* tol, double r[3]);
QALG_API qalg_status qalg_bloch_to_density(const double r[3], qalg_matrix** out);

/* ---- channels ---------------------------------------------------------- */

typedef struct qalg_channel qalg_channel;

typedef struct qalg_channel_report {
    int cp;
    int tp;
    int unital;
    double min_choi_eigenvalue;
    double tp_residual;
    double unital_residual;
    double hermiticity_residual;
    size_t kraus_rank;
} qalg_channel_report;

QALG_API qalg_status qalg_channel_from_kraus(size_t dim_in, size_t dim_out, size_t count,
                                             const qalg_matrix* const* kraus, qalg_channel** out);
/* Kraus form of a Choi matrix on C^dim_out (x) C^dim_in; fails with
 * QALG_ERR_NOT_CP when the Choi matrix is not positive. */
QALG_API qalg_status qalg_channel_from_choi(const qalg_matrix* choi, size_t dim_out, size_t dim_in,
                                            const qalg_tolerances* tol, qalg_channel** out);
QALG_API void qalg_channel_free(qalg_channel* ch);
QALG_API size_t qalg_channel_dim_in(const qalg_channel* ch);
QALG_API size_t qalg_channel_dim_out(const qalg_channel* ch);
QALG_API size_t qalg_channel_kraus_count(const qalg_channel* ch);
QALG_API qalg_status qalg_channel_kraus(const qalg_channel* ch, size_t i, qalg_matrix** out);
/* Unnormalized Choi matrix sum_ij E(|i><j|) (x) |i><j|. */
QALG_API qalg_status qalg_channel_choi(const qalg_channel* ch, qalg_matrix** out);
QALG_API qalg_status qalg_channel_apply(const qalg_channel* ch, const qalg_matrix* rho, qalg_matrix** out);
QALG_API qalg_status qalg_channel_adjoint_apply(const qalg_channel* ch, const qalg_matrix* x,
                                                qalg_matrix** out);
QALG_API qalg_status qalg_channel_check(const qalg_channel* ch, const qalg_tolerances* tol,
                                        qalg_channel_report* report);
QALG_API qalg_status qalg_check_choi(const qalg_matrix* choi, size_t dim_out, size_t dim_in,
                                     const qalg_tolerances* tol, qalg_channel_report* report);
/* Action of a Choi matrix on an input operator. */
QALG_API qalg_status qalg_choi_apply(const qalg_matrix* choi, size_t dim_out, size_t dim_in,
                                     const qalg_matrix* rho, qalg_matrix** out);

/* Minimal Stinespring isometry, (dim_out * dim_env) x dim_in. */
QALG_API qalg_status qalg_channel_dilate(const qalg_channel* ch, qalg_matrix** v, size_t* dim_env);
/* Tr_E(V rho V^dagger). */
QALG_API qalg_status qalg_dilation_apply(const qalg_matrix* v, size_t dim_out, size_t dim_env,
                                         const qalg_matrix* rho, qalg_matrix** out);

/* ---- measurements ------------------------------------------------------ */

typedef struct qalg_povm qalg_povm;

typedef struct qalg_povm_report {
    int valid;
    double min_eigenvalue;
    double completeness_residual;
} qalg_povm_report;

/* labels may be NULL, in which case outcomes are labelled "0", "1", ... */
QALG_API qalg_status qalg_povm_create(size_t count, const char* const* labels,
                                      const qalg_matrix* const* effects, qalg_povm** out);
QALG_API void qalg_povm_free(qalg_povm* m);
QALG_API size_t qalg_povm_size(const qalg_povm* m);
QALG_API const char* qalg_povm_label(const qalg_povm* m, size_t i);
QALG_API qalg_status qalg_povm_effect(const qalg_povm* m, size_t i, qalg_matrix** out);
QALG_API qalg_status qalg_povm_check(const qalg_povm* m, const qalg_tolerances* tol,
                                     qalg_povm_report* report);
/* Two-outcome POVM {E, 1 - E}. */
QALG_API qalg_status qalg_effect_observable(const qalg_matrix* effect, const qalg_tolerances* tol,
                                            qalg_povm** out);
/* pi is outputs x inputs, row-major, column-stochastic; inputs = povm size. */
QALG_API qalg_status qalg_povm_coarse_grain(const qalg_povm* m, const double* pi, size_t outputs,
                                            qalg_povm** out);

/* probabilities receives qalg_povm_size(m) values. */
QALG_API qalg_status qalg_measure(const qalg_matrix* rho, const qalg_povm* m, const qalg_tolerances* tol,
                                  double* probabilities);
/* counts receives qalg_povm_size(m) values summing to n. */
QALG_API qalg_status qalg_sample(const qalg_matrix* rho, const qalg_povm* m, uint64_t n, uint64_t seed,
                                 const qalg_tolerances* tol, uint64_t* counts);

/* ---- algebras ---------------------------------------------------------- */

typedef struct qalg_algebra qalg_algebra;
typedef struct qalg_structure qalg_structure;
typedef struct qalg_hybrid qalg_hybrid;

/* Smallest *-algebra containing the generators. */
QALG_API qalg_status qalg_algebra_generate(size_t count, const qalg_matrix* const* generators,
                                           const qalg_tolerances* tol, qalg_algebra** out);
QALG_API void qalg_algebra_free(qalg_algebra* a);
QALG_API size_t qalg_algebra_dim(const qalg_algebra* a);
QALG_API size_t qalg_algebra_ambient_dim(const qalg_algebra* a);
QALG_API size_t qalg_algebra_center_dim(const qalg_algebra* a, const qalg_tolerances* tol);
QALG_API qalg_status qalg_algebra_unit(const qalg_algebra* a, qalg_matrix** out);

/* U A U^dagger = [ (+)_i 1_{m_i} (x) M_{n_i} ] (+) 0_{d0}. */
QALG_API qalg_status qalg_structure_decompose(const qalg_algebra* a, uint64_t seed,
                                              const qalg_tolerances* tol, qalg_structure** out);
QALG_API void qalg_structure_free(qalg_structure* s);
QALG_API size_t qalg_structure_block_count(const qalg_structure* s);
QALG_API qalg_status qalg_structure_block(const qalg_structure* s, size_t i, size_t* m, size_t* n);
QALG_API size_t qalg_structure_d0(const qalg_structure* s);
QALG_API double qalg_structure_residual(const qalg_structure* s);
QALG_API qalg_status qalg_structure_unitary(const qalg_structure* s, qalg_matrix** out);

/* Canonical hybrid form of X -> Tr(r X) on the algebra. */
QALG_API qalg_status qalg_canonical_state(const qalg_algebra* a, const qalg_matrix* r, uint64_t seed,
                                          const qalg_tolerances* tol, qalg_hybrid** out);
QALG_API void qalg_hybrid_free(qalg_hybrid* h);
QALG_API size_t qalg_hybrid_block_count(const qalg_hybrid* h);
QALG_API qalg_status qalg_hybrid_block(const qalg_hybrid* h, size_t i, double* p, size_t* m,
                                       qalg_matrix** rho);
QALG_API const qalg_structure* qalg_hybrid_structure(const qalg_hybrid* h);
/* U^dagger [ (+)_i p_i (1/m_i) (x) rho_i (+) 0 ] U. */
QALG_API qalg_status qalg_hybrid_reconstruct(const qalg_hybrid* h, qalg_matrix** out);
/* Worst |Tr(r B) - Tr(R B)| over an orthonormal basis of the algebra. */
QALG_API qalg_status qalg_hybrid_functional_residual(const qalg_hybrid* h, const qalg_algebra* a,
                                                     const qalg_matrix* r, double* out);

#ifdef __cplusplus
}
#endif

#endif /* QALG_QALG_H_ */
