/*
 * Copyright 2026 The cpdyn Authors
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

/*
 * C interface to cpdyn: reduced dynamics, assignment maps and consistency
 * checks for finite-dimensional system-environment models.
 *
 * Conventions
 *   - Every function returning cpdyn_status leaves its out-parameters
 *     untouched on failure; cpdyn_last_error() then describes the failure
 *     for the calling thread.
 *   - Complex data is interleaved (re, im), row-major.
 *   - Handles are owned by the caller and released with the matching
 *     *_free function. Passing NULL to a *_free function is a no-op.
 *   - Strings returned through char** are released with cpdyn_string_free.
 */

#ifndef CPDYN_CPDYN_H
#define CPDYN_CPDYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(CPDYN_BUILDING_LIBRARY)
#define CPDYN_API __attribute__((visibility("default")))
#else
#define CPDYN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cpdyn_status {
  CPDYN_OK = 0,
  CPDYN_INVALID_ARGUMENT = 1,
  CPDYN_DIMENSION_MISMATCH = 2,
  CPDYN_UNKNOWN_FACTOR = 3,
  CPDYN_NOT_HERMITIAN = 4,
  CPDYN_NOT_PSD = 5,
  CPDYN_NOT_UNITARY = 6,
  CPDYN_INVALID_DISTRIBUTION = 7,
  CPDYN_ZERO_NORMALIZATION = 8,
  CPDYN_SIGNED_KRAUS = 9,
  CPDYN_OUT_OF_KERNEL = 10,
  CPDYN_PARSE_ERROR = 11,
  CPDYN_NULL_ARGUMENT = 12,
  CPDYN_INTERNAL_ERROR = 99
} cpdyn_status;

typedef struct cpdyn_rng cpdyn_rng;
typedef struct cpdyn_operator cpdyn_operator;
typedef struct cpdyn_channel cpdyn_channel;
typedef struct cpdyn_subspace cpdyn_subspace;
typedef struct cpdyn_assignment cpdyn_assignment;
typedef struct cpdyn_family cpdyn_family;

CPDYN_API const char* cpdyn_version(void);
CPDYN_API const char* cpdyn_status_string(cpdyn_status status);
/* Message of the last failure on this thread; "" if none. */
CPDYN_API const char* cpdyn_last_error(void);
CPDYN_API void cpdyn_string_free(char* s);

/* ---- random numbers ---------------------------------------------------- */

CPDYN_API cpdyn_status cpdyn_rng_create(uint64_t seed, cpdyn_rng** out);
CPDYN_API void cpdyn_rng_free(cpdyn_rng* rng);

/* ---- operators --------------------------------------------------------- */

/* labels: A, S, E, C, L<n>, R<n>; data holds 2 * total_dim^2 doubles. */
CPDYN_API cpdyn_status cpdyn_operator_create(const char* const* labels, const int* dims, size_t n_factors,
                                             const double* data, cpdyn_operator** out);
CPDYN_API void cpdyn_operator_free(cpdyn_operator* op);
CPDYN_API cpdyn_status cpdyn_operator_dim(const cpdyn_operator* op, int* dim);
/* len must be at least 2 * dim^2. */
CPDYN_API cpdyn_status cpdyn_operator_data(const cpdyn_operator* op, double* out, size_t len);
CPDYN_API cpdyn_status cpdyn_operator_to_json(const cpdyn_operator* op, char** out);
CPDYN_API cpdyn_status cpdyn_operator_from_json(const char* json, cpdyn_operator** out);

CPDYN_API cpdyn_status cpdyn_kron(const cpdyn_operator* a, const cpdyn_operator* b, cpdyn_operator** out);
CPDYN_API cpdyn_status cpdyn_partial_trace(const cpdyn_operator* op, const char* const* keep, size_t n_keep,
                                           cpdyn_operator** out);
/* u op u^dagger */
CPDYN_API cpdyn_status cpdyn_ad_u(const cpdyn_operator* u, const cpdyn_operator* op, cpdyn_operator** out);
/* Descending eigenvalues of a Hermitian operator; len must be at least dim. */
CPDYN_API cpdyn_status cpdyn_eigenvalues(const cpdyn_operator* op, double* out, size_t len);
/* Natural-log von Neumann entropy of a density matrix. */
CPDYN_API cpdyn_status cpdyn_entropy(const cpdyn_operator* rho, double* out);

CPDYN_API cpdyn_status cpdyn_random_unitary(int dim, cpdyn_rng* rng, cpdyn_operator** out);
CPDYN_API cpdyn_status cpdyn_random_density(int dim, int rank, cpdyn_rng* rng, cpdyn_operator** out);

/* ---- channels ---------------------------------------------------------- */

CPDYN_API cpdyn_status cpdyn_channel_from_json(const char* json, cpdyn_channel** out);
CPDYN_API cpdyn_status cpdyn_channel_to_json(const cpdyn_channel* ch, char** out);
CPDYN_API void cpdyn_channel_free(cpdyn_channel* ch);
CPDYN_API cpdyn_status cpdyn_channel_dims(const cpdyn_channel* ch, int* in_dim, int* out_dim);
CPDYN_API cpdyn_status cpdyn_channel_apply(const cpdyn_channel* ch, const cpdyn_operator* x, cpdyn_operator** out);
CPDYN_API cpdyn_status cpdyn_channel_min_choi_eigenvalue(const cpdyn_channel* ch, double* out);
CPDYN_API cpdyn_status cpdyn_channel_is_cp(const cpdyn_channel* ch, double rel_tol, int* out);
CPDYN_API cpdyn_status cpdyn_channel_tp_error(const cpdyn_channel* ch, double* out);
CPDYN_API cpdyn_status cpdyn_channel_choi_json(const cpdyn_channel* ch, char** out);
CPDYN_API cpdyn_status cpdyn_channel_kraus_json(const cpdyn_channel* ch, char** out);

/* ---- subspaces of L(H_S (x) H_E) ---------------------------------------- */

CPDYN_API cpdyn_status cpdyn_subspace_full(int ds, int de, cpdyn_subspace** out);
CPDYN_API cpdyn_status cpdyn_subspace_span(const cpdyn_operator* const* ops, size_t n, int ds, int de,
                                           cpdyn_subspace** out);
CPDYN_API cpdyn_status cpdyn_subspace_from_json(const char* json, cpdyn_subspace** out);
CPDYN_API cpdyn_status cpdyn_subspace_to_json(const cpdyn_subspace* v, char** out);
CPDYN_API void cpdyn_subspace_free(cpdyn_subspace* v);
/* V0 = V intersected with the kernel of Tr_E. */
CPDYN_API cpdyn_status cpdyn_subspace_kernel(const cpdyn_subspace* v, cpdyn_subspace** out);
CPDYN_API cpdyn_status cpdyn_subspace_dims(const cpdyn_subspace* v, int* dim_v, int* dim_v0, int* dim_domain);
CPDYN_API cpdyn_status cpdyn_subspace_is_u_consistent(const cpdyn_subspace* v, const cpdyn_operator* u, double tol,
                                                      int* out);

/* ---- assignment maps --------------------------------------------------- */

CPDYN_API cpdyn_status cpdyn_assignment_canonical(const cpdyn_subspace* v, cpdyn_assignment** out);
/* x -> x (x) omega_e */
CPDYN_API cpdyn_status cpdyn_assignment_product(const cpdyn_operator* omega_e, int ds, cpdyn_assignment** out);
CPDYN_API cpdyn_status cpdyn_assignment_family(const cpdyn_family* fam, cpdyn_assignment** out);
CPDYN_API cpdyn_status cpdyn_assignment_from_json(const char* json, cpdyn_assignment** out);
CPDYN_API cpdyn_status cpdyn_assignment_to_json(const cpdyn_assignment* a, char** out);
CPDYN_API void cpdyn_assignment_free(cpdyn_assignment* a);
CPDYN_API cpdyn_status cpdyn_assignment_is_cp(const cpdyn_assignment* a, int* out);
CPDYN_API cpdyn_status cpdyn_assignment_min_choi_eigenvalue(const cpdyn_assignment* a, double* out);
/* Tr_E o Ad_u o a */
CPDYN_API cpdyn_status cpdyn_reduced_dynamics(const cpdyn_operator* u, const cpdyn_assignment* a, cpdyn_channel** out);

/* ---- families ---------------------------------------------------------- */

CPDYN_API cpdyn_status cpdyn_family_from_json(const char* json, cpdyn_family** out);
CPDYN_API cpdyn_status cpdyn_family_to_json(const cpdyn_family* fam, char** out);
CPDYN_API void cpdyn_family_free(cpdyn_family* fam);
CPDYN_API cpdyn_status cpdyn_family_dims(const cpdyn_family* fam, int* ds, int* de);
CPDYN_API cpdyn_status cpdyn_family_sample(const cpdyn_family* fam, cpdyn_rng* rng, cpdyn_operator** out);
CPDYN_API cpdyn_status cpdyn_family_subspace(const cpdyn_family* fam, cpdyn_subspace** out);

/* ---- information measures (nats) --------------------------------------- */

/* I(X:Y) with X the listed factors and Y the rest. */
CPDYN_API cpdyn_status cpdyn_mutual_information(const cpdyn_operator* rho, const char* const* part_x, size_t n,
                                                double* out);
/* I(A:E|S); the layout must be A, S, E. */
CPDYN_API cpdyn_status cpdyn_conditional_mutual_information(const cpdyn_operator* rho, double* out);
CPDYN_API cpdyn_status cpdyn_dpi_check(const cpdyn_operator* rho_ase, const cpdyn_operator* u_se, double* i_before,
                                       double* i_after, double* delta);

/* ---- harness ----------------------------------------------------------- */

/* Runs one harness command. config_json may be NULL for defaults. On
 * success *report holds JSON Lines and *pass the summary verdict. */
CPDYN_API cpdyn_status cpdyn_run(const char* command, const char* config_json, char** report, int* pass);

#ifdef __cplusplus
}
#endif

#endif /* CPDYN_CPDYN_H */
