/*
 * Copyright 2026 The qpmkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to qpmkit. All objects are opaque handles owned by the caller
 * and released with the matching *_free function. Every call returns a
 * status code; on failure qpmk_last_error() describes the problem for the
 * calling thread. Report strings are JSON documents allocated by the
 * library and released with qpmk_string_free. */

#ifndef QPMKIT_QPMKIT_H
#define QPMKIT_QPMKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(QPMK_BUILDING_LIBRARY)
#define QPMK_API __attribute__((visibility("default")))
#else
#define QPMK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpmk_status {
  QPMK_OK = 0,
  QPMK_ERR_EMPTY_INPUT = 1,
  QPMK_ERR_INVALID_ARGUMENT = 2,
  QPMK_ERR_SHAPE = 3,
  QPMK_ERR_INVARIANT = 4,
  QPMK_ERR_NOT_PSD = 5,
  QPMK_ERR_PARSE = 6,
  QPMK_ERR_VERSION = 7,
  QPMK_ERR_IO = 8,
  QPMK_ERR_INTERNAL = 9
} qpmk_status;

typedef enum qpmk_kind {
  QPMK_KIND_QPM = 0,
  QPMK_KIND_CHANNEL = 1,
  QPMK_KIND_CHANNEL_MEASURE = 2,
  QPMK_KIND_SEQUENCE = 3,
  QPMK_KIND_MEASURE = 4,
  QPMK_KIND_DILATION = 5
} qpmk_kind;

typedef enum qpmk_metric { QPMK_METRIC_RHO = 0, QPMK_METRIC_DELTA = 1, QPMK_METRIC_TV = 2 } qpmk_metric;

typedef struct qpmk_instance qpmk_instance;

QPMK_API const char* qpmk_version(void);
QPMK_API const char* qpmk_status_name(qpmk_status status);
/* Message of the last failed call on this thread; empty after a success. */
QPMK_API const char* qpmk_last_error(void);
QPMK_API void qpmk_string_free(char* s);

/* ---- instances ---- */

QPMK_API qpmk_status qpmk_instance_load(const char* path, qpmk_instance** out);
QPMK_API qpmk_status qpmk_instance_parse(const char* text, size_t length, qpmk_instance** out);
QPMK_API qpmk_status qpmk_instance_save(const qpmk_instance* inst, const char* path);
QPMK_API qpmk_status qpmk_instance_serialize(const qpmk_instance* inst, char** out);
QPMK_API void qpmk_instance_free(qpmk_instance* inst);
QPMK_API qpmk_status qpmk_instance_kind(const qpmk_instance* inst, qpmk_kind* out);

/* Dimension, atom count, input count and sequence length (1 where not applicable). */
typedef struct qpmk_shape {
  size_t dim;
  size_t atoms;
  size_t inputs;
  size_t terms;
} qpmk_shape;

QPMK_API qpmk_status qpmk_instance_shape(const qpmk_instance* inst, qpmk_shape* out);

/* Builds a single-measure instance from `atoms` row-major dim x dim blocks,
 * real and imaginary parts in separate arrays. */
QPMK_API qpmk_status qpmk_qpm_from_effects(size_t dim, size_t atoms, const double* re, const double* im,
                                           qpmk_instance** out);

/* Copies effect `atom` of input `input` into row-major dim x dim buffers.
 * Single measures take input 0; sequences read their first term. */
QPMK_API qpmk_status qpmk_effect(const qpmk_instance* inst, size_t input, size_t atom, double* re, double* im);

/* ---- generators ---- */

QPMK_API qpmk_status qpmk_generate_qpm(size_t dim, size_t atoms, uint64_t seed, qpmk_instance** out);
QPMK_API qpmk_status qpmk_generate_channel(size_t dim, size_t atoms, size_t inputs, uint64_t seed,
                                           qpmk_instance** out);
QPMK_API qpmk_status qpmk_generate_sequence(size_t dim, size_t atoms, size_t inputs, size_t length, uint64_t seed,
                                            int shrink, qpmk_instance** out);

/* ---- analysis ---- */

/* *valid is 1 when every invariant of the instance holds. */
QPMK_API qpmk_status qpmk_validate(const qpmk_instance* inst, int* valid, char** report);

typedef struct qpmk_distance_result {
  double value;
  double upper;
  int exact;
} qpmk_distance_result;

/* Both instances must be single measures. QPMK_METRIC_TV measures
 * ||E - F||_TV by the same enumeration as rho. */
QPMK_API qpmk_status qpmk_distance(const qpmk_instance* a, const qpmk_instance* b, qpmk_metric metric,
                                   size_t exact_cap, qpmk_distance_result* out, char** report);

typedef struct qpmk_bures_options {
  size_t restarts;
  size_t env_multiplicity;
  size_t max_iterations;
  uint64_t seed;
} qpmk_bures_options;

typedef struct qpmk_bures_result {
  double lower;
  double upper;
  double dual_lower;
  double rho;
  int converged;
  int bracket_ok;
} qpmk_bures_result;

QPMK_API void qpmk_bures_default_options(qpmk_bures_options* options);
QPMK_API qpmk_status qpmk_bures(const qpmk_instance* a, const qpmk_instance* b, const qpmk_bures_options* options,
                                qpmk_bures_result* out, char** report);

/* Writes a dilation instance and its reconstruction residual. */
QPMK_API qpmk_status qpmk_dilate(const qpmk_instance* inst, int minimal, qpmk_instance** out, double* residual);

typedef struct qpmk_channel_distance_result {
  double value;
  size_t argmax;
  int exact;
  double operator_norm;
  int paths_agree;
} qpmk_channel_distance_result;

QPMK_API qpmk_status qpmk_channel_distance(const qpmk_instance* a, const qpmk_instance* b,
                                           qpmk_channel_distance_result* out, char** report);

/* Extracts a tol-Cauchy subsequence from a sequence instance. With a
 * measure instance `mu` (may be NULL) the terms are first canonicalized
 * modulo mu and the report also carries the weak gaps to the limit.
 * `limit` (may be NULL) receives the limit channel. */
QPMK_API qpmk_status qpmk_converge(const qpmk_instance* sequence, double tol, const qpmk_instance* mu,
                                   qpmk_instance** limit, char** report);

QPMK_API qpmk_status qpmk_equiv(const qpmk_instance* a, const qpmk_instance* b, const qpmk_instance* mu, double tol,
                                int* equivalent, char** report);

#ifdef __cplusplus
}
#endif

#endif
