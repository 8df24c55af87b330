/*
 * Copyright 2026 The qcorr Authors
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

/*
 * C interface to libqcorr.
 *
 * Matrices cross the boundary as row-major arrays of interleaved doubles
 * (re, im, re, im, ...). Strings returned through char** are owned by the
 * caller and released with qcorr_string_free. On failure a function returns
 * a non-zero status and qcorr_last_error() describes it; the message is
 * kept per thread until the next failing call.
 */

#ifndef QCORR_QCORR_H_
#define QCORR_QCORR_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QCORR_BUILDING_LIBRARY)
#define QCORR_API __declspec(dllexport)
#else
#define QCORR_API __declspec(dllimport)
#endif
#else
#define QCORR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qcorr_status {
  QCORR_OK = 0,
  QCORR_ERR_INVALID_ARGUMENT = 1,
  QCORR_ERR_DIMENSION_MISMATCH = 2,
  QCORR_ERR_INVARIANT_VIOLATION = 3,
  QCORR_ERR_NOT_PRIMITIVE = 4,
  QCORR_ERR_RESOURCE_CAP = 5,
  QCORR_ERR_PARSE = 6,
  QCORR_ERR_IO = 7,
  QCORR_ERR_INTERNAL = 8
} qcorr_status;

typedef struct qcorr_state qcorr_state;
typedef struct qcorr_channel qcorr_channel;

QCORR_API const char* qcorr_version(void);
QCORR_API const char* qcorr_last_error(void);
QCORR_API const char* qcorr_status_name(qcorr_status status);
QCORR_API void qcorr_string_free(char* s);

/*
 * Runs a command request (JSON, see the README) and returns the JSON report.
 * exit_code receives 0 pass, 1 check failed, 2 invalid input or 3 resource
 * cap. Command failures are part of the report; the status is non-zero only
 * for bad arguments to this function.
 */
QCORR_API qcorr_status qcorr_run_command(const char* request_json, char** report_json,
                                         int* exit_code);

/* dims may be NULL (single factor) when ndims is 0. */
QCORR_API qcorr_status qcorr_state_create(const double* re_im, size_t dim, const size_t* dims,
                                          size_t ndims, qcorr_state** out);
QCORR_API qcorr_status qcorr_state_from_manifest(const char* manifest_json, qcorr_state** out);
QCORR_API void qcorr_state_destroy(qcorr_state* state);
QCORR_API size_t qcorr_state_dim(const qcorr_state* state);
/* Copies 2 * dim * dim doubles into re_im; capacity counts doubles. */
QCORR_API qcorr_status qcorr_state_matrix(const qcorr_state* state, double* re_im, size_t capacity);
/* "CC", "CQ-only", "QC-only" or "neither" for a bipartite state. */
QCORR_API qcorr_status qcorr_state_classify(const qcorr_state* state, double tol, char** label);

/* Choi matrix, trace one, of dimension d_in * d_out. */
QCORR_API qcorr_status qcorr_channel_from_choi(const double* re_im, size_t d_in, size_t d_out,
                                               qcorr_channel** out);
QCORR_API qcorr_status qcorr_channel_from_manifest(const char* manifest_json, qcorr_channel** out);
QCORR_API void qcorr_channel_destroy(qcorr_channel* channel);
QCORR_API size_t qcorr_channel_d_in(const qcorr_channel* channel);
QCORR_API size_t qcorr_channel_d_out(const qcorr_channel* channel);
/* "CC-type", "QC-type" or "neither". */
QCORR_API qcorr_status qcorr_channel_type(const qcorr_channel* channel, double tol, char** label);
QCORR_API qcorr_status qcorr_channel_apply(const qcorr_channel* channel, const qcorr_state* input,
                                           qcorr_state** out);
/* (1 (x) L) when side is 'B', (L (x) 1) when side is 'A'. */
QCORR_API qcorr_status qcorr_channel_apply_one_sided(const qcorr_channel* channel,
                                                     const qcorr_state* input, char side,
                                                     qcorr_state** out);

/*
 * Stationary analysis of a column-stochastic d x d matrix (row-major).
 * Writes the number of recurrent classes to degeneracy and, when vectors is
 * not NULL, the Perron vectors one after another (capacity in doubles).
 */
QCORR_API qcorr_status qcorr_stochastic_stationary(const double* p, size_t d, size_t* degeneracy,
                                                    double* vectors, size_t capacity);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* QCORR_QCORR_H_ */
