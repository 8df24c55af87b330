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

/* Exercises the C interface from a C translation unit. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "qcorr/qcorr.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void test_run_command(void) {
  char* report = NULL;
  int exit_code = -1;
  EXPECT(qcorr_run_command("{\"command\": \"paper-check\"}", &report, &exit_code) == QCORR_OK);
  EXPECT(exit_code == 0);
  EXPECT(report != NULL && strstr(report, "\"schema\": \"qcorr/1\"") != NULL);
  qcorr_string_free(report);

  EXPECT(qcorr_run_command("{\"command\": \"nope\"}", &report, &exit_code) == QCORR_OK);
  EXPECT(exit_code == 2);
  qcorr_string_free(report);

  EXPECT(qcorr_run_command(NULL, &report, &exit_code) == QCORR_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(qcorr_last_error()) > 0);
}

static void test_state(void) {
  /* (|00> + |11>) / sqrt(2) */
  double m[32] = {0};
  size_t dims[2] = {2, 2};
  qcorr_state* s = NULL;
  char* label = NULL;
  double back[32];
  m[0] = 0.5;
  m[2 * 3] = 0.5;
  m[2 * 12] = 0.5;
  m[2 * 15] = 0.5;
  EXPECT(qcorr_state_create(m, 4, dims, 2, &s) == QCORR_OK);
  EXPECT(qcorr_state_dim(s) == 4);
  EXPECT(qcorr_state_classify(s, 1e-9, &label) == QCORR_OK);
  EXPECT(label != NULL && strcmp(label, "neither") == 0);
  qcorr_string_free(label);
  EXPECT(qcorr_state_matrix(s, back, 32) == QCORR_OK);
  EXPECT(back[30] == 0.5);
  EXPECT(qcorr_state_matrix(s, back, 4) == QCORR_ERR_INVALID_ARGUMENT);
  qcorr_state_destroy(s);

  m[0] = 2.0;
  s = NULL;
  EXPECT(qcorr_state_create(m, 4, dims, 2, &s) == QCORR_ERR_INVARIANT_VIOLATION);
  EXPECT(s == NULL);
  EXPECT(strlen(qcorr_last_error()) > 0);
}

static void test_channel(void) {
  /* Choi state of the qubit identity channel. */
  double w[32] = {0};
  qcorr_channel* ch = NULL;
  qcorr_state* in = NULL;
  qcorr_state* out = NULL;
  char* label = NULL;
  double rho[8] = {0.75, 0, 0.25, 0.1, 0.25, -0.1, 0.25, 0};
  double got[8];
  int k;
  w[0] = 0.5;
  w[2 * 3] = 0.5;
  w[2 * 12] = 0.5;
  w[2 * 15] = 0.5;
  EXPECT(qcorr_channel_from_choi(w, 2, 2, &ch) == QCORR_OK);
  EXPECT(qcorr_channel_d_in(ch) == 2 && qcorr_channel_d_out(ch) == 2);
  EXPECT(qcorr_channel_type(ch, 1e-9, &label) == QCORR_OK);
  EXPECT(label != NULL && strcmp(label, "neither") == 0);
  qcorr_string_free(label);
  EXPECT(qcorr_state_create(rho, 2, NULL, 0, &in) == QCORR_OK);
  EXPECT(qcorr_channel_apply(ch, in, &out) == QCORR_OK);
  EXPECT(qcorr_state_matrix(out, got, 8) == QCORR_OK);
  for (k = 0; k < 8; ++k) EXPECT(got[k] - rho[k] < 1e-14 && rho[k] - got[k] < 1e-14);
  EXPECT(qcorr_channel_apply_one_sided(ch, in, 'B', &out) != QCORR_OK);
  qcorr_state_destroy(out);
  qcorr_state_destroy(in);
  qcorr_channel_destroy(ch);

  w[0] = 1.0;
  EXPECT(qcorr_channel_from_choi(w, 2, 2, &ch) == QCORR_ERR_INVARIANT_VIOLATION);
}

static void test_stationary(void) {
  double id[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  double cyc[9] = {0, 0, 1, 1, 0, 0, 0, 1, 0};
  double bad[4] = {0.5, 0.5, 0.6, 0.5};
  double vec[9];
  size_t d = 0;
  EXPECT(qcorr_stochastic_stationary(id, 3, &d, vec, 9) == QCORR_OK);
  EXPECT(d == 3);
  EXPECT(qcorr_stochastic_stationary(cyc, 3, &d, vec, 9) == QCORR_OK);
  EXPECT(d == 1);
  EXPECT(vec[0] > 0.3333 && vec[0] < 0.3334);
  EXPECT(qcorr_stochastic_stationary(bad, 2, &d, NULL, 0) == QCORR_ERR_INVARIANT_VIOLATION);
  EXPECT(strcmp(qcorr_status_name(QCORR_ERR_NOT_PRIMITIVE), "not primitive") == 0);
}

int main(void) {
  test_run_command();
  test_state();
  test_channel();
  test_stationary();
  if (failures != 0) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return EXIT_FAILURE;
  }
  printf("capi: all checks passed\n");
  return EXIT_SUCCESS;
}
