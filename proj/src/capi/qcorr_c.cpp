// Copyright 2026 The qcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcorr/qcorr.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "qcorr/channel.hpp"
#include "qcorr/commands.hpp"
#include "qcorr/correlation.hpp"
#include "qcorr/error.hpp"
#include "qcorr/manifest.hpp"
#include "qcorr/markov.hpp"

struct qcorr_state {
  qcorr::QuantumState value;
};

struct qcorr_channel {
  qcorr::ChoiChannel value;
};

namespace {

thread_local std::string g_last_error;

qcorr_status status_for(qcorr::ErrorCode code) {
  switch (code) {
    case qcorr::ErrorCode::kInvalidArgument: return QCORR_ERR_INVALID_ARGUMENT;
    case qcorr::ErrorCode::kDimensionMismatch: return QCORR_ERR_DIMENSION_MISMATCH;
    case qcorr::ErrorCode::kInvariantViolation: return QCORR_ERR_INVARIANT_VIOLATION;
    case qcorr::ErrorCode::kNotPrimitive: return QCORR_ERR_NOT_PRIMITIVE;
    case qcorr::ErrorCode::kResourceCap: return QCORR_ERR_RESOURCE_CAP;
    case qcorr::ErrorCode::kParse: return QCORR_ERR_PARSE;
    case qcorr::ErrorCode::kIo: return QCORR_ERR_IO;
  }
  return QCORR_ERR_INTERNAL;
}

qcorr_status fail(qcorr_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
qcorr_status guarded(F&& body) {
  try {
    body();
    return QCORR_OK;
  } catch (const qcorr::Error& e) {
    return fail(status_for(e.code()), e.what());
  } catch (const qcorr::manifest::Json::exception& e) {
    return fail(QCORR_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QCORR_ERR_RESOURCE_CAP, "out of memory");
  } catch (const std::exception& e) {
    return fail(QCORR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QCORR_ERR_INTERNAL, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qcorr::CMatrix read_matrix(const double* re_im, std::size_t rows, std::size_t cols) {
  std::vector<qcorr::Complex> entries(rows * cols);
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = {re_im[2 * k], re_im[2 * k + 1]};
  return qcorr::CMatrix(rows, cols, std::move(entries));
}

}  // namespace

extern "C" {

const char* qcorr_version(void) { return "0.1.0"; }

const char* qcorr_last_error(void) { return g_last_error.c_str(); }

const char* qcorr_status_name(qcorr_status status) {
  switch (status) {
    case QCORR_OK: return "ok";
    case QCORR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QCORR_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case QCORR_ERR_INVARIANT_VIOLATION: return "invariant violation";
    case QCORR_ERR_NOT_PRIMITIVE: return "not primitive";
    case QCORR_ERR_RESOURCE_CAP: return "resource cap exceeded";
    case QCORR_ERR_PARSE: return "parse error";
    case QCORR_ERR_IO: return "i/o error";
    case QCORR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void qcorr_string_free(char* s) { std::free(s); }

qcorr_status qcorr_run_command(const char* request_json, char** report_json, int* exit_code) {
  if (request_json == nullptr || report_json == nullptr || exit_code == nullptr) {
    return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_run_command: null argument");
  }
  *report_json = nullptr;
  return guarded([&] {
    const qcorr::commands::Outcome out = qcorr::commands::run_text(request_json);
    *report_json = duplicate(out.report.dump(2));
    *exit_code = out.exit_code;
  });
}

qcorr_status qcorr_state_create(const double* re_im, size_t dim, const size_t* dims, size_t ndims,
                                qcorr_state** out) {
  if (re_im == nullptr || out == nullptr || dim == 0 || (ndims > 0 && dims == nullptr)) {
    return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_state_create: bad argument");
  }
  return guarded([&] {
    std::vector<std::size_t> factors(dims, dims + ndims);
    *out = new qcorr_state{qcorr::QuantumState(read_matrix(re_im, dim, dim), std::move(factors))};
  });
}

qcorr_status qcorr_state_from_manifest(const char* manifest_json, qcorr_state** out) {
  if (manifest_json == nullptr || out == nullptr) {
    return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_state_from_manifest: null argument");
  }
  return guarded([&] {
    const auto doc = qcorr::manifest::parse_document(manifest_json);
    *out = new qcorr_state{qcorr::manifest::load_state(doc)};
  });
}

void qcorr_state_destroy(qcorr_state* state) { delete state; }

size_t qcorr_state_dim(const qcorr_state* state) { return state == nullptr ? 0 : state->value.dim(); }

qcorr_status qcorr_state_matrix(const qcorr_state* state, double* re_im, size_t capacity) {
  if (state == nullptr || re_im == nullptr) return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_state_matrix: null argument");
  const auto entries = state->value.matrix().entries();
  if (capacity < 2 * entries.size()) return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_state_matrix: buffer too small");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    re_im[2 * k] = entries[k].real();
    re_im[2 * k + 1] = entries[k].imag();
  }
  return QCORR_OK;
}

qcorr_status qcorr_state_classify(const qcorr_state* state, double tol, char** label) {
  if (state == nullptr || label == nullptr) return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_state_classify: null argument");
  return guarded([&] { *label = duplicate(qcorr::to_string(qcorr::classify_state(state->value, tol).label)); });
}

qcorr_status qcorr_channel_from_choi(const double* re_im, size_t d_in, size_t d_out, qcorr_channel** out) {
  if (re_im == nullptr || out == nullptr || d_in == 0 || d_out == 0) {
    return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_channel_from_choi: bad argument");
  }
  return guarded([&] {
    const std::size_t n = d_in * d_out;
    *out = new qcorr_channel{qcorr::ChoiChannel(read_matrix(re_im, n, n), d_in, d_out)};
  });
}

qcorr_status qcorr_channel_from_manifest(const char* manifest_json, qcorr_channel** out) {
  if (manifest_json == nullptr || out == nullptr) {
    return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_channel_from_manifest: null argument");
  }
  return guarded([&] {
    const auto doc = qcorr::manifest::parse_document(manifest_json);
    if (doc.kind == qcorr::manifest::Kind::kPovm) {
      *out = new qcorr_channel{qcorr::choi_of(qcorr::manifest::load_measurement(doc))};
    } else {
      *out = new qcorr_channel{qcorr::manifest::load_channel(doc)};
    }
  });
}

void qcorr_channel_destroy(qcorr_channel* channel) { delete channel; }

size_t qcorr_channel_d_in(const qcorr_channel* channel) { return channel == nullptr ? 0 : channel->value.d_in(); }

size_t qcorr_channel_d_out(const qcorr_channel* channel) { return channel == nullptr ? 0 : channel->value.d_out(); }

qcorr_status qcorr_channel_type(const qcorr_channel* channel, double tol, char** label) {
  if (channel == nullptr || label == nullptr) return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_channel_type: null argument");
  return guarded([&] {
    const char* type = "neither";
    if (qcorr::qc_type_extract(channel->value, tol)) {
      type = qcorr::cc_type_extract(channel->value, tol) ? "CC-type" : "QC-type";
    }
    *label = duplicate(type);
  });
}

qcorr_status qcorr_channel_apply(const qcorr_channel* channel, const qcorr_state* input, qcorr_state** out) {
  if (channel == nullptr || input == nullptr || out == nullptr) {
    return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_channel_apply: null argument");
  }
  return guarded([&] { *out = new qcorr_state{channel->value.apply(input->value)}; });
}

qcorr_status qcorr_channel_apply_one_sided(const qcorr_channel* channel, const qcorr_state* input, char side,
                                           qcorr_state** out) {
  if (channel == nullptr || input == nullptr || out == nullptr || (side != 'A' && side != 'B')) {
    return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_channel_apply_one_sided: bad argument");
  }
  return guarded([&] {
    const qcorr::Side s = side == 'A' ? qcorr::Side::kA : qcorr::Side::kB;
    *out = new qcorr_state{qcorr::apply_one_sided(channel->value, input->value, s)};
  });
}

qcorr_status qcorr_stochastic_stationary(const double* p, size_t d, size_t* degeneracy, double* vectors,
                                         size_t capacity) {
  if (p == nullptr || degeneracy == nullptr || d == 0) {
    return fail(QCORR_ERR_INVALID_ARGUMENT, "qcorr_stochastic_stationary: bad argument");
  }
  return guarded([&] {
    const qcorr::StochasticMatrix m(qcorr::RealMatrix(d, d, std::vector<double>(p, p + d * d)));
    const auto analysis = qcorr::markov::stationary_analysis(m);
    *degeneracy = analysis.degeneracy();
    if (vectors == nullptr) return;
    if (capacity < analysis.degeneracy() * d) throw qcorr::InvalidArgument("vector buffer too small");
    for (std::size_t k = 0; k < analysis.degeneracy(); ++k) {
      std::copy(analysis.perron_vectors[k].begin(), analysis.perron_vectors[k].end(), vectors + k * d);
    }
  });
}

}  // extern "C"
