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

// JSON manifests ("schema": "qcorr/1").
//
//   {"schema": "qcorr/1", "kind": "state", "dims": [2, 2],
//    "convention": {"choi_normalization": "trace-one",
//                   "stochastic_orientation": "column"},
//    "label": "...", "note": "...", "data": [[[re, im], ...], ...]}
//
// Matrix entries are [re, im] pairs, plain numbers or rational strings such
// as "3/8". Kinds: state, channel, povm, stochastic, basis, distribution.
// A channel carries either its Choi matrix in "data" or a measurement form
// in "povm" plus an optional "pointer_basis". Basis columns are the vectors.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qcorr/channel.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/measurement_map.hpp"
#include "qcorr/stochastic.hpp"

namespace qcorr::manifest {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "qcorr/1";

enum class Kind { kState, kChannel, kPovm, kStochastic, kBasis, kDistribution };
std::string to_string(Kind kind);
/// Throws ParseError for an unknown kind.
Kind kind_from_string(std::string_view name);

Json encode(const CMatrix& m);
Json encode(const RealMatrix& m);
Json encode(std::span<const double> v);
/// Throws ParseError on malformed entries or ragged rows.
CMatrix decode_complex(const Json& j);
/// Rejects entries with a non-zero imaginary part.
RealMatrix decode_real(const Json& j);
std::vector<double> decode_vector(const Json& j);

Json convention_block();

Json state_manifest(const CMatrix& m, const std::vector<std::size_t>& dims,
                    const std::string& label = {});
Json choi_manifest(const ChoiChannel& ch, const std::string& label = {});
Json measurement_channel_manifest(const MeasurementMap& mm, const std::string& label = {});
Json povm_manifest(const MeasurementMap& mm, const std::string& label = {});
Json stochastic_manifest(const RealMatrix& p, const std::string& label = {});
Json basis_manifest(const CMatrix& basis, const std::string& label = {});
Json distribution_manifest(const RealMatrix& pi, const std::string& label = {});

struct Document {
  Json json;
  Kind kind = Kind::kState;
  std::string origin;  // path or "<inline>"
  std::string sha256;  // of the raw bytes
  std::string label() const;
};

/// Throws ParseError for invalid JSON, a missing or foreign schema or an
/// unknown kind.
Document parse_document(std::string_view text, std::string origin = "<inline>");
/// Throws IoError when the file cannot be read.
Document load_document(const std::string& path);

std::string sha256_hex(std::string_view bytes);

// Raw decoders: conventions applied, no invariants enforced.
std::vector<std::size_t> raw_dims(const Document& doc);
CMatrix raw_matrix(const Document& doc);
/// Choi matrix in the trace-one convention.
CMatrix raw_choi(const Document& doc);
bool has_measurement_form(const Document& doc);
std::vector<CMatrix> raw_povm(const Document& doc);
std::optional<CMatrix> raw_pointer_basis(const Document& doc);
/// Column orientation.
RealMatrix raw_stochastic(const Document& doc);

// Strict loaders; throw on invariant violations.
QuantumState load_state(const Document& doc);
ChoiChannel load_channel(const Document& doc);
/// From a povm manifest or a channel in measurement form.
MeasurementMap load_measurement(const Document& doc);
StochasticMatrix load_stochastic(const Document& doc);
CMatrix load_basis(const Document& doc);
RealMatrix load_distribution(const Document& doc);

/// "9/8" when x is a rational with denominator <= 64 within 1e-12, else
/// the decimal form.
std::string format_rational(double x);

}  // namespace qcorr::manifest
