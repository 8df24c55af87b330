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

#include "qcorr/manifest.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qcorr/error.hpp"

namespace qcorr::manifest {

namespace {

double parse_scalar(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
      } else {
        const std::string num = s.substr(0, slash);
        const std::string den = s.substr(slash + 1);
        std::size_t used_den = 0;
        const double n = std::stod(num, &used);
        const double d = std::stod(den, &used_den);
        if (used == num.size() && used_den == den.size() && d != 0.0) return n / d;
      }
    } catch (const std::exception&) {
    }
    throw ParseError("cannot parse number \"" + s + "\"");
  }
  throw ParseError("expected a number, got " + std::string(j.type_name()));
}

Complex parse_entry(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw ParseError("complex entry must be [re, im]");
    return {parse_scalar(j[0]), parse_scalar(j[1])};
  }
  return {parse_scalar(j), 0.0};
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("manifest is missing \"") + key + "\"");
  }
  return j.at(key);
}

std::string convention(const Document& doc, const char* key, const char* fallback) {
  if (!doc.json.contains("convention")) return fallback;
  const Json& c = doc.json.at("convention");
  if (!c.is_object() || !c.contains(key)) return fallback;
  if (!c.at(key).is_string()) throw ParseError(std::string("convention.") + key + " must be a string");
  return c.at(key).get<std::string>();
}

Json base(Kind kind, const std::string& label) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = to_string(kind);
  j["convention"] = convention_block();
  if (!label.empty()) j["label"] = label;
  return j;
}

void expect_kind(const Document& doc, Kind kind) {
  if (doc.kind != kind) {
    throw ParseError(doc.origin + ": expected a " + to_string(kind) + " manifest, got " +
                     to_string(doc.kind));
  }
}

}  // namespace

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::kState: return "state";
    case Kind::kChannel: return "channel";
    case Kind::kPovm: return "povm";
    case Kind::kStochastic: return "stochastic";
    case Kind::kBasis: return "basis";
    case Kind::kDistribution: return "distribution";
  }
  return "state";
}

Kind kind_from_string(std::string_view name) {
  for (Kind k : {Kind::kState, Kind::kChannel, Kind::kPovm, Kind::kStochastic, Kind::kBasis,
                 Kind::kDistribution}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown manifest kind \"" + std::string(name) + "\"");
}

Json encode(const CMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Json encode(const RealMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json encode(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

CMatrix decode_complex(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<Complex> entries;
  for (const Json& row : j) {
    if (!row.is_array() || row.empty()) throw ParseError("matrix row must be a non-empty array");
    if (cols == 0) cols = row.size();
    if (row.size() != cols) throw ParseError("matrix rows have different lengths");
    for (const Json& e : row) entries.push_back(parse_entry(e));
  }
  try {
    return CMatrix(rows, cols, std::move(entries));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

RealMatrix decode_real(const Json& j) {
  const CMatrix m = decode_complex(j);
  std::vector<double> entries;
  for (const Complex& z : m.entries()) {
    if (z.imag() != 0.0) throw ParseError("expected a real matrix");
    entries.push_back(z.real());
  }
  return RealMatrix(m.rows(), m.cols(), std::move(entries));
}

std::vector<double> decode_vector(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of numbers");
  std::vector<double> v;
  for (const Json& e : j) v.push_back(parse_scalar(e));
  return v;
}

Json convention_block() {
  return {{"choi_normalization", "trace-one"}, {"stochastic_orientation", "column"}};
}

Json state_manifest(const CMatrix& m, const std::vector<std::size_t>& dims,
                    const std::string& label) {
  Json j = base(Kind::kState, label);
  j["dims"] = dims.empty() ? std::vector<std::size_t>{m.rows()} : dims;
  j["data"] = encode(m);
  return j;
}

Json choi_manifest(const ChoiChannel& ch, const std::string& label) {
  Json j = base(Kind::kChannel, label);
  j["dims"] = {ch.d_in(), ch.d_out()};
  j["representation"] = "choi";
  j["data"] = encode(ch.choi().matrix());
  return j;
}

Json measurement_channel_manifest(const MeasurementMap& mm, const std::string& label) {
  Json j = base(Kind::kChannel, label);
  j["dims"] = {mm.d_in(), mm.d_out()};
  j["representation"] = "measurement";
  Json povm = Json::array();
  for (const auto& e : mm.povm()) povm.push_back(encode(e));
  j["povm"] = std::move(povm);
  j["pointer_basis"] = encode(mm.pointer_basis());
  return j;
}

Json povm_manifest(const MeasurementMap& mm, const std::string& label) {
  Json j = base(Kind::kPovm, label);
  j["dims"] = {mm.d_in()};
  Json povm = Json::array();
  for (const auto& e : mm.povm()) povm.push_back(encode(e));
  j["elements"] = std::move(povm);
  j["pointer_basis"] = encode(mm.pointer_basis());
  return j;
}

Json stochastic_manifest(const RealMatrix& p, const std::string& label) {
  Json j = base(Kind::kStochastic, label);
  j["dims"] = {p.rows()};
  j["data"] = encode(p);
  return j;
}

Json basis_manifest(const CMatrix& basis, const std::string& label) {
  Json j = base(Kind::kBasis, label);
  j["dims"] = {basis.rows()};
  j["data"] = encode(basis);
  return j;
}

Json distribution_manifest(const RealMatrix& pi, const std::string& label) {
  Json j = base(Kind::kDistribution, label);
  j["dims"] = {pi.rows(), pi.cols()};
  j["data"] = encode(pi);
  return j;
}

std::string Document::label() const {
  return json.contains("label") && json.at("label").is_string() ? json.at("label").get<std::string>()
                                                                : std::string();
}

Document parse_document(std::string_view text, std::string origin) {
  Document doc;
  doc.origin = std::move(origin);
  doc.sha256 = sha256_hex(text);
  try {
    doc.json = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(doc.origin + ": " + e.what());
  }
  if (!doc.json.is_object()) throw ParseError(doc.origin + ": manifest must be a JSON object");
  const Json& schema = require(doc.json, "schema");
  if (!schema.is_string() || schema.get<std::string>() != kSchema) {
    throw ParseError(doc.origin + ": unsupported schema (expected \"" + kSchema + "\")");
  }
  const Json& kind = require(doc.json, "kind");
  if (!kind.is_string()) throw ParseError(doc.origin + ": kind must be a string");
  doc.kind = kind_from_string(kind.get<std::string>());
  return doc;
}

Document load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), path);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

std::vector<std::size_t> raw_dims(const Document& doc) {
  if (!doc.json.contains("dims")) return {};
  const Json& d = doc.json.at("dims");
  if (!d.is_array()) throw ParseError(doc.origin + ": dims must be an array");
  std::vector<std::size_t> dims;
  for (const Json& e : d) {
    if (!e.is_number_unsigned() || e.get<std::size_t>() == 0) {
      throw ParseError(doc.origin + ": dims must be positive integers");
    }
    dims.push_back(e.get<std::size_t>());
  }
  return dims;
}

CMatrix raw_matrix(const Document& doc) { return decode_complex(require(doc.json, "data")); }

CMatrix raw_choi(const Document& doc) {
  expect_kind(doc, Kind::kChannel);
  CMatrix w = raw_matrix(doc);
  const std::string norm = convention(doc, "choi_normalization", "trace-one");
  if (norm == "trace-one") return w;
  if (norm == "trace-d") {
    const auto dims = raw_dims(doc);
    if (dims.size() != 2) throw ParseError(doc.origin + ": channel dims must be [d_in, d_out]");
    return w * Complex(1.0 / static_cast<double>(dims[0]));
  }
  throw ParseError(doc.origin + ": unknown choi_normalization \"" + norm + "\"");
}

bool has_measurement_form(const Document& doc) {
  return doc.kind == Kind::kPovm || (doc.kind == Kind::kChannel && doc.json.contains("povm"));
}

std::vector<CMatrix> raw_povm(const Document& doc) {
  const Json& list = doc.kind == Kind::kPovm ? require(doc.json, "elements") : require(doc.json, "povm");
  if (!list.is_array() || list.empty()) throw ParseError(doc.origin + ": POVM list is empty");
  std::vector<CMatrix> povm;
  for (const Json& e : list) povm.push_back(decode_complex(e));
  return povm;
}

std::optional<CMatrix> raw_pointer_basis(const Document& doc) {
  if (!doc.json.contains("pointer_basis")) return std::nullopt;
  return decode_complex(doc.json.at("pointer_basis"));
}

RealMatrix raw_stochastic(const Document& doc) {
  expect_kind(doc, Kind::kStochastic);
  RealMatrix p = decode_real(require(doc.json, "data"));
  const std::string orient = convention(doc, "stochastic_orientation", "column");
  if (orient == "column") return p;
  if (orient == "row") return p.transpose();
  throw ParseError(doc.origin + ": unknown stochastic_orientation \"" + orient + "\"");
}

QuantumState load_state(const Document& doc) {
  expect_kind(doc, Kind::kState);
  return QuantumState(raw_matrix(doc), raw_dims(doc));
}

ChoiChannel load_channel(const Document& doc) {
  expect_kind(doc, Kind::kChannel);
  if (has_measurement_form(doc)) return choi_of(load_measurement(doc));
  const auto dims = raw_dims(doc);
  if (dims.size() != 2) throw ParseError(doc.origin + ": channel dims must be [d_in, d_out]");
  return ChoiChannel(raw_choi(doc), dims[0], dims[1]);
}

MeasurementMap load_measurement(const Document& doc) {
  if (!has_measurement_form(doc)) {
    throw ParseError(doc.origin + ": expected a povm manifest or a channel in measurement form");
  }
  std::vector<CMatrix> povm = raw_povm(doc);
  CMatrix pointer = raw_pointer_basis(doc).value_or(CMatrix::identity(povm.size()));
  return MeasurementMap(std::move(povm), std::move(pointer));
}

StochasticMatrix load_stochastic(const Document& doc) { return StochasticMatrix(raw_stochastic(doc)); }

CMatrix load_basis(const Document& doc) {
  expect_kind(doc, Kind::kBasis);
  CMatrix b = raw_matrix(doc);
  if (!b.square() || !is_unitary(b, 1e-9)) throw InvariantViolation(doc.origin + ": basis is not unitary");
  return b;
}

RealMatrix load_distribution(const Document& doc) {
  expect_kind(doc, Kind::kDistribution);
  RealMatrix pi = decode_real(require(doc.json, "data"));
  double total = 0.0;
  for (double x : pi.entries()) {
    if (x < 0.0) throw InvariantViolation(doc.origin + ": distribution has a negative entry");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvariantViolation(doc.origin + ": distribution does not sum to one");
  return pi;
}

std::string format_rational(double x) {
  for (long den = 1; den <= 64; ++den) {
    const double num = std::round(x * static_cast<double>(den));
    if (std::abs(num / static_cast<double>(den) - x) <= 1e-12) {
      if (den == 1) return std::to_string(static_cast<long>(num));
      return std::to_string(static_cast<long>(num)) + "/" + std::to_string(den);
    }
  }
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

}  // namespace qcorr::manifest
