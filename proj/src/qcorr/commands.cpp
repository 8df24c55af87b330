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

#include "qcorr/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <new>
#include <optional>

#include "qcorr/broadcast.hpp"
#include "qcorr/channel.hpp"
#include "qcorr/correlation.hpp"
#include "qcorr/fixtures.hpp"
#include "qcorr/markov.hpp"
#include "qcorr/random.hpp"

namespace qcorr::commands {

namespace {

using manifest::Document;
using manifest::Kind;

constexpr double kExactTol = 1e-12;

// ---------------------------------------------------------------------------
// Options

double opt_double(const Json& o, const char* key, double fallback) {
  if (!o.contains(key)) return fallback;
  if (!o.at(key).is_number()) throw InvalidArgument(std::string("option ") + key + " must be a number");
  return o.at(key).get<double>();
}

std::size_t opt_size(const Json& o, const char* key, std::size_t fallback) {
  if (!o.contains(key)) return fallback;
  const Json& v = o.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
    throw InvalidArgument(std::string("option ") + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool opt_bool(const Json& o, const char* key) {
  if (!o.contains(key)) return false;
  if (!o.at(key).is_boolean()) throw InvalidArgument(std::string("option ") + key + " must be a boolean");
  return o.at(key).get<bool>();
}

std::optional<std::string> opt_string(const Json& o, const char* key) {
  if (!o.contains(key)) return std::nullopt;
  if (!o.at(key).is_string()) throw InvalidArgument(std::string("option ") + key + " must be a string");
  return o.at(key).get<std::string>();
}

std::uint64_t opt_seed(const Json& o) {
  if (!o.contains("seed")) return kDefaultSeed;
  return opt_size(o, "seed", 0);
}

// A manifest reference: a path string or an inline object.
Document fetch(const Json& ref, const std::string& role) {
  if (ref.is_string()) return manifest::load_document(ref.get<std::string>());
  if (ref.is_object()) return manifest::parse_document(ref.dump(), "<inline:" + role + ">");
  throw InvalidArgument(role + " must be a path or an inline manifest");
}

std::optional<Document> fetch_option(const Json& options, const char* key) {
  if (!options.contains(key)) return std::nullopt;
  return fetch(options.at(key), key);
}

Document fetch_primary(const Json& request) {
  if (request.contains("inline")) return fetch(request.at("inline"), "manifest");
  if (request.contains("path")) return fetch(request.at("path"), "manifest");
  throw InvalidArgument("request needs a manifest path");
}

// ---------------------------------------------------------------------------
// Reports

class Report {
 public:
  Report(std::string command, const Json& args) {
    json_["schema"] = manifest::kSchema;
    json_["command"] = std::move(command);
    json_["args"] = args;
    json_["inputs"] = Json::array();
    json_["tolerances"] = Json::object();
    json_["findings"] = Json::object();
    json_["checks"] = Json::array();
  }

  void input(const std::string& role, const Document& doc) {
    json_["inputs"].push_back({{"role", role},
                               {"origin", doc.origin},
                               {"kind", manifest::to_string(doc.kind)},
                               {"label", doc.label()},
                               {"sha256", doc.sha256}});
  }
  void fixture_input(const std::string& role, const Json& m) {
    json_["inputs"].push_back({{"role", role},
                               {"origin", "<builtin>"},
                               {"kind", m.at("kind")},
                               {"label", m.value("label", "")},
                               {"sha256", manifest::sha256_hex(m.dump())}});
  }
  void tolerance(const std::string& name, double value) { json_["tolerances"][name] = value; }
  void seed(std::uint64_t s) { json_["seed"] = s; }
  Json& findings() { return json_["findings"]; }

  bool check(const std::string& name, bool passed, Json detail = Json::object()) {
    detail["name"] = name;
    detail["passed"] = passed;
    json_["checks"].push_back(std::move(detail));
    if (!passed && first_failure_.empty()) first_failure_ = name;
    return passed;
  }

  bool passed() const { return first_failure_.empty(); }
  const std::string& first_failure() const { return first_failure_; }

  Json finish() {
    json_["passed"] = passed();
    return std::move(json_);
  }

 private:
  Json json_;
  std::string first_failure_;
};

Json rational_vector(std::span<const double> v) {
  Json out = Json::array();
  for (double x : v) out.push_back(manifest::format_rational(x));
  return out;
}

Json rational_matrix(const RealMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<double> row(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] = m(r, c);
    rows.push_back(rational_vector(row));
  }
  return rows;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Every stated vector matches a distinct derived vector.
bool same_vector_set(const std::vector<std::vector<double>>& stated,
                     const std::vector<std::vector<double>>& derived, double tol) {
  if (stated.size() != derived.size()) return false;
  std::vector<bool> used(derived.size(), false);
  for (const auto& s : stated) {
    bool found = false;
    for (std::size_t k = 0; k < derived.size() && !found; ++k) {
      if (!used[k] && max_diff(s, derived[k]) <= tol) used[k] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

double min_eigenvalue(const CMatrix& m) {
  const CMatrix h = (m + m.adjoint()) * Complex(0.5);
  return hermitian_eig(h).values.back();
}

double hermitian_deviation(const CMatrix& m) { return (m - m.adjoint()).max_abs(); }

double unitary_deviation(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::identity(u.cols())).max_abs();
}

Json state_json(const CMatrix& m, std::size_t dim) { return manifest::state_manifest(m, {dim}); }

Json classical_side_json(const ClassicalSide& cs) {
  Json j;
  j["classical"] = static_cast<bool>(cs);
  j["witness"] = cs.witness;
  if (!cs) return j;
  j["basis"] = manifest::basis_manifest(*cs.basis);
  j["probabilities"] = cs.probabilities;
  j["reconstruction_error"] = cs.reconstruction_error;
  Json states = Json::array();
  for (const auto& s : cs.states) states.push_back(s ? state_json(*s, s->rows()) : Json());
  j["conditional_states"] = std::move(states);
  return j;
}

MeasurementMap measurement_from(const Document& doc, double tol, Report& report) {
  if (manifest::has_measurement_form(doc)) return manifest::load_measurement(doc);
  if (doc.kind != Kind::kChannel) {
    throw InvalidArgument(doc.origin + ": expected a channel or povm manifest, got " +
                          manifest::to_string(doc.kind));
  }
  const ChoiChannel ch = manifest::load_channel(doc);
  QCExtraction qc = qc_type_extract(ch, tol);
  if (!qc) {
    throw InvalidArgument(doc.origin + ": channel is not QC-type (commutator witness " +
                          std::to_string(qc.witness) + ")");
  }
  report.findings()["extraction_reconstruction_error"] = qc.reconstruction_error;
  return std::move(*qc.map);
}

// ---------------------------------------------------------------------------
// validate

struct Validation {
  Report& report;
  double tol;
  std::string message;

  bool check(const std::string& name, bool passed, Json detail, const std::string& why) {
    if (!passed && message.empty()) message = why;
    return report.check(name, passed, std::move(detail));
  }
};

bool check_density(Validation& v, const CMatrix& m, const std::vector<std::size_t>& dims,
                   const std::string& what) {
  bool ok = v.check("square", m.square(), {{"rows", m.rows()}, {"cols", m.cols()}}, what + " is not square");
  if (!ok) return false;
  if (!dims.empty()) {
    std::size_t prod = 1;
    for (std::size_t d : dims) prod *= d;
    ok = v.check("dims", prod == m.rows(), {{"dims", dims}, {"rows", m.rows()}},
                 what + " dims do not multiply to the matrix size");
  }
  const double herm = hermitian_deviation(m);
  ok = v.check("hermitian", herm <= v.tol, {{"deviation", herm}}, what + " is not Hermitian") && ok;
  const Complex tr = m.trace();
  ok = v.check("trace_one", std::abs(tr - Complex(1.0)) <= v.tol,
               {{"trace", {tr.real(), tr.imag()}}},
               what + " has trace " + manifest::format_rational(tr.real())) &&
       ok;
  const double lo = min_eigenvalue(m);
  ok = v.check("positive_semidefinite", lo >= -v.tol, {{"min_eigenvalue", lo}},
               what + " has a negative eigenvalue") &&
       ok;
  return ok;
}

void validate_povm(Validation& v, const std::vector<CMatrix>& povm, const std::optional<CMatrix>& pointer) {
  const std::size_t d = povm.front().rows();
  bool shapes = true;
  for (const auto& e : povm) shapes = shapes && e.rows() == d && e.cols() == d;
  if (!v.check("element_shapes", shapes, {{"dim", d}, {"outcomes", povm.size()}},
               "POVM elements are not all square of one dimension")) {
    return;
  }
  double herm = 0.0;
  double lo = INFINITY;
  CMatrix sum(d, d);
  for (const auto& e : povm) {
    herm = std::max(herm, hermitian_deviation(e));
    lo = std::min(lo, min_eigenvalue(e));
    sum += e;
  }
  v.check("elements_hermitian", herm <= v.tol, {{"deviation", herm}}, "a POVM element is not Hermitian");
  v.check("elements_positive", lo >= -v.tol, {{"min_eigenvalue", lo}}, "a POVM element is not positive");
  const double comp = (sum - CMatrix::identity(d)).max_abs();
  v.check("completeness", comp <= v.tol, {{"deviation", comp}}, "POVM elements do not sum to the identity");
  if (pointer) {
    const bool sq = pointer->square() && pointer->rows() == povm.size();
    if (v.check("pointer_shape", sq, {{"rows", pointer->rows()}, {"cols", pointer->cols()}},
                "pointer basis must be square with one vector per outcome")) {
      const double dev = unitary_deviation(*pointer);
      v.check("pointer_unitary", dev <= v.tol, {{"deviation", dev}}, "pointer basis is not orthonormal");
    }
  }
  v.report.findings()["outcomes"] = povm.size();
  v.report.findings()["d_in"] = d;
}

void validate_stochastic(Validation& v, const RealMatrix& p) {
  if (!v.check("square", p.square(), {{"rows", p.rows()}, {"cols", p.cols()}}, "matrix is not square")) return;
  double lo = INFINITY;
  for (double x : p.entries()) lo = std::min(lo, x);
  v.check("nonnegative", lo >= -v.tol, {{"min_entry", lo}}, "matrix has a negative entry");
  const auto sums = p.column_sums();
  Json bad = Json::array();
  std::string why;
  for (std::size_t j = 0; j < sums.size(); ++j) {
    if (std::abs(sums[j] - 1.0) > v.tol) {
      bad.push_back({{"column", j + 1}, {"sum", manifest::format_rational(sums[j])}});
      if (why.empty()) {
        why = "column " + std::to_string(j + 1) + " sums to " + manifest::format_rational(sums[j]);
      }
    }
  }
  v.check("column_sums", bad.empty(), {{"column_sums", rational_vector(sums)}, {"offending", bad}}, why);
  if (!v.report.passed()) return;
  const StochasticMatrix s(p, v.tol);
  Json& f = v.report.findings();
  f["doubly_stochastic"] = s.doubly_stochastic(v.tol);
  f["irreducible"] = markov::is_irreducible(s);
  f["primitive"] = markov::is_primitive(s);
}

Outcome cmd_validate(const Json& request, const Json& options) {
  Report report("validate", options);
  const double tol = opt_double(options, "tol", kDefaultTol);
  report.tolerance("tol", tol);
  const Document doc = fetch_primary(request);
  report.input("manifest", doc);
  report.findings()["kind"] = manifest::to_string(doc.kind);
  Validation v{report, tol, {}};

  switch (doc.kind) {
    case Kind::kState:
      check_density(v, manifest::raw_matrix(doc), manifest::raw_dims(doc), "state");
      break;
    case Kind::kChannel:
      if (manifest::has_measurement_form(doc)) {
        validate_povm(v, manifest::raw_povm(doc), manifest::raw_pointer_basis(doc));
        break;
      } else {
        const auto dims = manifest::raw_dims(doc);
        if (!v.check("channel_dims", dims.size() == 2, {{"dims", dims}}, "channel dims must be [d_in, d_out]")) break;
        const CMatrix w = manifest::raw_choi(doc);
        if (!check_density(v, w, dims, "Choi matrix")) break;
        const std::size_t keep[] = {0};
        const CMatrix tr_out = partial_trace(w, dims, keep);
        const double dev =
            (tr_out - CMatrix::identity(dims[0]) * Complex(1.0 / static_cast<double>(dims[0]))).max_abs();
        v.check("trace_preserving", dev <= tol, {{"deviation", dev}}, "channel is not trace preserving");
        if (report.passed()) {
          const ChoiChannel ch(w, dims[0], dims[1], tol);
          report.findings()["kraus_rank"] = kraus_from_choi(ch).operators().size();
        }
      }
      break;
    case Kind::kPovm:
      validate_povm(v, manifest::raw_povm(doc), manifest::raw_pointer_basis(doc));
      break;
    case Kind::kStochastic:
      validate_stochastic(v, manifest::raw_stochastic(doc));
      break;
    case Kind::kBasis: {
      const CMatrix b = manifest::raw_matrix(doc);
      if (v.check("square", b.square(), {{"rows", b.rows()}, {"cols", b.cols()}}, "basis is not square")) {
        const double dev = unitary_deviation(b);
        v.check("unitary", dev <= tol, {{"deviation", dev}}, "basis is not orthonormal");
      }
      break;
    }
    case Kind::kDistribution: {
      const RealMatrix pi = manifest::decode_real(doc.json.at("data"));
      double lo = INFINITY;
      double total = 0.0;
      for (double x : pi.entries()) {
        lo = std::min(lo, x);
        total += x;
      }
      v.check("nonnegative", lo >= -tol, {{"min_entry", lo}}, "distribution has a negative entry");
      v.check("sums_to_one", std::abs(total - 1.0) <= tol, {{"sum", total}}, "distribution does not sum to one");
      break;
    }
  }

  report.findings()["valid"] = report.passed();
  Outcome out;
  out.exit_code = report.passed() ? kExitPass : kExitInvalidInput;
  if (!report.passed()) out.diagnostic = doc.origin + ": INVALID: " + v.message;
  out.report = report.finish();
  return out;
}

// ---------------------------------------------------------------------------
// classify

Outcome cmd_classify(const Json& request, const Json& options) {
  Report report("classify", options);
  const double tol = opt_double(options, "tol", kDefaultTol);
  report.tolerance("tol", tol);
  const auto side = opt_string(options, "side");
  if (side && *side != "A" && *side != "B") throw InvalidArgument("side must be A or B");
  const Document doc = fetch_primary(request);
  report.input("manifest", doc);
  Json& f = report.findings();

  if (doc.kind == Kind::kState) {
    const QuantumState rho = manifest::load_state(doc);
    f["dims"] = rho.dims();
    if (rho.dims().size() == 3) {
      const MultipartiteReport m = multipartite_qc_check(rho, tol);
      f["joint"] = classical_side_json(m.joint);
      f["reduction_b"] = classical_side_json(m.reduction_b);
      f["reduction_bp"] = classical_side_json(m.reduction_bp);
      f["reduction_b_product"] = m.reduction_b_product;
      f["reduction_bp_product"] = m.reduction_bp_product;
      f["joint_schmidt_ranks"] = m.joint_schmidt_ranks;
      f["joint_basis_product"] = m.joint_basis_product;
      f["nonproduct_joint_basis"] = m.nonproduct_joint_basis;
      report.check("joint_classical", static_cast<bool>(m.joint), {{"witness", m.joint.witness}});
    } else {
      const StateClassification c = classify_state(rho, tol);
      f["label"] = to_string(c.label);
      f["side_a"] = classical_side_json(c.side_a);
      f["side_b"] = classical_side_json(c.side_b);
      const double bound = tol * std::max(1.0, rho.matrix().frobenius_norm());
      for (const auto* s : {&c.side_a, &c.side_b}) {
        if (*s) {
          report.check(s == &c.side_a ? "reconstruction_A" : "reconstruction_B",
                       s->reconstruction_error <= bound, {{"error", s->reconstruction_error}});
        }
      }
      if (side) {
        const ClassicalSide& s = *side == "A" ? c.side_a : c.side_b;
        report.check("classical_on_" + *side, static_cast<bool>(s), {{"witness", s.witness}});
      }
    }
  } else if (doc.kind == Kind::kChannel || doc.kind == Kind::kPovm) {
    const ChoiChannel ch = doc.kind == Kind::kPovm ? choi_of(manifest::load_measurement(doc))
                                                   : manifest::load_channel(doc);
    f["dims"] = {ch.d_in(), ch.d_out()};
    const double bound = tol * std::max(1.0, ch.choi().matrix().frobenius_norm());
    QCExtraction qc = qc_type_extract(ch, tol);
    f["qc_witness"] = qc.witness;
    if (!qc) {
      f["type"] = "neither";
    } else {
      const CCExtraction cc = cc_type_extract(ch, tol);
      f["cc_witness"] = cc.witness;
      f["type"] = cc ? "CC-type" : "QC-type";
      f["measurement"] = manifest::measurement_channel_manifest(*qc.map);
      f["reconstruction_error"] = qc.reconstruction_error;
      report.check("reconstruction", qc.reconstruction_error <= bound, {{"error", qc.reconstruction_error}});
      if (cc) {
        f["joint"] = manifest::encode(cc.data->joint);
        f["eigenbasis"] = manifest::basis_manifest(cc.data->eigenbasis);
        if (cc.data->transition) {
          f["transition"] = manifest::stochastic_manifest(cc.data->transition->matrix());
          f["transition_rational"] = rational_matrix(cc.data->transition->matrix());
        } else {
          f["conditional"] = manifest::encode(cc.data->conditional);
        }
      }
    }
  } else {
    throw InvalidArgument(doc.origin + ": classify takes a state, channel or povm manifest");
  }

  Outcome out;
  out.exit_code = report.passed() ? kExitPass : kExitCheckFailed;
  if (!report.passed()) out.diagnostic = "check failed: " + report.first_failure();
  out.report = report.finish();
  return out;
}

// ---------------------------------------------------------------------------
// markov

Json claim_row(const std::string& name, Json stated, Json derived, bool consistent) {
  return {{"claim", name}, {"stated", std::move(stated)}, {"derived", std::move(derived)},
          {"consistent", consistent}};
}

Json evaluate_claims(const Json& claims, const StochasticMatrix& p, const markov::StationaryAnalysis& a) {
  Json rows = Json::array();
  if (!claims.is_object()) return rows;
  const std::map<std::string, std::function<bool()>> flags = {
      {"stochastic", [] { return true; }},
      {"irreducible", [&] { return markov::is_irreducible(p); }},
      {"reducible", [&] { return !markov::is_irreducible(p); }},
      {"primitive", [&] { return markov::is_primitive(p); }},
      {"doubly_stochastic", [&] { return p.doubly_stochastic(); }},
  };
  for (const auto& [key, value] : claims.items()) {
    if (auto it = flags.find(key); it != flags.end()) {
      if (!value.is_boolean()) throw ParseError("claim " + key + " must be a boolean");
      const bool derived = it->second();
      rows.push_back(claim_row(key, value, derived, derived == value.get<bool>()));
    } else if (key == "perron_vector") {
      const auto stated = manifest::decode_vector(value);
      const bool unique = a.degeneracy() == 1;
      const Json derived = unique ? rational_vector(a.perron_vectors.front()) : Json();
      rows.push_back(claim_row(key, rational_vector(stated), derived,
                               unique && max_diff(stated, a.perron_vectors.front()) <= kExactTol));
    } else if (key == "stationary_vectors") {
      std::vector<std::vector<double>> stated;
      Json stated_json = Json::array();
      for (const Json& v : value) {
        stated.push_back(manifest::decode_vector(v));
        stated_json.push_back(rational_vector(stated.back()));
      }
      Json derived = Json::array();
      for (const auto& v : a.perron_vectors) derived.push_back(rational_vector(v));
      rows.push_back(claim_row(key, stated_json, derived, same_vector_set(stated, a.perron_vectors, kExactTol)));
    } else {
      throw ParseError("unknown claim \"" + key + "\"");
    }
  }
  return rows;
}

Outcome cmd_markov(const Json& request, const Json& options) {
  Report report("markov", options);
  const double tol = opt_double(options, "tol", kDefaultTol);
  report.tolerance("tol", tol);
  report.tolerance("support_threshold", markov::kSupportThreshold);
  const Document doc = fetch_primary(request);
  report.input("manifest", doc);
  Json& f = report.findings();

  std::optional<StochasticMatrix> p;
  if (doc.kind == Kind::kStochastic) {
    p = manifest::load_stochastic(doc);
  } else {
    const MeasurementMap mm = measurement_from(doc, tol, report);
    CMatrix basis = mm.pointer_basis();
    if (auto b = fetch_option(options, "basis")) {
      report.input("basis", *b);
      basis = manifest::load_basis(*b);
    }
    p = markov::transition_matrix(mm.povm(), basis);
  }

  const markov::StationaryAnalysis a = markov::stationary_analysis(*p);
  f["transition"] = manifest::stochastic_manifest(p->matrix());
  f["transition_rational"] = rational_matrix(p->matrix());
  f["irreducible"] = markov::is_irreducible(*p);
  f["primitive"] = markov::is_primitive(*p);
  f["doubly_stochastic"] = p->doubly_stochastic();
  Json blocks = Json::array();
  for (const auto& b : a.blocks) {
    blocks.push_back({{"sites", b.sites}, {"recurrent", b.recurrent}, {"primitive", b.primitive}});
  }
  f["blocks"] = std::move(blocks);
  f["degeneracy"] = a.degeneracy();
  Json vectors = Json::array();
  Json rationals = Json::array();
  double worst_discrepancy = 0.0;
  double worst_residual = 0.0;
  for (std::size_t k = 0; k < a.recurrent.size(); ++k) {
    const auto& v = a.perron_vectors[k];
    vectors.push_back(v);
    rationals.push_back(rational_vector(v));
    const markov::PerronVector pv = markov::perron_vector(*p, a.blocks[a.recurrent[k]]);
    worst_discrepancy = std::max(worst_discrepancy, pv.discrepancy);
    const auto pv_image = p->matrix() * std::span<const double>(v);
    worst_residual = std::max(worst_residual, max_diff(pv_image, v));
  }
  f["perron_vectors"] = std::move(vectors);
  f["perron_vectors_rational"] = std::move(rationals);
  bool full_simplex = a.degeneracy() == p->dim();
  if (full_simplex) {
    for (const auto& v : a.perron_vectors) {
      full_simplex = full_simplex && std::count_if(v.begin(), v.end(), [](double x) { return x > kExactTol; }) == 1;
    }
  }
  f["simplex"] = {{"vertices", a.degeneracy()}, {"full_probability_simplex", full_simplex}};
  report.check("stationarity", worst_residual <= tol, {{"max_residual", worst_residual}});
  report.check("perron_cross_check", worst_discrepancy <= 1e-9, {{"max_discrepancy", worst_discrepancy}});

  if (options.contains("power")) {
    const std::size_t r = opt_size(options, "power", 1);
    f["power"] = {{"r", r}, {"matrix", manifest::stochastic_manifest(markov::matrix_power(p->matrix(), r))}};
  }
  if (doc.json.contains("claims")) {
    Json rows = evaluate_claims(doc.json.at("claims"), *p, a);
    std::size_t mismatches = 0;
    for (const Json& row : rows) mismatches += row.at("consistent").get<bool>() ? 0 : 1;
    f["claims"] = std::move(rows);
    f["claim_mismatches"] = mismatches;
  }
  if (opt_bool(options, "limit")) {
    const RealMatrix limit = markov::ergodic_limit(*p);
    f["limit"] = manifest::stochastic_manifest(limit);
    f["limit_rational"] = rational_matrix(limit);
    f["convergence_power"] = markov::convergence_power(*p, 1e-10);
    report.tolerance("convergence", 1e-10);
  }

  Outcome out;
  out.exit_code = report.passed() ? kExitPass : kExitCheckFailed;
  if (!report.passed()) out.diagnostic = "check failed: " + report.first_failure();
  out.report = report.finish();
  return out;
}

// ---------------------------------------------------------------------------
// broadcast

BroadcastMode parse_mode(const Json& options) {
  const std::string mode = opt_string(options, "mode").value_or("full");
  if (mode == "full") return BroadcastMode::kFull;
  if (mode == "spectrum") return BroadcastMode::kSpectrum;
  throw InvalidArgument("mode must be spectrum or full");
}

Json broadcast_json(const BroadcastReport& r) {
  Json j;
  j["state"] = state_json(r.rho_star, r.rho_star.rows());
  j["fixed_point_residual"] = r.fixed_point_residual;
  j["spectral_distances"] = r.spectral_distances;
  j["reduction_distances"] = r.reduction_distances;
  if (r.sufficient_condition) j["sufficient_condition"] = *r.sufficient_condition;
  j["dense_checked"] = r.dense_checked;
  j["dense_discrepancy"] = r.dense_discrepancy;
  j["passed"] = r.passed;
  return j;
}

Outcome cmd_broadcast(const Json& request, const Json& options) {
  Report report("broadcast", options);
  const double tol = opt_double(options, "tol", kDefaultTol);
  const std::size_t copies = opt_size(options, "copies", 2);
  const std::size_t cap = opt_size(options, "cap", kDefaultBroadcastCap);
  const bool materialize = opt_bool(options, "materialize");
  const BroadcastMode mode = parse_mode(options);
  const std::uint64_t seed = opt_seed(options);
  report.tolerance("tol", tol);
  report.seed(seed);
  const Document doc = fetch_primary(request);
  report.input("channel", doc);
  Json& f = report.findings();
  f["mode"] = to_string(mode);
  f["copies"] = copies;
  f["cap"] = cap;

  const MeasurementMap mm_a = measurement_from(doc, tol, report);
  CMatrix basis_a = mm_a.pointer_basis();
  if (auto b = fetch_option(options, "basis")) {
    report.input("basis", *b);
    basis_a = manifest::load_basis(*b);
  }
  const BroadcastableStates bs_a = broadcastable_states(mm_a, basis_a);
  f["degeneracy"] = bs_a.degeneracy();
  f["transition"] = manifest::stochastic_manifest(bs_a.transition.matrix());

  const auto second = fetch_option(options, "second_channel");
  const auto pi_doc = fetch_option(options, "pi");
  if (second && !pi_doc) throw InvalidArgument("a second channel needs a pi manifest");

  if (!pi_doc) {
    if (materialize) broadcast_channel(mm_a, copies, cap);
    BroadcastOptions bo{tol, cap, basis_a};
    auto verify = [&](const CMatrix& rho) {
      return mode == BroadcastMode::kFull ? verify_full_broadcast(mm_a, copies, rho, bo)
                                          : verify_spectrum_broadcast(mm_a, copies, rho, bo);
    };
    Json vertices = Json::array();
    for (std::size_t k = 0; k < bs_a.degeneracy(); ++k) {
      const BroadcastReport r = verify(bs_a.states[k]);
      vertices.push_back(broadcast_json(r));
      report.check("vertex_" + std::to_string(k), r.passed,
                   {{"max_reduction_distance", r.reduction_distances.empty()
                                                   ? 0.0
                                                   : *std::max_element(r.reduction_distances.begin(),
                                                                       r.reduction_distances.end())}});
    }
    f["vertices"] = std::move(vertices);
    random::Rng rng(seed);
    Json samples = Json::array();
    for (int s = 0; s < 3; ++s) {
      const auto w = random::dirichlet(bs_a.degeneracy(), 1.0, rng);
      const BroadcastReport r = verify(bs_a.state_at(w));
      Json j = broadcast_json(r);
      j["weights"] = w;
      samples.push_back(std::move(j));
      report.check("convex_sample_" + std::to_string(s), r.passed);
    }
    f["convex_samples"] = std::move(samples);
  } else {
    report.input("pi", *pi_doc);
    std::optional<MeasurementMap> mm_b_store;
    if (second) {
      report.input("second_channel", *second);
      mm_b_store = measurement_from(*second, tol, report);
    }
    const MeasurementMap& mm_b = mm_b_store ? *mm_b_store : mm_a;
    const BroadcastableStates bs_b = broadcastable_states(mm_b, mm_b.pointer_basis());
    const RealMatrix pi = manifest::load_distribution(*pi_doc);
    if (pi.rows() != bs_a.degeneracy() || pi.cols() != bs_b.degeneracy()) {
      throw DimensionMismatch("pi must be " + std::to_string(bs_a.degeneracy()) + " x " +
                              std::to_string(bs_b.degeneracy()));
    }
    const QuantumState rho_ab = correlation_family(bs_a.states, bs_b.states, pi);
    Json states_a = Json::array();
    Json states_b = Json::array();
    for (const auto& s : bs_a.states) states_a.push_back(state_json(s, s.rows()));
    for (const auto& s : bs_b.states) states_b.push_back(state_json(s, s.rows()));
    f["degeneracy_b"] = bs_b.degeneracy();
    f["states_a"] = std::move(states_a);
    f["states_b"] = std::move(states_b);
    f["correlated_state"] = manifest::state_manifest(rho_ab.matrix(), rho_ab.dims());
    f["mutual_information_bits"] = mutual_information(rho_ab);
    const LocalBroadcastReport r =
        verify_local_broadcast(mm_a, mm_b, copies, rho_ab, mode, BroadcastOptions{tol, cap, {}}, materialize);
    f["pair_distances"] = r.distances;
    f["max_distance"] = r.max_distance;
    f["dense_checked"] = r.dense_checked;
    f["dense_discrepancy"] = r.dense_discrepancy;
    report.check("local_broadcast", r.passed, {{"max_distance", r.max_distance}});
  }

  Outcome out;
  out.exit_code = report.passed() ? kExitPass : kExitCheckFailed;
  if (!report.passed()) out.diagnostic = "check failed: " + report.first_failure();
  out.report = report.finish();
  return out;
}

// ---------------------------------------------------------------------------
// Fixture corpus

Json with_meta(Json m, const std::string& provenance, const std::string& note = {}) {
  m["provenance"] = provenance;
  if (!note.empty()) m["note"] = note;
  return m;
}

Json rational_stochastic(const RealMatrix& p, const std::string& label) {
  Json m = manifest::stochastic_manifest(p, label);
  m["data"] = rational_matrix(p);
  return m;
}

Json stated_vectors(const std::vector<std::vector<double>>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(rational_vector(v));
  return out;
}

RealMatrix pi_diag_half() { return {{0.5, 0.0}, {0.0, 0.5}}; }

}  // namespace

std::vector<std::pair<std::string, Json>> fixture_corpus() {
  using namespace fixtures;
  std::vector<std::pair<std::string, Json>> c;
  c.emplace_back("p_plus_2.json", with_meta(manifest::state_manifest(maximally_entangled(2).matrix(), {2, 2},
                                                                      "maximally entangled two-qubit state"),
                                            "builtin"));

  Json p1 = with_meta(rational_stochastic(p1_printed(), "P1"), "as-printed");
  p1["claims"] = {{"irreducible", true}, {"perron_vector", rational_vector(p1_printed_perron())}};
  c.emplace_back("appendix_p1.json", std::move(p1));

  Json p2 = with_meta(rational_stochastic(p2_printed(), "P2"), "as-printed", "third column sums to 9/8");
  p2["claims"] = {{"stochastic", true}, {"irreducible", true}};
  c.emplace_back("appendix_p2_printed.json", std::move(p2));

  Json p2r = with_meta(rational_stochastic(p2_repaired().matrix(), "P2 repaired"), "repaired",
                       "second row rebalanced so that every column sums to one");
  p2r["claims"] = {{"stochastic", true}, {"irreducible", true}, {"doubly_stochastic", true}};
  c.emplace_back("appendix_p2_repaired.json", std::move(p2r));

  c.emplace_back("appendix_p1_p2_sum.json",
                 with_meta(rational_stochastic(p1_p2_sum().matrix(), "P1 (+) P2 repaired"), "repaired"));

  Json pa = with_meta(rational_stochastic(pa_printed(), "PA"), "as-printed");
  pa["claims"] = {{"reducible", true}, {"doubly_stochastic", true}};
  c.emplace_back("appendix_pa_printed.json", std::move(pa));
  Json pb = with_meta(rational_stochastic(pb_printed(), "PB"), "as-printed");
  pb["claims"] = {{"reducible", true}, {"doubly_stochastic", true}};
  c.emplace_back("appendix_pb_printed.json", std::move(pb));

  Json par = with_meta(rational_stochastic(pa_repaired().matrix(), "PA repaired"), "repaired",
                       "block diagonal with classes {1} and {2,3}");
  par["claims"] = {{"reducible", true}, {"stationary_vectors", stated_vectors(pa_stated_vectors())}};
  c.emplace_back("appendix_pa_repaired.json", std::move(par));
  Json pbr = with_meta(rational_stochastic(pb_repaired().matrix(), "PB repaired"), "repaired",
                       "block diagonal with classes {2} and {1,3}");
  pbr["claims"] = {{"reducible", true}, {"stationary_vectors", stated_vectors(pb_stated_vectors())}};
  c.emplace_back("appendix_pb_repaired.json", std::move(pbr));

  c.emplace_back("channel_p1_p2_sum.json",
                 with_meta(manifest::measurement_channel_manifest(computational_map(p1_p2_sum()),
                                                                  "measurement map of P1 (+) P2 repaired"),
                           "repaired"));
  c.emplace_back("channel_p2_repaired.json",
                 with_meta(manifest::measurement_channel_manifest(computational_map(p2_repaired()),
                                                                  "measurement map of P2 repaired"),
                           "repaired"));
  c.emplace_back("channel_pa_repaired.json",
                 with_meta(manifest::measurement_channel_manifest(computational_map(pa_repaired()),
                                                                  "measurement map of PA repaired"),
                           "repaired"));
  c.emplace_back("channel_pb_repaired.json",
                 with_meta(manifest::measurement_channel_manifest(computational_map(pb_repaired()),
                                                                  "measurement map of PB repaired"),
                           "repaired"));
  c.emplace_back("pi_diag_half.json",
                 with_meta(manifest::distribution_manifest(pi_diag_half(), "diag(1/2, 1/2)"), "builtin"));

  c.emplace_back("identity_channel_2.json",
                 with_meta(manifest::choi_manifest(identity_channel(2), "qubit identity channel"), "builtin"));
  c.emplace_back("von_neumann_2.json",
                 with_meta(manifest::choi_manifest(choi_of(von_neumann_map(2)),
                                                   "computational von Neumann measurement"),
                           "builtin"));
  c.emplace_back("trine.json",
                 with_meta(manifest::choi_manifest(choi_of(trine_map()), "trine measurement map"), "builtin"));
  c.emplace_back("depolarizing_2.json",
                 with_meta(manifest::choi_manifest(depolarizing_channel(2), "completely depolarizing qubit channel"),
                           "builtin"));
  c.emplace_back("cq_counterexample_state.json",
                 with_meta(manifest::state_manifest(cq_counterexample_state().matrix(), {2, 2},
                                                    "(2/3) psi+ + (1/3) |+0><+0|"),
                           "builtin"));
  c.emplace_back("cc_nonclosure_input.json",
                 with_meta(manifest::state_manifest(cc_nonclosure_input().matrix(), {2, 3},
                                                    "(|0>|0> + |+>|1> + |1>|2>) / sqrt(3)"),
                           "builtin"));
  c.emplace_back("bell_multipartite.json",
                 with_meta(manifest::state_manifest(bell_multipartite_state().matrix(), {2, 2, 2},
                                                    "qubit states tagged by the Bell basis"),
                           "builtin"));
  c.emplace_back("cyclic_3.json", with_meta(rational_stochastic(cyclic_shift(3).matrix(), "cyclic shift"), "builtin"));
  c.emplace_back("identity_3.json", with_meta(rational_stochastic(RealMatrix::identity(3), "identity"), "builtin"));
  return c;
}

namespace {

// ---------------------------------------------------------------------------
// paper-check

struct PaperRow {
  std::string id;
  std::string claim;
  std::string expected;
  std::string status;
  Json evidence;
};

std::string status_of(bool holds) { return holds ? "CONFIRMED" : "CONTRADICTED"; }

StochasticMatrix column_normalized(const RealMatrix& m) {
  RealMatrix out = m;
  const auto sums = m.column_sums();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j) / sums[j];
  }
  return StochasticMatrix(std::move(out));
}

Json vectors_json(const std::vector<std::vector<double>>& vs) { return stated_vectors(vs); }

PaperRow local_broadcast_row(std::string id, std::string claim, const StochasticMatrix& pa,
                             const StochasticMatrix& pb, std::size_t cap) {
  const MeasurementMap ma = fixtures::computational_map(pa);
  const MeasurementMap mb = fixtures::computational_map(pb);
  const BroadcastableStates sa = broadcastable_states(ma, ma.pointer_basis());
  const BroadcastableStates sb = broadcastable_states(mb, mb.pointer_basis());
  const RealMatrix pi = pi_diag_half();
  Json ev;
  ev["vectors_a"] = vectors_json(sa.analysis.perron_vectors);
  ev["vectors_b"] = vectors_json(sb.analysis.perron_vectors);
  if (sa.degeneracy() != 2 || sb.degeneracy() != 2) {
    ev["degeneracy"] = {sa.degeneracy(), sb.degeneracy()};
    return {std::move(id), std::move(claim), "CONFIRMED", "CONTRADICTED", ev};
  }
  const QuantumState rho = correlation_family(sa.states, sb.states, pi);
  const LocalBroadcastReport r =
      verify_local_broadcast(ma, mb, 2, rho, BroadcastMode::kFull, BroadcastOptions{1e-9, cap, {}});
  ev["copies"] = 2;
  ev["pi"] = rational_matrix(pi);
  ev["max_distance"] = r.max_distance;
  ev["dense_checked"] = r.dense_checked;
  ev["dense_discrepancy"] = r.dense_discrepancy;
  ev["mutual_information_bits"] = mutual_information(rho);
  return {std::move(id), std::move(claim), "CONFIRMED", status_of(r.passed), ev};
}

std::vector<PaperRow> paper_rows() {
  using namespace fixtures;
  std::vector<PaperRow> rows;

  const StochasticMatrix p1(p1_printed());
  const auto a1 = markov::stationary_analysis(p1);
  rows.push_back({"p1_irreducible", "P1 is irreducible", "CONFIRMED", status_of(markov::is_irreducible(p1)),
                  {{"strongly_connected", markov::is_strongly_connected(p1)},
                   {"primitive", markov::is_primitive(p1)}}});

  {
    const auto printed = p1_printed_perron();
    const auto& derived = a1.perron_vectors.front();
    auto s1 = printed;
    auto s2 = derived;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    rows.push_back({"p1_perron_vector", "unique Perron vector of P1 is (1/3, 1/6, 1/2)", "CONTRADICTED",
                    status_of(a1.degeneracy() == 1 && max_diff(printed, derived) <= kExactTol),
                    {{"printed", rational_vector(printed)},
                     {"derived", rational_vector(derived)},
                     {"entries_permuted", max_diff(s1, s2) <= kExactTol}}});
  }

  {
    const RealMatrix p2 = p2_printed();
    const auto sums = p2.column_sums();
    Json bad = Json::array();
    for (std::size_t j = 0; j < sums.size(); ++j) {
      if (std::abs(sums[j] - 1.0) > kExactTol) bad.push_back({{"column", j + 1}, {"sum", manifest::format_rational(sums[j])}});
    }
    rows.push_back({"p2_stochastic", "P2 is column stochastic", "CONTRADICTED", status_of(bad.empty()),
                    {{"column_sums", rational_vector(sums)}, {"offending", bad}}});
    const StochasticMatrix support = column_normalized(p2);
    rows.push_back({"p2_irreducible", "P2 is irreducible", "CONFIRMED", status_of(markov::is_irreducible(support)),
                    {{"evaluated_on", "support of the printed matrix"}}});
  }

  {
    const StochasticMatrix p2r = p2_repaired();
    const RealMatrix diff = p2r.matrix() - p2_printed();
    Json changed = Json::array();
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        if (std::abs(diff(i, j)) > kExactTol) {
          changed.push_back({{"row", i + 1}, {"column", j + 1},
                             {"printed", manifest::format_rational(p2_printed()(i, j))},
                             {"repaired", manifest::format_rational(p2r(i, j))}});
        }
      }
    }
    const bool ok = markov::is_irreducible(p2r) && p2r.doubly_stochastic();
    rows.push_back({"p2_repaired", "nearest stochastic variant of P2", "REPAIRED", ok ? "REPAIRED" : "CONTRADICTED",
                    {{"changed_entries", changed},
                     {"doubly_stochastic", p2r.doubly_stochastic()},
                     {"irreducible", markov::is_irreducible(p2r)},
                     {"perron_vector", rational_vector(markov::stationary_analysis(p2r).perron_vectors.front())}}});
  }

  const StochasticMatrix pa(pa_printed());
  const StochasticMatrix pb(pb_printed());
  for (const auto& [id, m] : {std::pair<std::string, const StochasticMatrix*>{"pa_reducible", &pa},
                              std::pair<std::string, const StochasticMatrix*>{"pb_reducible", &pb}}) {
    const bool strongly = markov::is_strongly_connected(*m);
    rows.push_back({id, (id == "pa_reducible" ? "PA" : std::string("PB")) + " is reducible", "CONTRADICTED",
                    status_of(!markov::is_irreducible(*m)),
                    {{"strongly_connected", strongly},
                     {"primitive", markov::is_primitive(*m)},
                     {"perron_vector", rational_vector(markov::stationary_analysis(*m).perron_vectors.front())}}});
  }
  rows.push_back({"pa_pb_bistochastic", "PA and PB are doubly stochastic", "CONFIRMED",
                  status_of(pa.doubly_stochastic() && pb.doubly_stochastic()), Json::object()});

  const auto vectors_row = [&](std::string id, std::string claim, const StochasticMatrix& printed,
                               const StochasticMatrix& repaired, const std::vector<std::vector<double>>& stated) {
    const auto ap = markov::stationary_analysis(printed);
    const auto ar = markov::stationary_analysis(repaired);
    const bool on_printed = same_vector_set(stated, ap.perron_vectors, kExactTol);
    const bool on_repaired = same_vector_set(stated, ar.perron_vectors, kExactTol);
    const std::string status = on_printed ? "CONFIRMED" : on_repaired ? "REPAIRED" : "CONTRADICTED";
    rows.push_back({std::move(id), std::move(claim), "REPAIRED", status,
                    {{"stated", vectors_json(stated)},
                     {"printed_matrix_vectors", vectors_json(ap.perron_vectors)},
                     {"repaired_matrix_vectors", vectors_json(ar.perron_vectors)},
                     {"repaired_matrix", rational_matrix(repaired.matrix())}}});
  };
  vectors_row("pa_stationary_vectors", "PA has stationary vectors diag[0,1/2,1/2] and [1,0,0]", pa, pa_repaired(),
              pa_stated_vectors());
  vectors_row("pb_stationary_vectors", "PB has stationary vectors diag[1/2,0,1/2] and [0,1,0]", pb, pb_repaired(),
              pb_stated_vectors());

  rows.push_back(local_broadcast_row("example1_local_broadcast",
                                     "P1 (+) P2 repaired family is locally broadcast at N = 2", p1_p2_sum(),
                                     p1_p2_sum(), 2048));
  rows.push_back(local_broadcast_row("example2_local_broadcast",
                                     "PA repaired and PB repaired family is locally broadcast at N = 2",
                                     pa_repaired(), pb_repaired(), kDefaultBroadcastCap));

  {
    const MeasurementMap vn = von_neumann_map(2);
    const QuantumState rho = cq_counterexample_state();
    const ResidualDecomposition res = residual_decomposition(vn, rho);
    const double comm = commutator_norm(*res.states[0], *res.states[1]);
    const auto printed = cq_printed_residuals();
    const double residual_match =
        std::max(frobenius_distance(*res.states[0], printed[0]), frobenius_distance(*res.states[1], printed[1]));
    const QuantumState out = apply_one_sided(choi_of(vn), rho, Side::kB);
    const StateClass label = classify_state(out).label;
    const bool ok = std::abs(comm - std::sqrt(2.0) / 4.0) <= 1e-10 && residual_match <= 1e-10 &&
                    label == StateClass::kQCOnly;
    rows.push_back({"cq_counterexample_commutator", "residual states do not commute, norm sqrt(2)/4",
                    "CONFIRMED", status_of(ok),
                    {{"commutator_norm", comm},
                     {"expected", std::sqrt(2.0) / 4.0},
                     {"residual_distance_to_printed", residual_match},
                     {"output_label", to_string(label)},
                     {"weights", rational_vector(res.probabilities)}}});

    const ResidualDecomposition unbiased = residual_decomposition(vn, cq_unbiased_state());
    const auto pw = cq_printed_weights();
    rows.push_back({"cq_unbiased_weights", "unbiased mixture gives residual weights (1/2, 1/2)", "CONTRADICTED",
                    status_of(max_diff(unbiased.probabilities, pw) <= kExactTol),
                    {{"printed", rational_vector(pw)},
                     {"unbiased_mixture", rational_vector(unbiased.probabilities)},
                     {"printed_residual_mixture", rational_vector(res.probabilities)}}});
  }
  return rows;
}

Outcome cmd_paper_check(const Json& options) {
  Report report("paper-check", options);
  report.tolerance("exact", kExactTol);
  report.tolerance("broadcast", 1e-9);
  report.tolerance("commutator", 1e-10);
  for (const auto& [name, m] : fixture_corpus()) {
    if (name.rfind("appendix_", 0) == 0 || name.rfind("channel_", 0) == 0 || name == "cq_counterexample_state.json" ||
        name == "pi_diag_half.json") {
      report.fixture_input(name, m);
    }
  }
  Json table = Json::array();
  for (PaperRow& row : paper_rows()) {
    const bool matches = row.status == row.expected;
    table.push_back({{"id", row.id}, {"claim", row.claim}, {"status", row.status},
                     {"expected", row.expected}, {"evidence", row.evidence}});
    report.check(row.id, matches, {{"status", row.status}, {"expected", row.expected}});
  }
  report.findings()["rows"] = std::move(table);
  Outcome out;
  out.exit_code = report.passed() ? kExitPass : kExitCheckFailed;
  if (!report.passed()) out.diagnostic = "unexpected status: " + report.first_failure();
  out.report = report.finish();
  return out;
}

// ---------------------------------------------------------------------------
// export-fixtures

Outcome cmd_export(const Json& options) {
  Report report("export-fixtures", options);
  const std::filesystem::path dir = opt_string(options, "dir").value_or("fixtures");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  Json files = Json::array();
  for (const auto& [name, m] : fixture_corpus()) {
    const std::string text = m.dump(2) + "\n";
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw IoError("cannot write " + path.string());
    files.push_back({{"path", path.string()}, {"sha256", manifest::sha256_hex(text)}});
  }
  report.findings()["files"] = std::move(files);
  return {report.finish(), kExitPass, {}};
}

std::string code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kInvariantViolation: return "invariant_violation";
    case ErrorCode::kNotPrimitive: return "not_primitive";
    case ErrorCode::kResourceCap: return "resource_cap";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "internal";
}

Outcome error_outcome(const std::string& command, const Json& options, const std::string& code,
                      const std::string& message, int exit_code, Json extra = Json::object()) {
  Json r;
  r["schema"] = manifest::kSchema;
  r["command"] = command;
  r["args"] = options;
  extra["code"] = code;
  extra["message"] = message;
  r["error"] = std::move(extra);
  r["passed"] = false;
  return {std::move(r), exit_code, code + ": " + message};
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPrimitive: return kExitCheckFailed;
    case ErrorCode::kResourceCap: return kExitResourceCap;
    default: return kExitInvalidInput;
  }
}

static Outcome dispatch(const Json& request) {
  std::string command = "unknown";
  Json options = Json::object();
  try {
    if (!request.is_object()) throw InvalidArgument("request must be a JSON object");
    if (!request.contains("command") || !request.at("command").is_string()) {
      throw InvalidArgument("request needs a command");
    }
    command = request.at("command").get<std::string>();
    if (request.contains("options")) {
      if (!request.at("options").is_object()) throw InvalidArgument("options must be an object");
      options = request.at("options");
    }
    if (command == "validate") return cmd_validate(request, options);
    if (command == "classify") return cmd_classify(request, options);
    if (command == "markov") return cmd_markov(request, options);
    if (command == "broadcast") return cmd_broadcast(request, options);
    if (command == "paper-check") return cmd_paper_check(options);
    if (command == "export-fixtures") return cmd_export(options);
    throw InvalidArgument("unknown command \"" + command + "\"");
  } catch (const markov::NotPrimitive& e) {
    const char* kind = e.kind() == markov::NonPrimitiveKind::kPeriodic ? "periodic" : "reducible";
    return error_outcome(command, options, "not_primitive", e.what(), exit_code_for(e.code()), {{"kind", kind}});
  } catch (const Error& e) {
    return error_outcome(command, options, code_name(e.code()), e.what(), exit_code_for(e.code()));
  } catch (const Json::exception& e) {
    return error_outcome(command, options, "parse", e.what(), kExitInvalidInput);
  } catch (const std::bad_alloc&) {
    return error_outcome(command, options, "resource_cap", "out of memory", kExitResourceCap);
  } catch (const std::exception& e) {
    return error_outcome(command, options, "internal", e.what(), kExitInvalidInput);
  }
}

Outcome run(const Json& request) {
  Outcome out = dispatch(request);
  if (!out.diagnostic.empty()) out.report["diagnostic"] = out.diagnostic;
  return out;
}

Outcome run_text(std::string_view request_json) {
  Json request;
  try {
    request = Json::parse(request_json);
  } catch (const Json::parse_error& e) {
    Outcome out = error_outcome("unknown", Json::object(), "parse", e.what(), kExitInvalidInput);
    out.report["diagnostic"] = out.diagnostic;
    return out;
  }
  return run(request);
}

}  // namespace qcorr::commands
