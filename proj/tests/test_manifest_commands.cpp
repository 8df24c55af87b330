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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qcorr/commands.hpp"
#include "qcorr/error.hpp"
#include "qcorr/fixtures.hpp"
#include "qcorr/manifest.hpp"

namespace qcorr {
namespace {

using commands::Outcome;
using manifest::Json;

Json corpus(const std::string& name) {
  for (auto& [n, m] : commands::fixture_corpus()) {
    if (n == name) return m;
  }
  ADD_FAILURE() << "missing fixture " << name;
  return Json();
}

Outcome run(const std::string& command, const Json& manifest, Json options = Json::object()) {
  Json req = {{"command", command}, {"options", options}};
  if (!manifest.is_null()) req["inline"] = manifest;
  return commands::run(req);
}

TEST(Manifest, DecodesEntryForms) {
  const CMatrix m = manifest::decode_complex(Json::parse(R"([["3/8", 1], [[0.5, -2], "-1/4"]])"));
  EXPECT_DOUBLE_EQ(m(0, 0).real(), 0.375);
  EXPECT_DOUBLE_EQ(m(0, 1).real(), 1.0);
  EXPECT_DOUBLE_EQ(m(1, 0).imag(), -2.0);
  EXPECT_DOUBLE_EQ(m(1, 1).real(), -0.25);
  EXPECT_THROW(manifest::decode_complex(Json::parse(R"([["3/x"]])")), ParseError);
  EXPECT_THROW(manifest::decode_complex(Json::parse(R"([[1, 2], [3]])")), ParseError);
  EXPECT_THROW(manifest::decode_complex(Json::parse(R"([[[1, 2, 3]]])")), ParseError);
  EXPECT_THROW(manifest::decode_real(Json::parse(R"([[[1, 2]]])")), ParseError);
}

TEST(Manifest, RoundTripIsLossless) {
  const CMatrix m = fixtures::bell_multipartite_state().matrix();
  const CMatrix back = manifest::decode_complex(Json::parse(manifest::encode(m).dump()));
  ASSERT_EQ(back.rows(), m.rows());
  for (std::size_t k = 0; k < m.entries().size(); ++k) EXPECT_EQ(back.entries()[k], m.entries()[k]);
}

TEST(Manifest, SchemaAndKind) {
  EXPECT_THROW(manifest::parse_document("{"), ParseError);
  EXPECT_THROW(manifest::parse_document(R"({"schema": "other/1", "kind": "state"})"), ParseError);
  EXPECT_THROW(manifest::parse_document(R"({"schema": "qcorr/1", "kind": "tensor"})"), ParseError);
  EXPECT_THROW(manifest::load_document("/nonexistent/x.json"), IoError);
  const auto doc = manifest::parse_document(corpus("p_plus_2.json").dump());
  EXPECT_EQ(doc.kind, manifest::Kind::kState);
  EXPECT_EQ(doc.sha256.size(), 64u);
}

TEST(Manifest, Conventions) {
  Json ch = manifest::choi_manifest(fixtures::identity_channel(2));
  ch["convention"]["choi_normalization"] = "trace-d";
  ch["data"] = manifest::encode(fixtures::identity_channel(2).choi().matrix() * Complex(2.0));
  const ChoiChannel loaded = manifest::load_channel(manifest::parse_document(ch.dump()));
  EXPECT_LT(frobenius_distance(loaded.choi().matrix(), fixtures::identity_channel(2).choi().matrix()), 1e-15);

  Json p = manifest::stochastic_manifest(fixtures::p1_printed().transpose());
  p["convention"]["stochastic_orientation"] = "row";
  const StochasticMatrix s = manifest::load_stochastic(manifest::parse_document(p.dump()));
  EXPECT_LT((s.matrix() - fixtures::p1_printed()).max_abs(), 1e-15);
  p["convention"]["stochastic_orientation"] = "diagonal";
  EXPECT_THROW(manifest::load_stochastic(manifest::parse_document(p.dump())), ParseError);
}

TEST(Manifest, Sha256AndRationals) {
  EXPECT_EQ(manifest::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(manifest::format_rational(9.0 / 8.0), "9/8");
  EXPECT_EQ(manifest::format_rational(1.0 / 3.0), "1/3");
  EXPECT_EQ(manifest::format_rational(0.0), "0");
  EXPECT_EQ(manifest::format_rational(-0.5), "-1/2");
  EXPECT_NE(manifest::format_rational(std::sqrt(2.0)).find('.'), std::string::npos);
}

TEST(Validate, Examples) {
  const Outcome pp = run("validate", corpus("p_plus_2.json"));
  EXPECT_EQ(pp.exit_code, 0);
  EXPECT_TRUE(pp.report["findings"]["valid"]);

  const Outcome p2 = run("validate", corpus("appendix_p2_printed.json"));
  EXPECT_EQ(p2.exit_code, commands::kExitInvalidInput);
  EXPECT_NE(p2.diagnostic.find("column 3 sums to 9/8"), std::string::npos);

  const Outcome p2r = run("validate", corpus("appendix_p2_repaired.json"));
  EXPECT_EQ(p2r.exit_code, 0);
  EXPECT_TRUE(p2r.report["findings"]["doubly_stochastic"]);

  Json bad = corpus("identity_channel_2.json");
  bad["data"][0][0] = {0.75, 0.0};
  EXPECT_EQ(run("validate", bad).exit_code, commands::kExitInvalidInput);
  EXPECT_EQ(run("validate", corpus("trine.json")).exit_code, 0);
}

TEST(Classify, Examples) {
  EXPECT_EQ(run("classify", corpus("identity_channel_2.json")).report["findings"]["type"], "neither");
  const Outcome trine = run("classify", corpus("trine.json"));
  EXPECT_EQ(trine.report["findings"]["type"], "QC-type");
  EXPECT_EQ(trine.report["findings"]["measurement"]["povm"].size(), 3u);
  const Outcome vn = run("classify", corpus("von_neumann_2.json"));
  EXPECT_EQ(vn.report["findings"]["type"], "CC-type");
  EXPECT_EQ(vn.report["findings"]["transition_rational"], Json::parse(R"([["1","0"],["0","1"]])"));
  EXPECT_EQ(run("classify", corpus("p_plus_2.json")).report["findings"]["label"], "neither");
  const Outcome side = run("classify", corpus("p_plus_2.json"), {{"side", "B"}});
  EXPECT_EQ(side.exit_code, commands::kExitCheckFailed);
  const Outcome bell = run("classify", corpus("bell_multipartite.json"));
  EXPECT_TRUE(bell.report["findings"]["nonproduct_joint_basis"]);
}

TEST(Classify, EchoedMeasurementReingests) {
  const Outcome trine = run("classify", corpus("trine.json"));
  const Json echoed = trine.report["findings"]["measurement"];
  const Outcome again = run("classify", echoed);
  EXPECT_EQ(again.report["findings"]["type"], "QC-type");
  EXPECT_EQ(run("validate", echoed).exit_code, 0);
}

TEST(Markov, Examples) {
  const Outcome p1 = run("markov", corpus("appendix_p1.json"));
  EXPECT_EQ(p1.exit_code, 0);
  const Json& f = p1.report["findings"];
  EXPECT_TRUE(f["irreducible"]);
  EXPECT_TRUE(f["primitive"]);
  EXPECT_EQ(f["perron_vectors_rational"][0], Json::parse(R"(["1/3","1/2","1/6"])"));
  EXPECT_EQ(f["claim_mismatches"], 1);

  const Outcome pa = run("markov", corpus("appendix_pa_repaired.json"));
  EXPECT_EQ(pa.report["findings"]["degeneracy"], 2);
  EXPECT_EQ(pa.report["findings"]["claim_mismatches"], 0);

  const Outcome id = run("markov", corpus("identity_3.json"));
  EXPECT_EQ(id.report["findings"]["degeneracy"], 3);
  EXPECT_TRUE(id.report["findings"]["simplex"]["full_probability_simplex"]);

  const Outcome cyc = run("markov", corpus("cyclic_3.json"), {{"limit", true}});
  EXPECT_EQ(cyc.exit_code, commands::kExitCheckFailed);
  EXPECT_EQ(cyc.report["error"]["kind"], "periodic");
  const Outcome red = run("markov", corpus("appendix_pa_repaired.json"), {{"limit", true}});
  EXPECT_EQ(red.report["error"]["kind"], "reducible");

  const Outcome lim = run("markov", corpus("appendix_p1.json"), {{"limit", true}, {"power", 2}});
  EXPECT_EQ(lim.exit_code, 0);
  EXPECT_EQ(lim.report["findings"]["limit_rational"][1], Json::parse(R"(["1/2","1/2","1/2"])"));

  const Outcome ch = run("markov", corpus("channel_pa_repaired.json"));
  EXPECT_EQ(ch.report["findings"]["degeneracy"], 2);
  EXPECT_EQ(run("markov", corpus("appendix_p2_printed.json")).exit_code, commands::kExitInvalidInput);
}

TEST(Markov, EmittedTransitionReingests) {
  const Outcome a = run("markov", corpus("channel_p1_p2_sum.json"));
  const Json t = a.report["findings"]["transition"];
  const Outcome b = run("markov", t);
  EXPECT_EQ(b.report["findings"]["perron_vectors"], a.report["findings"]["perron_vectors"]);
  EXPECT_EQ(run("validate", t).exit_code, 0);
}

TEST(Broadcast, Examples) {
  const Json pi = corpus("pi_diag_half.json");
  const Outcome ex1 = run("broadcast", corpus("channel_p1_p2_sum.json"),
                          {{"copies", 2}, {"pi", pi}, {"cap", 2048}});
  EXPECT_EQ(ex1.exit_code, 0) << ex1.diagnostic;
  EXPECT_TRUE(ex1.report["findings"]["dense_checked"]);
  const Outcome ex2 = run("broadcast", corpus("channel_pa_repaired.json"),
                          {{"copies", 2}, {"pi", pi}, {"second_channel", corpus("channel_pb_repaired.json")}});
  EXPECT_EQ(ex2.exit_code, 0) << ex2.diagnostic;
  const Outcome id = run("broadcast", corpus("identity_channel_2.json"));
  EXPECT_EQ(id.exit_code, commands::kExitInvalidInput);
  EXPECT_NE(id.diagnostic.find("not QC-type"), std::string::npos);
  const Outcome capped = run("broadcast", corpus("channel_p1_p2_sum.json"),
                             {{"copies", 2}, {"pi", pi}, {"materialize", true}});
  EXPECT_EQ(capped.exit_code, commands::kExitResourceCap);
  const Outcome single = run("broadcast", corpus("channel_p2_repaired.json"), {{"copies", 3}, {"mode", "spectrum"}});
  EXPECT_EQ(single.exit_code, 0) << single.diagnostic;
  const Outcome missing = run("broadcast", corpus("channel_pa_repaired.json"),
                              {{"second_channel", corpus("channel_pb_repaired.json")}});
  EXPECT_EQ(missing.exit_code, commands::kExitInvalidInput);
}

TEST(Commands, DeterministicReports) {
  const Json opts = {{"copies", 2}, {"seed", 77}};
  const Outcome a = run("broadcast", corpus("channel_p2_repaired.json"), opts);
  const Outcome b = run("broadcast", corpus("channel_p2_repaired.json"), opts);
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_EQ(a.report["seed"], 77);
  EXPECT_EQ(a.report["schema"], "qcorr/1");
  EXPECT_EQ(a.report["inputs"][0]["sha256"].get<std::string>().size(), 64u);
}

TEST(Commands, ErrorsMapToExitCodes) {
  EXPECT_EQ(commands::run_text("not json").exit_code, commands::kExitInvalidInput);
  EXPECT_EQ(commands::run(Json{{"command", "frobnicate"}}).exit_code, commands::kExitInvalidInput);
  EXPECT_EQ(commands::run(Json{{"command", "validate"}, {"path", "/nonexistent.json"}}).exit_code,
            commands::kExitInvalidInput);
  EXPECT_EQ(commands::exit_code_for(ErrorCode::kResourceCap), 3);
  EXPECT_EQ(commands::exit_code_for(ErrorCode::kNotPrimitive), 1);
}

TEST(Commands, ExportedFixturesValidate) {
  const auto dir = std::filesystem::temp_directory_path() / "qcorr_fixture_export_test";
  std::filesystem::remove_all(dir);
  const Outcome out = commands::run(Json{{"command", "export-fixtures"}, {"options", {{"dir", dir.string()}}}});
  ASSERT_EQ(out.exit_code, 0);
  for (const auto& f : out.report["findings"]["files"]) {
    const std::string path = f["path"];
    const Outcome v = commands::run(Json{{"command", "validate"}, {"path", path}});
    const bool printed_p2 = path.find("appendix_p2_printed") != std::string::npos;
    EXPECT_EQ(v.exit_code, printed_p2 ? 2 : 0) << path << ": " << v.diagnostic;
  }
  std::filesystem::remove_all(dir);
}

TEST(Commands, PaperCheckPasses) {
  const Outcome out = commands::run(Json{{"command", "paper-check"}});
  EXPECT_EQ(out.exit_code, 0) << out.diagnostic;
  EXPECT_EQ(out.report["findings"]["rows"].size(), 14u);
}

}  // namespace
}  // namespace qcorr
