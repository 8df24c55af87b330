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

// qcorr command-line front end. Builds a request, hands it to
// qcorr_run_command and writes the report.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcorr/qcorr.h"

using Json = nlohmann::json;

int main(int argc, char** argv) {
  CLI::App app{"qcorr: correlation structure of quantum channels"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", qcorr_version());

  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  app.add_option("--tol", tol, "Detection tolerance");
  app.add_option("--seed", seed, "Seed for randomized checks");
  app.add_option("--out", out_path, "Write the report here instead of stdout");

  std::string path;
  std::string side;
  std::string basis;
  std::optional<std::size_t> power;
  bool limit = false;
  std::optional<std::size_t> copies;
  std::string mode;
  std::string pi;
  std::string second;
  std::optional<std::size_t> cap;
  bool materialize = false;
  std::string dir = "fixtures";

  auto* validate = app.add_subcommand("validate", "Check a manifest against its invariants");
  validate->add_option("manifest", path, "Manifest file")->required();

  auto* classify = app.add_subcommand("classify", "Classify a state or channel");
  classify->add_option("manifest", path, "Manifest file")->required();
  classify->add_option("--side", side, "Require the state to be classical on A or B")
      ->check(CLI::IsMember({"A", "B"}));

  auto* markov = app.add_subcommand("markov", "Transition matrix and stationary analysis");
  markov->add_option("manifest", path, "Channel, povm or stochastic manifest")->required();
  markov->add_option("--basis", basis, "Basis manifest");
  markov->add_option("--power", power, "Also emit P^r");
  markov->add_flag("--limit", limit, "Also emit the ergodic limit");

  auto* broadcast = app.add_subcommand("broadcast", "Broadcastable states and their verification");
  broadcast->add_option("manifest", path, "QC-type channel manifest")->required();
  broadcast->add_option("--basis", basis, "Basis manifest");
  broadcast->add_option("--copies", copies, "Number of copies N");
  broadcast->add_option("--mode", mode, "spectrum or full")->check(CLI::IsMember({"spectrum", "full"}));
  broadcast->add_option("--pi", pi, "Distribution manifest for the correlated family");
  broadcast->add_option("--second-channel", second, "Channel acting on the second party");
  broadcast->add_option("--cap", cap, "Largest register dimension built densely");
  broadcast->add_flag("--materialize", materialize, "Build the dense register or fail past the cap");

  auto* paper = app.add_subcommand("paper-check", "Re-derive the built-in appendix claims");

  auto* exporter = app.add_subcommand("export-fixtures", "Write the built-in fixture corpus");
  exporter->add_option("--dir", dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Json request;
  Json options = Json::object();
  if (tol) options["tol"] = *tol;
  if (seed) options["seed"] = *seed;
  CLI::App* sub = app.get_subcommands().front();
  request["command"] = sub->get_name();
  if (sub != paper && sub != exporter) request["path"] = path;
  if (!side.empty()) options["side"] = side;
  if (!basis.empty()) options["basis"] = basis;
  if (power) options["power"] = *power;
  if (limit) options["limit"] = true;
  if (copies) options["copies"] = *copies;
  if (!mode.empty()) options["mode"] = mode;
  if (!pi.empty()) options["pi"] = pi;
  if (!second.empty()) options["second_channel"] = second;
  if (cap) options["cap"] = *cap;
  if (materialize) options["materialize"] = true;
  if (sub == exporter) options["dir"] = dir;
  request["options"] = options;

  char* report = nullptr;
  int exit_code = 2;
  if (qcorr_run_command(request.dump().c_str(), &report, &exit_code) != QCORR_OK) {
    std::cerr << "qcorr: " << qcorr_last_error() << "\n";
    return 2;
  }
  const std::string text = std::string(report) + "\n";
  qcorr_string_free(report);

  const Json parsed = Json::parse(text);
  if (parsed.contains("diagnostic")) std::cerr << "qcorr: " << parsed["diagnostic"].get<std::string>() << "\n";

  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << "qcorr: cannot write " << out_path << "\n";
      return 2;
    }
  }
  return exit_code;
}
