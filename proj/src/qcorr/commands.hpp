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

// Command dispatch behind the CLI. A request is a JSON object
//
//   {"command": "markov", "path": "p.json", "options": {"power": 3}}
//
// where "path" may be replaced by "inline" holding the manifest itself.
// Commands: validate, classify, markov, broadcast, paper-check,
// export-fixtures.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcorr/error.hpp"
#include "qcorr/manifest.hpp"

namespace qcorr::commands {

using manifest::Json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitResourceCap = 3;

struct Outcome {
  Json report;
  int exit_code = kExitPass;
  std::string diagnostic;  // empty on success
};

int exit_code_for(ErrorCode code);

/// Never throws; failures become an error report with the matching exit code.
Outcome run(const Json& request);
Outcome run_text(std::string_view request_json);

/// Built-in manifests keyed by file name.
std::vector<std::pair<std::string, Json>> fixture_corpus();

}  // namespace qcorr::commands
