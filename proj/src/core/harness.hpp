// Copyright 2026 The cpdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "serialize.hpp"
#include "tensor.hpp"

namespace cpdyn {

inline constexpr const char* kReportSchemaVersion = "cpdyn.report/1";
inline constexpr int kMaxTotalDim = 64;
inline constexpr std::uint64_t kBuiltinSeed = 1234567;

/// kBuiltinSeed unless CPDYN_SEED is set; the variable is read once per process.
std::uint64_t default_seed();

struct RunConfig {
  std::string command;          // verify-family | consistency | theorem1 | dpi | demo
  std::string family;           // family name or subspace selector
  int da = 2;
  int ds = 2;
  int de = 2;
  std::optional<BlockStructure> blocks;
  int trials = 10;
  std::uint64_t seed = kBuiltinSeed;
  double psd_tol = 1e-9;
  double eq_tol = 1e-9;
  std::string g = "all";        // all | local | swap | file
  std::string g_file;
  std::vector<Matrix> g_unitaries;
  int g_samples = 20;
  int draws = 10;               // dpi: unitaries per Markov state
  int search_draws = 500;       // dpi: Haar draws on the non-Markov fixture
  int example = 1;              // demo
  bool verbose = false;
  bool timing = true;
};

/// "1x2,2x1" -> {(1,2),(2,1)}
BlockStructure parse_blocks(const std::string& text);
std::string format_blocks(const BlockStructure& blocks);

/// Reads a config object (see docs/schema.md), applies per-command defaults,
/// loads g_file, and validates. Throws Error(InvalidArgument) on bad values.
RunConfig config_from_json(const std::string& command, const Json& j);
Json config_to_json(const RunConfig& c);
void validate(RunConfig& c);

struct RunReport {
  Json config;
  std::vector<Json> trials;
  std::vector<Json> extra;  // records between the trials and the summary
  Json summary;
  bool pass = false;

  /// One JSON document per line: config, trials, extra, summary.
  std::string to_jsonl() const;
};

RunReport run(const RunConfig& c);

RunReport cmd_verify_family(const RunConfig& c);
RunReport cmd_consistency(const RunConfig& c);
RunReport cmd_theorem1(const RunConfig& c);
RunReport cmd_dpi(const RunConfig& c);
RunReport cmd_demo(const RunConfig& c);

}  // namespace cpdyn
