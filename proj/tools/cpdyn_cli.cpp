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

// Command-line front end. Builds a JSON config from the flags and hands it to
// cpdyn_run. Exit codes: 0 pass, 1 fail, 2 usage or input error.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "cpdyn/cpdyn.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::optional<std::string> family;
  std::optional<int> ds, de, da;
  std::optional<std::string> blocks;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> g;
  std::optional<std::string> g_file;
  std::optional<int> g_samples;
  std::optional<int> draws;
  std::optional<int> search_draws;
  std::string out;
  bool verbose = false;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--ds", f.ds, "dimension of S");
  cmd->add_option("--de", f.de, "dimension of E");
  cmd->add_option("--trials", f.trials, "number of independent trials");
  cmd->add_option("--seed", f.seed, "64-bit seed (default: $CPDYN_SEED or built-in)");
  cmd->add_option("--tol", f.tol, "PSD and equality tolerance");
  cmd->add_option("--out", f.out, "write the report here instead of stdout");
  cmd->add_flag("--verbose", f.verbose, "include matrices in trial records");
  cmd->add_flag("--no-timing", f.no_timing, "omit wall time so reruns are byte-identical");
}

void add_family(CLI::App* cmd, Flags& f, const std::string& help) {
  cmd->add_option("--family", f.family, help);
  cmd->add_option("--blocks", f.blocks, "block layout of S, e.g. 1x2,2x1");
  cmd->add_option("--da", f.da, "dimension of the ancilla A (steered family)");
}

void add_g(CLI::App* cmd, Flags& f) {
  cmd->add_option("--g", f.g, "unitary set")->check(CLI::IsMember({"all", "local", "swap", "file"}));
  cmd->add_option("--g-file", f.g_file, "JSON list of unitaries for --g file");
  cmd->add_option("--g-samples", f.g_samples, "samples drawn from an infinite unitary set");
}

template <class T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cpdyn: reduced-dynamics verification harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cpdyn_version()));

  Flags f;
  int example = 1;

  auto* verify = app.add_subcommand("verify-family", "sample a family and check CP/TP of the reduced dynamics");
  add_common(verify, f);
  add_family(verify, f,
             "factorized | classical-quantum | direct-sum | mixed-direct-sum | markov-blocks | steered | kernel-extended");
  add_g(verify, f);

  auto* consistency = app.add_subcommand("consistency", "check G-consistency of a subspace");
  add_common(consistency, f);
  add_family(consistency, f, "full | example1 | swap-counterexample | any family name");
  add_g(consistency, f);

  auto* theorem = app.add_subcommand("theorem1", "check that consistency and a CP assignment give CP dynamics");
  add_common(theorem, f);
  add_family(theorem, f, "full | example1 | swap-counterexample | any family name");
  add_g(theorem, f);

  auto* dpi = app.add_subcommand("dpi", "data-processing sweep on Markov states plus a non-Markov search");
  add_common(dpi, f);
  dpi->add_option("--da", f.da, "dimension of A");
  dpi->add_option("--blocks", f.blocks, "block layout of S, e.g. 1x2,2x1");
  dpi->add_option("--draws", f.draws, "unitaries per Markov state");
  dpi->add_option("--search-draws", f.search_draws, "Haar draws for the non-Markov search");

  auto* demo = app.add_subcommand("demo", "run a worked example end to end");
  add_common(demo, f);
  demo->add_option("example", example, "1 (swap) or 2 (local unitaries)")->required()->check(CLI::IsMember({1, 2}));
  demo->add_option("--g-samples", f.g_samples, "local unitaries drawn by demo 2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  nlohmann::json cfg = nlohmann::json::object();
  put(cfg, "family", f.family);
  put(cfg, "ds", f.ds);
  put(cfg, "de", f.de);
  put(cfg, "da", f.da);
  put(cfg, "blocks", f.blocks);
  put(cfg, "trials", f.trials);
  put(cfg, "seed", f.seed);
  put(cfg, "tol", f.tol);
  put(cfg, "g", f.g);
  put(cfg, "g_file", f.g_file);
  put(cfg, "g_samples", f.g_samples);
  put(cfg, "draws", f.draws);
  put(cfg, "search_draws", f.search_draws);
  if (demo->parsed()) cfg["example"] = example;
  cfg["verbose"] = f.verbose;
  cfg["timing"] = !f.no_timing;

  const std::string command = app.get_subcommands().front()->get_name();
  char* report = nullptr;
  int pass = 0;
  const cpdyn_status st = cpdyn_run(command.c_str(), cfg.dump().c_str(), &report, &pass);
  if (st != CPDYN_OK) {
    std::cerr << "cpdyn: " << cpdyn_status_string(st) << ": " << cpdyn_last_error() << "\n";
    return kExitUsage;
  }

  if (f.out.empty()) {
    std::cout << report;
  } else {
    std::ofstream os(f.out, std::ios::binary);
    if (!os) {
      std::cerr << "cpdyn: cannot write " << f.out << "\n";
      cpdyn_string_free(report);
      return kExitUsage;
    }
    os << report;
  }
  cpdyn_string_free(report);
  return pass ? kExitPass : kExitFail;
}
