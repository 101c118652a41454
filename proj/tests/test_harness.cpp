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

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "harness.hpp"

using namespace cpdyn;

namespace {

RunConfig config(const std::string& command, Json j) {
  if (j.is_null()) j = Json::object();
  j["timing"] = false;
  return config_from_json(command, j);
}

std::vector<Json> lines(const std::string& jsonl) {
  std::vector<Json> out;
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(Json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("block strings") {
  const BlockStructure b = parse_blocks("1x2,2x1");
  REQUIRE(b.size() == 2);
  CHECK(b[0].left == 1);
  CHECK(b[0].right == 2);
  CHECK(format_blocks(b) == "1x2,2x1");
  for (const char* bad : {"", "1x", "x2", "1x2,", "0x1", "1y2", "1x2x3"}) CHECK_THROWS_AS(parse_blocks(bad), Error);
}

TEST_CASE("config validation rejects bad values") {
  CHECK_THROWS_AS(config("verify-family", {{"trials", 0}}), Error);
  CHECK_THROWS_AS(config("verify-family", {{"ds", 0}}), Error);
  CHECK_THROWS_AS(config("verify-family", {{"tol", 0.0}}), Error);
  CHECK_THROWS_AS(config("verify-family", {{"ds", 8}, {"de", 9}}), Error);
  CHECK_THROWS_AS(config("verify-family", {{"family", "nope"}}), Error);
  CHECK_THROWS_AS(config("consistency", {{"g", "swap"}, {"ds", 2}, {"de", 3}}), Error);
  CHECK_THROWS_AS(config("consistency", {{"g", "file"}}), Error);
  CHECK_THROWS_AS(config("verify-family", {{"bogus", 1}}), Error);
  CHECK_THROWS_AS(config("verify-family", {{"trials", "ten"}}), Error);
  CHECK_THROWS_AS(config("dpi", {{"da", 5}, {"blocks", "2x2,2x2"}}), Error);
  CHECK_THROWS_AS(config("demo", {{"example", 3}}), Error);
  CHECK_THROWS_AS(config("teleport", nullptr), Error);
  CHECK_NOTHROW(config("verify-family", {{"ds", 8}, {"de", 8}}));
}

TEST_CASE("per-command defaults") {
  const RunConfig vf = config("verify-family", nullptr);
  CHECK(vf.family == "factorized");
  CHECK(vf.trials == 10);
  const RunConfig cons = config("consistency", nullptr);
  CHECK(cons.family == "full");
  const RunConfig mb = config("verify-family", {{"family", "markov-blocks"}});
  REQUIRE(mb.blocks.has_value());
  CHECK(mb.ds == 4);
  CHECK(config("demo", nullptr).trials == 1);
  CHECK(config("verify-family", {{"family", "kernel-extended"}}).g == "local");
  const RunConfig t = config("verify-family", {{"tol", 1e-6}});
  CHECK(t.psd_tol == 1e-6);
  CHECK(t.eq_tol == 1e-6);
}

TEST_CASE("config survives a JSON round trip") {
  const RunConfig c = config("theorem1", {{"family", "example1"}, {"g", "swap"}, {"seed", 77}, {"trials", 3}});
  const Json j = config_to_json(c);
  const RunConfig back = config_from_json("theorem1", j);
  CHECK(config_to_json(back) == j);
}

TEST_CASE("reports have a config record, trial records and a summary") {
  const RunReport r = run(config("verify-family", {{"trials", 4}, {"seed", 3}}));
  const std::vector<Json> docs = lines(r.to_jsonl());
  REQUIRE(docs.size() == 6);
  CHECK(docs.front()["type"] == "config");
  CHECK(docs.front()["schema_version"] == kReportSchemaVersion);
  for (int i = 1; i <= 4; ++i) {
    CHECK(docs[i]["type"] == "trial");
    CHECK(docs[i]["index"] == i - 1);
  }
  const Json& s = docs.back();
  CHECK(s["type"] == "summary");
  CHECK(s["pass"] == true);
  CHECK(s["pass_count"] == 4);
  CHECK_FALSE(s.contains("wall_time_s"));
}

TEST_CASE("reports are deterministic for a fixed seed") {
  for (const char* cmd : {"verify-family", "consistency", "theorem1", "dpi", "demo"}) {
    Json j = {{"seed", 11}, {"trials", 3}};
    if (std::string(cmd) == "dpi") j["search_draws"] = 50;
    if (std::string(cmd) == "demo") j.erase("trials");
    const std::string a = run(config(cmd, j)).to_jsonl();
    const std::string b = run(config(cmd, j)).to_jsonl();
    CHECK_MESSAGE(a == b, cmd);
    j["seed"] = 12;
    if (std::string(cmd) != "demo" && std::string(cmd) != "consistency") CHECK_MESSAGE(run(config(cmd, j)).to_jsonl() != a, cmd);
  }
}

TEST_CASE("command verdicts on the reference selectors") {
  CHECK(run(config("consistency", {{"family", "full"}, {"g", "local"}})).pass);
  CHECK_FALSE(run(config("consistency", {{"family", "full"}, {"g", "all"}})).pass);
  CHECK(run(config("consistency", {{"family", "example1"}, {"g", "swap"}})).pass);
  const RunReport bad = run(config("consistency", {{"family", "swap-counterexample"}, {"g", "swap"}}));
  CHECK_FALSE(bad.pass);
  CHECK(bad.summary["worst_residual"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(run(config("theorem1", {{"family", "example1"}, {"g", "swap"}, {"trials", 2}})).pass);
  CHECK(run(config("demo", {{"example", 1}})).pass);
  CHECK(run(config("demo", {{"example", 2}})).pass);
}

TEST_CASE("default seed") {
  CHECK(default_seed() == default_seed());
  CHECK(config("verify-family", nullptr).seed == default_seed());
}
