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

// Exercises the shared library through its public header only.

#include <cpdyn/cpdyn.h>
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

std::vector<double> diag_data(const std::vector<double>& d) {
  const size_t n = d.size();
  std::vector<double> out(2 * n * n, 0.0);
  for (size_t i = 0; i < n; ++i) out[2 * (i * n + i)] = d[i];
  return out;
}

cpdyn_operator* make(const std::vector<const char*>& labels, const std::vector<int>& dims, const std::vector<double>& data) {
  cpdyn_operator* op = nullptr;
  REQUIRE(cpdyn_operator_create(labels.data(), dims.data(), labels.size(), data.data(), &op) == CPDYN_OK);
  return op;
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::strlen(cpdyn_version()) > 0);
  CHECK(std::string(cpdyn_status_string(CPDYN_OK)) != std::string(cpdyn_status_string(CPDYN_NOT_PSD)));
}

TEST_CASE("operators, partial trace and entropy") {
  cpdyn_operator* a = make({"S"}, {2}, diag_data({0.5, 0.5}));
  cpdyn_operator* b = make({"E"}, {2}, diag_data({1.0, 0.0}));
  cpdyn_operator* ab = nullptr;
  REQUIRE(cpdyn_kron(a, b, &ab) == CPDYN_OK);
  int dim = 0;
  CHECK(cpdyn_operator_dim(ab, &dim) == CPDYN_OK);
  CHECK(dim == 4);
  const char* keep[] = {"S"};
  cpdyn_operator* s = nullptr;
  REQUIRE(cpdyn_partial_trace(ab, keep, 1, &s) == CPDYN_OK);
  double ent = 0.0;
  CHECK(cpdyn_entropy(s, &ent) == CPDYN_OK);
  CHECK(ent == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  double eig[4];
  CHECK(cpdyn_eigenvalues(ab, eig, 4) == CPDYN_OK);
  CHECK(eig[0] == doctest::Approx(0.5));
  CHECK(cpdyn_eigenvalues(ab, eig, 2) == CPDYN_DIMENSION_MISMATCH);
  const char* bad[] = {"A"};
  cpdyn_operator* untouched = nullptr;
  CHECK(cpdyn_partial_trace(ab, bad, 1, &untouched) == CPDYN_UNKNOWN_FACTOR);
  CHECK(untouched == nullptr);
  CHECK(std::strlen(cpdyn_last_error()) > 0);
  char* json = nullptr;
  REQUIRE(cpdyn_operator_to_json(ab, &json) == CPDYN_OK);
  cpdyn_operator* back = nullptr;
  CHECK(cpdyn_operator_from_json(json, &back) == CPDYN_OK);
  cpdyn_string_free(json);
  cpdyn_operator_free(back);
  cpdyn_operator_free(s);
  cpdyn_operator_free(ab);
  cpdyn_operator_free(a);
  cpdyn_operator_free(b);
}

TEST_CASE("null arguments and invalid input") {
  CHECK(cpdyn_operator_dim(nullptr, nullptr) == CPDYN_NULL_ARGUMENT);
  cpdyn_operator* op = nullptr;
  CHECK(cpdyn_operator_from_json("{not json", &op) == CPDYN_PARSE_ERROR);
  CHECK(op == nullptr);
  cpdyn_rng* rng = nullptr;
  REQUIRE(cpdyn_rng_create(1, &rng) == CPDYN_OK);
  CHECK(cpdyn_random_density(3, 0, rng, &op) != CPDYN_OK);
  cpdyn_rng_free(rng);
  cpdyn_operator_free(nullptr);
  cpdyn_channel_free(nullptr);
}

TEST_CASE("reduced dynamics of a product assignment is CP") {
  cpdyn_rng* rng = nullptr;
  REQUIRE(cpdyn_rng_create(7, &rng) == CPDYN_OK);
  cpdyn_operator* w = nullptr;
  REQUIRE(cpdyn_random_density(2, 2, rng, &w) == CPDYN_OK);
  cpdyn_assignment* a = nullptr;
  REQUIRE(cpdyn_assignment_product(w, 2, &a) == CPDYN_OK);
  int cp = 0;
  CHECK(cpdyn_assignment_is_cp(a, &cp) == CPDYN_OK);
  CHECK(cp == 1);
  for (int i = 0; i < 10; ++i) {
    cpdyn_operator* u = nullptr;
    REQUIRE(cpdyn_random_unitary(4, rng, &u) == CPDYN_OK);
    cpdyn_channel* psi = nullptr;
    REQUIRE(cpdyn_reduced_dynamics(u, a, &psi) == CPDYN_OK);
    double m = 0.0, tp = 1.0;
    CHECK(cpdyn_channel_min_choi_eigenvalue(psi, &m) == CPDYN_OK);
    CHECK(m >= -1e-9);
    CHECK(cpdyn_channel_tp_error(psi, &tp) == CPDYN_OK);
    CHECK(tp <= 1e-10);
    char* kraus = nullptr;
    CHECK(cpdyn_channel_kraus_json(psi, &kraus) == CPDYN_OK);
    cpdyn_string_free(kraus);
    cpdyn_channel_free(psi);
    cpdyn_operator_free(u);
  }
  cpdyn_assignment_free(a);
  cpdyn_operator_free(w);
  cpdyn_rng_free(rng);
}

TEST_CASE("subspace dimensions through the C interface") {
  cpdyn_subspace* v = nullptr;
  REQUIRE(cpdyn_subspace_full(2, 2, &v) == CPDYN_OK);
  int dv = 0, dv0 = 0, dd = 0;
  CHECK(cpdyn_subspace_dims(v, &dv, &dv0, &dd) == CPDYN_OK);
  CHECK(dv == 16);
  CHECK(dv0 == 12);
  CHECK(dd == 4);
  cpdyn_subspace_free(v);
}

TEST_CASE("information measures on GHZ") {
  std::vector<double> data(2 * 64, 0.0);
  data[2 * 0] = data[2 * 7] = data[2 * (7 * 8)] = data[2 * (7 * 8 + 7)] = 0.5;
  cpdyn_operator* g = make({"A", "S", "E"}, {2, 2, 2}, data);
  double cmi = 0.0;
  CHECK(cpdyn_conditional_mutual_information(g, &cmi) == CPDYN_OK);
  CHECK(cmi == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  cpdyn_operator_free(g);
}

TEST_CASE("harness entry point") {
  char* report = nullptr;
  int pass = 0;
  REQUIRE(cpdyn_run("demo", "{\"example\":2,\"timing\":false}", &report, &pass) == CPDYN_OK);
  CHECK(pass == 1);
  CHECK(std::string(report).find("\"type\":\"summary\"") != std::string::npos);
  cpdyn_string_free(report);
  report = nullptr;
  CHECK(cpdyn_run("verify-family", "{\"trials\":0}", &report, &pass) == CPDYN_INVALID_ARGUMENT);
  CHECK(report == nullptr);
}
