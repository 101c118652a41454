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

#include "channel.hpp"
#include "subspace.hpp"

namespace cpdyn {

inline constexpr double kConsistencyTol = 1e-9;

/// A set G of joint unitaries. Infinite sets are represented by seeded samples.
struct UnitarySetSpec {
  enum class Kind { ExplicitList, AllUnitaries, LocalProducts, SwapOnly };
  Kind kind = Kind::AllUnitaries;
  std::vector<Matrix> unitaries;  // ExplicitList, or pre-drawn samples of a sampled kind
  int samples = 100;              // AllUnitaries / LocalProducts

  static UnitarySetSpec explicit_list(std::vector<Matrix> us);
  static UnitarySetSpec all(int samples = 100);
  static UnitarySetSpec local(int samples = 100);
  static UnitarySetSpec swap();
};

std::string to_string(UnitarySetSpec::Kind k);
std::vector<Matrix> enumerate_unitaries(const UnitarySetSpec& g, int ds, int de, Rng& rng);

/// max over the V0 basis of ||Tr_E(U Y U^dagger)||_F
double consistency_violation(const OperatorSubspace& kernel, const Matrix& u);
bool is_u_consistent(const OperatorSubspace& v, const Matrix& u, double tol = kConsistencyTol);

struct ConsistencyReport {
  bool consistent = true;
  double worst_violation = 0.0;
  int checked = 0;
  bool exact = false;  // true when the verdict holds for all of G, not just the samples
  std::string method;
  int kernel_dim = 0;
  std::vector<double> violations;  // per enumerated unitary
};

ConsistencyReport check_consistency(const OperatorSubspace& v, const OperatorSubspace& kernel, UnitarySetSpec::Kind kind,
                                    const std::vector<Matrix>& unitaries);
ConsistencyReport is_g_consistent(const OperatorSubspace& v, const UnitarySetSpec& g, Rng& rng);

/// Minimum-Frobenius-norm section of Tr_E restricted to V.
AssignmentMap canonical_assignment(const OperatorSubspace& v);
/// Lambda + delta; the range of delta must lie in V0.
AssignmentMap perturb_assignment(const AssignmentMap& base, const ChannelMap& delta, const OperatorSubspace& kernel);
/// Hermitian-preserving random linear map L(H_S) -> V0.
ChannelMap random_kernel_delta(const OperatorSubspace& kernel, Rng& rng, double scale = 1.0);
/// Worst distance from V of the images of an orthonormal basis of Tr_E(V),
/// together with the trace-consistency residual on that basis.
double section_error(const AssignmentMap& assign, const OperatorSubspace& v);

struct UnitaryVerdict {
  int index = 0;
  double violation = 0.0;
  bool consistent = true;
  double min_choi = 0.0;
  bool cp = false;
  double tp_error = 0.0;         // over all of L(H_S)
  double domain_tp_error = 0.0;  // over Tr_E(V)
  double perturbation_distance = 0.0;
  double perturbed_min_choi = 0.0;
  bool perturbed_cp = false;
};

struct Theorem1Options {
  std::optional<AssignmentMap> base;  // defaults to canonical_assignment(v)
  int perturbations = 2;
  double eq_tol = 1e-9;
};

struct Theorem1Report {
  UnitarySetSpec::Kind g_kind = UnitarySetSpec::Kind::AllUnitaries;
  ConsistencyReport consistency;
  int dim_v = 0;
  int dim_v0 = 0;
  int dim_domain = 0;
  bool canonical_cp = false;
  double canonical_min_choi = 0.0;
  bool base_cp = false;
  double base_min_choi = 0.0;
  double base_section_error = 0.0;
  std::vector<UnitaryVerdict> verdicts;
  bool premises_hold = false;
  bool conclusion_holds = false;
  bool theorem_holds = false;
  std::uint64_t inputs_hash = 0;
};

Theorem1Report theorem1_verify(const OperatorSubspace& v, const UnitarySetSpec& g, Rng& rng, const Theorem1Options& opts = {});

/// Lambda_g(x) = x (x) w_E + g (x - tr(x) I/ds) (x) D, D traceless Hermitian.
AssignmentMap witness_assignment(const Matrix& omega_e, const Matrix& delta, int ds, double gamma);
/// Largest g >= 0 for which the witness assignment is CP.
double witness_cp_threshold(const Matrix& omega_e, const Matrix& delta, int ds);
/// diag(1, -1, 0, ...)
Matrix default_traceless(int de);

struct WitnessSearch {
  double gamma = 0.0;
  double threshold = 0.0;
  double best_min_choi = 0.0;
  int best_index = -1;
  int draws = 0;
  bool found = false;
  Matrix best_u;
};
WitnessSearch search_non_cp_witness(const Matrix& omega_e, const Matrix& delta, int ds, double gamma, int draws, Rng& rng,
                                    double target = -0.01);

/// span{ X : Tr_S X proportional to w_E }
OperatorSubspace fixed_env_marginal_subspace(const Matrix& omega_e, int ds);

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ULL);
std::uint64_t hash_matrix(const Matrix& m, std::uint64_t h = 1469598103934665603ULL);

}  // namespace cpdyn
