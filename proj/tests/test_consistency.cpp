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

#include <cmath>
#include <vector>

#include "channel.hpp"
#include "consistency.hpp"
#include "families.hpp"
#include "oracles.hpp"
#include "subspace.hpp"

using namespace cpdyn;

namespace {

OperatorSubspace random_subspace(int ds, int de, int count, Rng& rng) {
  std::vector<Matrix> ops;
  for (int i = 0; i < count; ++i) ops.push_back(random_ginibre(ds * de, ds * de, rng));
  return span_from_states(ops, ds, de);
}

}  // namespace

TEST_CASE("kernel dimension on the full space") {
  // ker Tr_E in L(C^2 (x) C^2) has dimension 16 - 4.
  const OperatorSubspace full = OperatorSubspace::full(2, 2);
  CHECK(full.dim() == 16);
  CHECK(kernel_tr_e(full).dim() == 12);
  CHECK(marginal_dim(full) == 4);
  for (int ds = 1; ds <= 3; ++ds)
    for (int de = 1; de <= 3; ++de) CHECK(kernel_tr_e(OperatorSubspace::full(ds, de)).dim() == ds * ds * (de * de - 1));
}

TEST_CASE("dim V0 = dim V - dim Tr_E V on random subspaces") {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const int ds = 1 + i % 3, de = 1 + (i / 3) % 3;
    const int n2 = ds * de * ds * de;
    std::uniform_int_distribution<int> pick(1, n2);
    const OperatorSubspace v = random_subspace(ds, de, pick(rng), rng);
    const OperatorSubspace k = kernel_tr_e(v);
    CHECK(k.dim() == v.dim() - marginal_dim(v));
    for (const auto& y : k.elements()) {
      CHECK(oracle::trace_out_second(y, ds, de).norm() < 1e-10);
      CHECK(v.distance_to(y) < 1e-10);
    }
  }
}

TEST_CASE("canonical assignment on the full space is x (x) I/de") {
  for (int de : {2, 3}) {
    const AssignmentMap a = canonical_assignment(OperatorSubspace::full(2, de));
    const auto want = oracle::superop([&](const Matrix& x) { return oracle::kron(x, Matrix(Matrix::Identity(de, de) / double(de))); }, 2);
    CHECK((a.matrix() - want).norm() < 1e-12);
    CHECK(a.cp());
  }
}

TEST_CASE("fixed environment marginal subspace under the swap") {
  Rng rng(32);
  const Matrix w = random_density_matrix(2, 2, rng);
  const OperatorSubspace v = fixed_env_marginal_subspace(w, 2);
  // V is the preimage under Tr_S of span{w}: 16 - 4 + 1; V0 drops the 4 marginals.
  CHECK(v.dim() == 13);
  CHECK(kernel_tr_e(v).dim() == 9);
  const ConsistencyReport r = is_g_consistent(v, UnitarySetSpec::swap(), rng);
  CHECK(r.consistent);
  CHECK(r.exact);
  // Both sections of Tr_E on V give the same reduced map x -> tr(x) w.
  const Matrix sw = oracle::swap(2);
  const ChannelMap via_product = reduced_dynamics(sw, product_assignment(w, 2));
  const ChannelMap via_canonical = reduced_dynamics(sw, canonical_assignment(v));
  CHECK(choi_distance(via_product, via_canonical) < 1e-10);
  const auto constant = oracle::superop([&](const Matrix& x) { return Matrix(x.trace() * w); }, 2);
  CHECK((via_product.matrix() - constant).norm() < 1e-12);
}

TEST_CASE("swap violation of a single off-kernel element") {
  // Y = |0><0| (x) diag(1,-1)/sqrt(2); Tr_E(U_sw Y U_sw^dag) = diag(1,-1)/sqrt(2), norm 1.
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  const Matrix y = oracle::kron(basis_projector(2, 0), d);
  const OperatorSubspace v = span_from_states(std::vector<Matrix>{y}, 2, 2);
  CHECK(kernel_tr_e(v).dim() == 1);
  CHECK(consistency_violation(kernel_tr_e(v), oracle::swap(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(is_u_consistent(v, oracle::swap(2)));
}

TEST_CASE("local products are always consistent, generic unitaries are not") {
  Rng rng(33);
  for (int i = 0; i < 10; ++i) {
    const OperatorSubspace v = random_subspace(2, 3, 20, rng);
    const ConsistencyReport local = is_g_consistent(v, UnitarySetSpec::local(10), rng);
    CHECK(local.consistent);
    CHECK(local.exact);
  }
  const ConsistencyReport all = is_g_consistent(OperatorSubspace::full(2, 2), UnitarySetSpec::all(5), rng);
  CHECK_FALSE(all.consistent);
  CHECK(all.exact);
  CHECK(all.worst_violation > 1e-3);
  const ConsistencyReport empty = is_g_consistent(OperatorSubspace::zero(2, 2), UnitarySetSpec::all(5), rng);
  CHECK(empty.consistent);
  CHECK(empty.method == "empty-kernel");
}

TEST_CASE("a trivial kernel is consistent with every unitary") {
  Rng rng(38);
  const Matrix w = random_density_matrix(3, 3, rng);
  const OperatorSubspace v = span_from_states(std::vector<Matrix>{oracle::kron(basis_projector(2, 0), w),
                                                                  oracle::kron(basis_projector(2, 1), w)}, 2, 3);
  REQUIRE(kernel_tr_e(v).dim() == 0);
  for (int i = 0; i < 100; ++i) CHECK(is_u_consistent(v, haar_unitary(6, rng)));
}

TEST_CASE("a convex U-consistent state set spans a U-consistent subspace") {
  // States with a fixed environment marginal w are convex and swap-consistent:
  // the swap sends every one of them to w. Their span is checked on the kernel.
  Rng rng(39);
  const Matrix w = random_density_matrix(2, 2, rng);
  const OperatorSubspace k = kernel_tr_e(fixed_env_marginal_subspace(w, 2));
  const Matrix sw = oracle::swap(2);
  std::vector<Matrix> states;
  for (int i = 0; i < 40; ++i) {
    const Matrix base = oracle::kron(random_density_matrix(2, 2, rng), w);
    Matrix y = Matrix::Zero(4, 4);
    for (const auto& e : k.elements()) y += std::normal_distribution<double>()(rng) * (e + e.adjoint());
    // Shrink the kernel direction until the state stays PSD.
    double t = 1.0;
    while (oracle::min_eigenvalue(base + t * y) < 0.0) t *= 0.5;
    states.push_back(base + t * y);
  }
  for (int i = 0; i + 1 < static_cast<int>(states.size()); ++i) {
    const Matrix mix = 0.3 * states[i] + 0.7 * states[i + 1];
    CHECK((oracle::trace_out_first(mix, 2, 2) - w).norm() < 1e-12);
    CHECK((oracle::trace_out_second(sw * mix * sw.adjoint(), 2, 2) - w).norm() < 1e-12);
  }
  CHECK(is_u_consistent(span_from_states(states, 2, 2), sw));
}

TEST_CASE("canonical assignments of Markov block subspaces are CP") {
  Rng rng(40);
  for (const auto& blocks : {BlockStructure{{1, 2}, {2, 1}}, BlockStructure{{2, 1}}, BlockStructure{{1, 1}, {1, 2}, {2, 1}}}) {
    for (int i = 0; i < 10; ++i) {
      const FamilySpec spec = random_markov_blocks(blocks, 2, rng);
      const AssignmentMap a = canonical_assignment(family_subspace(spec));
      CHECK(a.cp());
      for (int k = 0; k < 5; ++k) CHECK(is_cp(reduced_dynamics(haar_unitary(spec.ds() * 2, rng), a)));
    }
  }
}

TEST_CASE("kernel perturbations") {
  Rng rng(34);
  const OperatorSubspace full = OperatorSubspace::full(2, 2);
  const OperatorSubspace k = kernel_tr_e(full);
  const ChannelMap delta = random_kernel_delta(k, rng);
  CHECK(is_hermitian_preserving(delta));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(k.distance_to(delta.apply(oracle::unit(2, i, j))) < 1e-10);
  const AssignmentMap base = canonical_assignment(full);
  const AssignmentMap pert = perturb_assignment(base, delta, k);
  CHECK(pert.trace_consistent());
  const ChannelMap off = ChannelMap::from_function(2, 4, [](const Matrix& x) { return oracle::kron(x, Matrix(Matrix::Identity(2, 2))); });
  try {
    perturb_assignment(base, off, k);
    FAIL("out-of-kernel perturbation accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfKernel);
  }
}

TEST_CASE("theorem check on the two worked examples") {
  Rng rng(35);
  SUBCASE("swap with a fixed environment marginal") {
    const Matrix w = random_density_matrix(2, 2, rng);
    Theorem1Options opts;
    opts.base = product_assignment(w, 2);
    const Theorem1Report r = theorem1_verify(fixed_env_marginal_subspace(w, 2), UnitarySetSpec::swap(), rng, opts);
    CHECK(r.premises_hold);
    CHECK(r.conclusion_holds);
    CHECK(r.theorem_holds);
    CHECK(r.dim_v0 == 9);
    for (const auto& v : r.verdicts) {
      CHECK(v.cp);
      CHECK(v.perturbation_distance <= 1e-9);
    }
  }
  SUBCASE("local unitaries on the full space") {
    const Theorem1Report r = theorem1_verify(OperatorSubspace::full(2, 3), UnitarySetSpec::local(10), rng);
    CHECK(r.premises_hold);
    CHECK(r.conclusion_holds);
    CHECK(r.dim_v0 == 4 * 8);
    CHECK(r.verdicts.size() == 10);
  }
  SUBCASE("failed premises hold vacuously") {
    const Theorem1Report r = theorem1_verify(OperatorSubspace::full(2, 2), UnitarySetSpec::all(4), rng);
    CHECK_FALSE(r.premises_hold);
    CHECK(r.theorem_holds);
  }
  SUBCASE("the input hash depends on V and G only") {
    Rng a(5), b(5);
    const Theorem1Report r1 = theorem1_verify(OperatorSubspace::full(2, 2), UnitarySetSpec::swap(), a);
    const Theorem1Report r2 = theorem1_verify(OperatorSubspace::full(2, 2), UnitarySetSpec::swap(), b);
    CHECK(r1.inputs_hash == r2.inputs_hash);
    const Theorem1Report r3 = theorem1_verify(OperatorSubspace::full(2, 2), UnitarySetSpec::local(2), a);
    CHECK(r1.inputs_hash != r3.inputs_hash);
  }
}

TEST_CASE("witness assignment leaves the CP regime") {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 0) = 0.7;
  w(1, 1) = 0.3;
  const Matrix d = default_traceless(2);
  CHECK(witness_assignment(w, d, 2, 0.0).cp());
  CHECK(witness_assignment(w, d, 2, 0.5).trace_consistent());
  // On the complement of the maximally entangled vector the Choi matrix is
  // -(g/ds) P (x) D, so every g > 0 breaks positivity. The numerical
  // threshold sits where that eigenvalue meets the relative PSD tolerance.
  CHECK(witness_cp_threshold(w, d, 2) <= 1e-8);
  // With E controlling a CNOT on S the reduced map is (w0+g) x + (w1-g) X x X,
  // whose Choi spectrum is {2(w0+g), 2(w1-g), 0, 0}.
  const double g = 0.5;
  const AssignmentMap lam = witness_assignment(w, d, 2, g);
  const Matrix cnot = oracle::cnot_e_controls_s();
  const double got = min_choi_eigenvalue(choi(reduced_dynamics(cnot, lam)));
  CHECK(got == doctest::Approx(2.0 * (0.3 - g)).epsilon(1e-12));
  auto lam_fn = [&](const Matrix& x) {
    return Matrix(oracle::kron(x, w) + g * oracle::kron(x - x.trace() * Matrix::Identity(2, 2) / 2.0, d));
  };
  CHECK(oracle::min_eigenvalue(oracle::choi(oracle::reduced(cnot, lam_fn, 2, 2), 2)) == doctest::Approx(got).epsilon(1e-12));
  Rng rng(36);
  const WitnessSearch s = search_non_cp_witness(w, d, 2, g, 200, rng);
  CHECK(s.found);
  CHECK(s.best_min_choi <= -0.01);
  CHECK_THROWS_AS(witness_assignment(w, Matrix::Identity(2, 2), 2, 0.1), Error);
}

TEST_CASE("explicit unitary lists are validated") {
  Rng rng(37);
  CHECK_THROWS_AS(enumerate_unitaries(UnitarySetSpec::explicit_list({Matrix::Identity(3, 3)}), 2, 2, rng), Error);
  CHECK_THROWS_AS(enumerate_unitaries(UnitarySetSpec::explicit_list({Matrix(2.0 * Matrix::Identity(4, 4))}), 2, 2, rng), Error);
  CHECK_THROWS_AS(enumerate_unitaries(UnitarySetSpec::swap(), 2, 3, rng), Error);
  CHECK(enumerate_unitaries(UnitarySetSpec::local(7), 2, 3, rng).size() == 7);
}
