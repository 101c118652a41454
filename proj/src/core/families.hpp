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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subspace.hpp"
#include "tensor.hpp"

namespace cpdyn {

// Initial system-environment state families. Every spec stores its fixed
// data eagerly; the free parameters live in FamilyParams.

/// { rho_S (x) w_E }
struct FactorizedSpec {
  int ds = 1;
  Matrix omega_e;
};

/// { sum_i p_i |i~><i~| (x) w_i } for a fixed orthonormal basis (columns).
struct ClassicalQuantumSpec {
  Matrix basis;
  std::vector<Matrix> omegas;
};

/// { (+)_i p_i rho_S^(i) (x) w_i } over H_S = (+)_i H_S^(i).
struct DirectSumSpec {
  std::vector<int> block_dims;
  std::vector<Matrix> omegas;
};

/// Blocks before `split` carry a fixed state w_SE^(i); the rest are
/// factorized as in DirectSumSpec.
struct MixedDirectSumSpec {
  std::vector<int> block_dims;
  int split = 0;
  std::vector<Matrix> fixed_se;  // size split, each on H_S^(i) (x) H_E
  std::vector<Matrix> omegas;    // size m - split, each on H_E
};

/// { (+)_i p_i rho_Li (x) w_RiE } over H_S = (+)_i H_Li (x) H_Ri.
struct MarkovBlocksSpec {
  BlockStructure blocks;
  std::vector<Matrix> omega_re;  // each on H_Ri (x) H_E
  int de = 1;
};

/// w_ASE = (+)_i q_i w_ALi (x) w_RiE on H_A (x) H_S (x) H_E.
struct MarkovStateSpec {
  int da = 1;
  BlockStructure blocks;
  std::vector<double> q;
  std::vector<Matrix> omega_al;  // each on H_A (x) H_Li
  std::vector<Matrix> omega_re;  // each on H_Ri (x) H_E
  int de = 1;
};

/// States steered from a fixed tripartite state by positive P_A.
struct SteeredSpec {
  int da = 1;
  int ds = 1;
  int de = 1;
  Matrix omega_ase;
  std::optional<MarkovStateSpec> markov_source;  // set when built from a Markov state
};

/// (base member + V0) intersected with the density matrices.
struct KernelExtendedSpec {
  MarkovBlocksSpec base;
  OperatorSubspace kernel;
  double scale = 1.0;  // cap s on the kernel step
};

enum class FamilyVariant { Factorized, ClassicalQuantum, DirectSumFactorized, MixedDirectSum, MarkovBlocks, Steered, KernelExtended };

std::string to_string(FamilyVariant v);
FamilyVariant family_variant_from_string(const std::string& name);

class FamilySpec {
 public:
  using Data = std::variant<FactorizedSpec, ClassicalQuantumSpec, DirectSumSpec, MixedDirectSumSpec, MarkovBlocksSpec,
                            SteeredSpec, KernelExtendedSpec>;

  // Validates the fixed data; throws Error on inconsistent dimensions or
  // invalid fixed states.
  FamilySpec(Data data);

  FamilyVariant variant() const;
  int ds() const { return ds_; }
  int de() const { return de_; }
  const Data& data() const { return data_; }
  template <class T>
  const T& as() const {
    return std::get<T>(data_);
  }

 private:
  Data data_;
  int ds_ = 1;
  int de_ = 1;
};

struct FamilyParams {
  std::vector<double> probs;
  std::vector<Matrix> states;  // rho_S, rho_S^(i) or rho_Li depending on the variant
  std::optional<Matrix> p_a;
  std::vector<double> kernel_coeffs;
  std::optional<double> kernel_step;  // explicit step instead of the PSD line search
};

/// A family rewritten as a Markov block form in a fixed system frame:
/// members are (W (x) I)[(+)_i p_i rho_Li (x) w_RiE](W (x) I)^dagger.
struct MarkovForm {
  BlockStructure blocks;
  std::vector<Matrix> omega_re;
  Matrix frame;  // unitary W on H_S
  int de = 1;
  int ds() const { return block_total(blocks); }
};

MarkovForm to_markov_form(const FamilySpec& spec);

/// (+)_i X_i (x) W_i on H_S (x) H_E, no frame applied.
Matrix embed_blocks(const BlockStructure& blocks, int de, const std::vector<Matrix>& left_ops,
                    const std::vector<Matrix>& omega_re);

DensityMatrix sample_member(const FamilySpec& spec, const FamilyParams& params);
FamilyParams random_params(const FamilySpec& spec, Rng& rng);
/// Finite set of operators (members, plus V0 elements for KernelExtended)
/// whose span equals the span of the family.
std::vector<Matrix> spanning_members(const FamilySpec& spec);
OperatorSubspace family_subspace(const FamilySpec& spec);

DensityMatrix build_markov_state(const MarkovStateSpec& spec);
DensityMatrix steer(const DensityMatrix& omega_ase, const Matrix& p_a);

struct StructureFit {
  std::vector<double> probs;
  std::vector<Matrix> states;  // rho_Li (maximally mixed when p_i ~ 0)
  double residual = 0.0;       // Frobenius norm of the unexplained part
};
StructureFit structure_fit(const Matrix& rho_se, const BlockStructure& blocks, const std::vector<Matrix>& omega_re,
                           int de);

std::vector<double> random_distribution(int n, Rng& rng);

FamilySpec random_factorized(int ds, int de, Rng& rng, int env_rank = 0);
FamilySpec random_classical_quantum(int ds, int de, Rng& rng);
FamilySpec random_direct_sum(const std::vector<int>& block_dims, int de, Rng& rng);
FamilySpec random_mixed_direct_sum(const std::vector<int>& block_dims, int split, int de, Rng& rng);
FamilySpec random_markov_blocks(const BlockStructure& blocks, int de, Rng& rng);
MarkovStateSpec random_markov_state_spec(int da, const BlockStructure& blocks, int de, Rng& rng);
FamilySpec steered_from_markov(const MarkovStateSpec& spec);
FamilySpec kernel_extended(const MarkovBlocksSpec& base, OperatorSubspace kernel, double scale = 1.0);

}  // namespace cpdyn
