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

#include <functional>
#include <span>
#include <vector>

#include "families.hpp"
#include "tensor.hpp"

namespace cpdyn {

/// Choi eigenvalues with |e| <= kRankTol * d_in are discarded by kraus_from_choi.
inline constexpr double kRankTol = 1e-10;

/// Linear map L(C^in) -> L(C^out) acting on row-major vectorised operators.
/// Column i*in + j holds vec(Psi(|i><j|)).
class ChannelMap {
 public:
  ChannelMap(int in_dim, int out_dim, Matrix m);

  static ChannelMap from_function(int in_dim, int out_dim, const std::function<Matrix(const Matrix&)>& f);
  static ChannelMap identity(int d);
  static ChannelMap unitary(const Matrix& u);

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  const Matrix& matrix() const { return m_; }

  Matrix apply(const Matrix& x) const;
  /// this after `first`
  ChannelMap after(const ChannelMap& first) const;

 private:
  int in_;
  int out_;
  Matrix m_;
};

/// C = sum_ij |i><j| (x) Psi(|i><j|), unnormalised; input factor first.
class ChoiMatrix {
 public:
  ChoiMatrix(int in_dim, int out_dim, Matrix m);
  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  const Matrix& matrix() const { return m_; }

 private:
  int in_;
  int out_;
  Matrix m_;
};

ChoiMatrix choi(const ChannelMap& c);
ChannelMap channel_from_choi(const ChoiMatrix& ch);
double min_choi_eigenvalue(const ChoiMatrix& ch);
bool is_cp(const ChoiMatrix& ch, double rel_tol = tol::kPsd);
bool is_cp(const ChannelMap& c, double rel_tol = tol::kPsd);
/// || Tr_out(C) - I_in ||_F
double tp_error(const ChannelMap& c);
bool is_tp(const ChannelMap& c, double tol = 1e-9);
bool is_hermitian_preserving(const ChannelMap& c, double rel_tol = tol::kHermitian);
/// Frobenius norm of the Choi difference.
double choi_distance(const ChannelMap& a, const ChannelMap& b);

struct KrausTerm {
  double coeff = 1.0;
  Matrix op;  // out x in
};

/// Signed operator sum x -> sum_i e_i K_i x K_i^dagger.
struct KrausSet {
  int in_dim = 1;
  int out_dim = 1;
  std::vector<KrausTerm> terms;
  bool all_positive = true;

  Matrix apply(const Matrix& x) const;
  ChannelMap to_channel() const;
  Matrix closure() const;  // sum_i e_i K_i^dagger K_i
  double closure_error() const;
};

KrausSet kraus_from_choi(const ChoiMatrix& ch);
KrausSet kraus_factorized(const Matrix& u, const Matrix& omega_e, int ds);
KrausSet kraus_factorized(const UnitaryOperator& u, const DensityMatrix& omega_e);
KrausSet kraus_classical_quantum(const Matrix& u, const ClassicalQuantumSpec& spec);

/// Linear map L(H_S) -> L(H_S (x) H_E) with its physical domain Tr_E(V).
class AssignmentMap {
 public:
  /// `domain` holds orthonormal columns of vectorised L(H_S) operators; an
  /// empty optional means the whole of L(H_S).
  AssignmentMap(int ds, int de, Matrix m, std::optional<Matrix> domain = std::nullopt);
  static AssignmentMap from_function(int ds, int de, const std::function<Matrix(const Matrix&)>& f,
                                     std::optional<Matrix> domain = std::nullopt);

  int ds() const { return ds_; }
  int de() const { return de_; }
  const ChannelMap& map() const { return map_; }
  const Matrix& matrix() const { return map_.matrix(); }
  const Matrix& domain() const { return domain_; }
  Matrix apply(const Matrix& x) const { return map_.apply(x); }

  /// Tr_E o Lambda = id on the domain.
  bool trace_consistent() const { return trace_error_ <= 1e-9; }
  double trace_consistency_error() const { return trace_error_; }
  bool hermitian() const { return hermitian_; }
  bool cp() const { return cp_; }
  double min_choi_eigenvalue() const { return min_eig_; }

 private:
  int ds_;
  int de_;
  ChannelMap map_;
  Matrix domain_;
  double trace_error_ = 0.0;
  bool hermitian_ = false;
  bool cp_ = false;
  double min_eig_ = 0.0;
};

/// x -> x (x) w_E
AssignmentMap product_assignment(const Matrix& omega_e, int ds);
/// (W (x) I)[(+)_i Tr_Ri(P_i W^dag x W P_i) (x) w_RiE](W (x) I)^dag, the
/// explicit CP assignment of a Markov block family.
AssignmentMap markov_assignment(const MarkovForm& form);
AssignmentMap family_assignment(const FamilySpec& spec);

/// Tr_E o Ad_U o Lambda
ChannelMap reduced_dynamics(const Matrix& u, const AssignmentMap& assign);
ChannelMap reduced_dynamics(const UnitaryOperator& u, const AssignmentMap& assign);
/// Tr_E(U rho U^dagger) for a single state on S (x) E.
Matrix evolve_reduced(const Matrix& u, const Matrix& rho_se, int ds, int de);

/// Lambda(x) = Tr_C(V (x (x) |0_E><0_E| (x) |0_C><0_C|) V^dagger); the map
/// sends L(C^in) to L(C^(in*env)).
struct StinespringDilation {
  int in_dim = 1;
  int env_dim = 1;
  int ancilla_dim = 1;
  int zero_e = 0;
  int zero_c = 0;
  Matrix v;

  Matrix apply(const Matrix& x) const;
  ChannelMap to_channel() const;
};

StinespringDilation stinespring(const KrausSet& k);
/// max over samples of || Tr_E(Lambda(rho)) - rho ||_F
double verify_fixed_point(const AssignmentMap& assign, std::span<const Matrix> samples);

}  // namespace cpdyn
