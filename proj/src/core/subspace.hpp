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

#include <span>
#include <vector>

#include "tensor.hpp"

namespace cpdyn {

// Singular values at or below this fraction of the largest are dropped when
// counting the dimension of a span.
inline constexpr double kSpanRankTol = 1e-9;

/// Subspace of L(H_S (x) H_E), stored as orthonormal columns of row-major
/// vectorised operators.
class OperatorSubspace {
 public:
  OperatorSubspace(int ds, int de, Matrix basis);

  static OperatorSubspace full(int ds, int de);
  static OperatorSubspace zero(int ds, int de);

  int ds() const { return ds_; }
  int de() const { return de_; }
  int ambient_dim() const { return ds_ * de_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }

  Matrix element(int k) const;
  std::vector<Matrix> elements() const;
  /// Norm of the component of `op` orthogonal to the subspace.
  double distance_to(const Matrix& op) const;
  Vector project(const Vector& v) const;
  /// Worst distance of an adjoint of a basis element from the span.
  double adjoint_closure_error() const;

 private:
  int ds_;
  int de_;
  Matrix basis_;
};

/// Orthonormal basis of the columns of `a` (numerical rank by kSpanRankTol).
Matrix orthonormal_range(const Matrix& a);
/// Orthonormal basis of the null space of `a` (same threshold).
Matrix orthonormal_null_space(const Matrix& a);
int numerical_rank(const Matrix& a);

OperatorSubspace span_from_states(std::span<const Matrix> ops, int ds, int de);
OperatorSubspace span_sum(const OperatorSubspace& a, const OperatorSubspace& b);

/// Matrix of Tr_E acting on row-major vectorised operators: ds^2 x (ds*de)^2.
Matrix trace_e_superop(int ds, int de);
/// Matrix of Tr_S on vectorised operators: de^2 x (ds*de)^2.
Matrix trace_s_superop(int ds, int de);

/// V0 = V intersected with ker Tr_E.
OperatorSubspace kernel_tr_e(const OperatorSubspace& v);
/// dim Tr_E(V).
int marginal_dim(const OperatorSubspace& v);

/// Real-orthonormal Hermitian operators spanning the Hermitian part of a
/// subspace that is closed under the adjoint.
std::vector<Matrix> hermitian_basis(const OperatorSubspace& v);
/// Hermitian operator basis of L(C^d), orthonormal in tr(AB).
std::vector<Matrix> hermitian_operator_basis(int d);
/// Pure states whose span is all of L(C^d): |a><a|, |a+b>, |a+ib>.
std::vector<Matrix> spanning_pure_states(int d);

}  // namespace cpdyn
