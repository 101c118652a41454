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

#include "subspace.hpp"

#include <cmath>

namespace cpdyn {

namespace {

// Rank-revealing QR with column pivoting. |R_kk| stands in for the k-th
// singular value: entries <= kSpanRankTol * |R_00| or <= 1e-12 are dropped.
// (Eigen 3.4's divide-and-conquer SVD loses accuracy on the heavily
// degenerate spectra produced by vectorised operator bases.)
template <class M>
struct PivotedQr {
  Eigen::ColPivHouseholderQR<M> qr;
  int rank = 0;

  explicit PivotedQr(const M& a) : qr(a) {
    const auto& r = qr.matrixQR();
    const Eigen::Index k = std::min(r.rows(), r.cols());
    if (k == 0) return;
    const double top = std::abs(r(0, 0));
    const double cut = std::max(kSpanRankTol * top, 1e-12);
    while (rank < k && std::abs(r(rank, rank)) > cut) ++rank;
  }

  M range() const {
    const Eigen::Index rows = qr.matrixQR().rows();
    M q = qr.householderQ() * M::Identity(rows, rank);
    return q;
  }

  M complement() const {
    const Eigen::Index rows = qr.matrixQR().rows();
    M q = qr.householderQ() * M::Identity(rows, rows);
    return q.rightCols(rows - rank);
  }
};

}  // namespace

OperatorSubspace::OperatorSubspace(int ds, int de, Matrix basis) : ds_(ds), de_(de), basis_(std::move(basis)) {
  if (ds < 1 || de < 1) fail(ErrorCode::InvalidArgument, "subspace dimensions must be positive");
  const int n = ds * de;
  if (basis_.rows() != n * n) fail(ErrorCode::DimensionMismatch, "subspace basis rows must equal (ds*de)^2");
  if (basis_.cols() > 0) {
    const Matrix gram = basis_.adjoint() * basis_;
    if ((gram - Matrix::Identity(gram.rows(), gram.cols())).norm() > tol::kOrthonormal * std::max(1.0, double(gram.rows())))
      fail(ErrorCode::InvalidArgument, "subspace basis is not orthonormal");
  }
}

OperatorSubspace OperatorSubspace::full(int ds, int de) {
  const int n2 = ds * de * ds * de;
  return OperatorSubspace(ds, de, Matrix::Identity(n2, n2));
}

OperatorSubspace OperatorSubspace::zero(int ds, int de) {
  const int n2 = ds * de * ds * de;
  return OperatorSubspace(ds, de, Matrix(n2, 0));
}

Matrix OperatorSubspace::element(int k) const {
  const int n = ambient_dim();
  return unvec(basis_.col(k), n, n);
}

std::vector<Matrix> OperatorSubspace::elements() const {
  std::vector<Matrix> out;
  for (int k = 0; k < dim(); ++k) out.push_back(element(k));
  return out;
}

Vector OperatorSubspace::project(const Vector& v) const {
  if (dim() == 0) return Vector::Zero(v.size());
  return basis_ * (basis_.adjoint() * v);
}

double OperatorSubspace::distance_to(const Matrix& op) const {
  const Vector v = vec(op);
  return (v - project(v)).norm();
}

double OperatorSubspace::adjoint_closure_error() const {
  double worst = 0.0;
  for (int k = 0; k < dim(); ++k) worst = std::max(worst, distance_to(element(k).adjoint()));
  return worst;
}

int numerical_rank(const Matrix& a) {
  if (a.size() == 0) return 0;
  return PivotedQr<Matrix>(a).rank;
}

Matrix orthonormal_range(const Matrix& a) {
  if (a.cols() == 0) return Matrix(a.rows(), 0);
  return PivotedQr<Matrix>(a).range();
}

Matrix orthonormal_null_space(const Matrix& a) {
  if (a.cols() == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
  // null(A) is the orthogonal complement of range(A^dagger).
  const Matrix adj = a.adjoint();
  return PivotedQr<Matrix>(adj).complement();
}

OperatorSubspace span_from_states(std::span<const Matrix> ops, int ds, int de) {
  const int n = ds * de;
  Matrix stacked(n * n, static_cast<Eigen::Index>(ops.size()));
  for (size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].rows() != n || ops[i].cols() != n) fail(ErrorCode::DimensionMismatch, "span_from_states: operator size mismatch");
    stacked.col(i) = vec(ops[i]);
  }
  return OperatorSubspace(ds, de, orthonormal_range(stacked));
}

OperatorSubspace span_sum(const OperatorSubspace& a, const OperatorSubspace& b) {
  if (a.ds() != b.ds() || a.de() != b.de()) fail(ErrorCode::DimensionMismatch, "span_sum: ambient spaces differ");
  Matrix stacked(a.basis().rows(), a.dim() + b.dim());
  stacked << a.basis(), b.basis();
  return OperatorSubspace(a.ds(), a.de(), orthonormal_range(stacked));
}

Matrix trace_e_superop(int ds, int de) {
  const int n = ds * de;
  Matrix t = Matrix::Zero(ds * ds, n * n);
  for (int a = 0; a < ds; ++a)
    for (int b = 0; b < ds; ++b)
      for (int e = 0; e < de; ++e) t(a * ds + b, (a * de + e) * n + (b * de + e)) = 1.0;
  return t;
}

Matrix trace_s_superop(int ds, int de) {
  const int n = ds * de;
  Matrix t = Matrix::Zero(de * de, n * n);
  for (int e = 0; e < de; ++e)
    for (int f = 0; f < de; ++f)
      for (int s = 0; s < ds; ++s) t(e * de + f, (s * de + e) * n + (s * de + f)) = 1.0;
  return t;
}

OperatorSubspace kernel_tr_e(const OperatorSubspace& v) {
  if (v.dim() == 0) return v;
  const Matrix m = trace_e_superop(v.ds(), v.de()) * v.basis();
  const Matrix z = orthonormal_null_space(m);
  return OperatorSubspace(v.ds(), v.de(), v.basis() * z);
}

int marginal_dim(const OperatorSubspace& v) {
  if (v.dim() == 0) return 0;
  return numerical_rank(trace_e_superop(v.ds(), v.de()) * v.basis());
}

std::vector<Matrix> hermitian_basis(const OperatorSubspace& v) {
  const int n = v.ambient_dim();
  const int n2 = n * n;
  if (v.dim() == 0) return {};
  // Real coordinates (Re vec, Im vec) of the Hermitian and anti-Hermitian parts.
  Eigen::MatrixXd real(2 * n2, 2 * v.dim());
  for (int k = 0; k < v.dim(); ++k) {
    const Matrix b = v.element(k);
    const Vector h1 = vec(0.5 * (b + b.adjoint()));
    const Vector h2 = vec((b - b.adjoint()) / cplx(0.0, 2.0));
    real.col(2 * k) << h1.real(), h1.imag();
    real.col(2 * k + 1) << h2.real(), h2.imag();
  }
  const Eigen::MatrixXd range = PivotedQr<Eigen::MatrixXd>(real).range();
  std::vector<Matrix> out;
  for (Eigen::Index k = 0; k < range.cols(); ++k) {
    const Eigen::VectorXd u = range.col(k);
    Vector c(n2);
    for (int i = 0; i < n2; ++i) c(i) = cplx(u(i), u(n2 + i));
    out.push_back(hermitian_part(unvec(c, n, n)));
  }
  return out;
}

std::vector<Matrix> hermitian_operator_basis(int d) {
  std::vector<Matrix> out;
  const double r = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < d; ++a) out.push_back(basis_projector(d, a));
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      Matrix x = Matrix::Zero(d, d);
      x(a, b) = r;
      x(b, a) = r;
      out.push_back(x);
      Matrix y = Matrix::Zero(d, d);
      y(a, b) = cplx(0.0, -r);
      y(b, a) = cplx(0.0, r);
      out.push_back(y);
    }
  return out;
}

std::vector<Matrix> spanning_pure_states(int d) {
  std::vector<Matrix> out;
  for (int a = 0; a < d; ++a) out.push_back(basis_projector(d, a));
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      Vector plus = Vector::Zero(d);
      plus(a) = 1.0;
      plus(b) = 1.0;
      out.push_back(pure_state(plus));
      Vector iplus = Vector::Zero(d);
      iplus(a) = 1.0;
      iplus(b) = cplx(0.0, 1.0);
      out.push_back(pure_state(iplus));
    }
  return out;
}

}  // namespace cpdyn
