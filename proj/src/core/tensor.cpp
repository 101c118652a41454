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

#include "tensor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace cpdyn {

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

namespace {

bool valid_label(std::string_view s) {
  if (s == "A" || s == "S" || s == "E" || s == "C") return true;
  if (s.size() < 2 || (s[0] != 'L' && s[0] != 'R')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

int block_total(const BlockStructure& blocks) {
  int total = 0;
  for (const auto& b : blocks) total += b.dim();
  return total;
}

std::vector<int> block_offsets(const BlockStructure& blocks) {
  std::vector<int> out;
  out.reserve(blocks.size());
  int off = 0;
  for (const auto& b : blocks) {
    out.push_back(off);
    off += b.dim();
  }
  return out;
}

bool operator==(const Factor& a, const Factor& b) { return a.label == b.label && a.dim == b.dim; }
bool operator==(const Block& a, const Block& b) { return a.left == b.left && a.right == b.right; }

SpaceLayout::SpaceLayout(std::vector<Factor> factors, std::optional<BlockStructure> blocks)
    : factors_(std::move(factors)), blocks_(std::move(blocks)) {
  if (factors_.empty()) fail(ErrorCode::InvalidArgument, "layout needs at least one factor");
  std::set<std::string> seen;
  for (const auto& f : factors_) {
    if (!valid_label(f.label)) fail(ErrorCode::InvalidArgument, "invalid factor label '" + f.label + "'");
    if (f.dim < 1) fail(ErrorCode::InvalidArgument, "factor '" + f.label + "' has non-positive dimension");
    if (!seen.insert(f.label).second) fail(ErrorCode::InvalidArgument, "duplicate factor label '" + f.label + "'");
  }
  if (blocks_) {
    if (!has("S")) fail(ErrorCode::InvalidArgument, "block structure requires an S factor");
    for (const auto& b : *blocks_)
      if (b.left < 1 || b.right < 1) fail(ErrorCode::InvalidArgument, "block dimensions must be positive");
    if (block_total(*blocks_) != dim_of("S"))
      fail(ErrorCode::DimensionMismatch, "block dimensions do not sum to dim(S)");
  }
}

SpaceLayout SpaceLayout::single(std::string label, int dim) { return SpaceLayout({{std::move(label), dim}}); }

SpaceLayout SpaceLayout::bipartite(std::string a, int da, std::string b, int db) {
  return SpaceLayout({{std::move(a), da}, {std::move(b), db}});
}

std::vector<int> SpaceLayout::dims() const {
  std::vector<int> d;
  d.reserve(factors_.size());
  for (const auto& f : factors_) d.push_back(f.dim);
  return d;
}

int SpaceLayout::total_dim() const {
  int n = 1;
  for (const auto& f : factors_) n *= f.dim;
  return n;
}

bool SpaceLayout::has(std::string_view label) const {
  return std::any_of(factors_.begin(), factors_.end(), [&](const Factor& f) { return f.label == label; });
}

int SpaceLayout::position_of(std::string_view label) const {
  for (size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return static_cast<int>(i);
  fail(ErrorCode::UnknownFactor, "unknown factor label '" + std::string(label) + "'");
}

int SpaceLayout::dim_of(std::string_view label) const { return factors_[position_of(label)].dim; }

SpaceLayout SpaceLayout::concat(const SpaceLayout& other) const {
  std::vector<Factor> f = factors_;
  f.insert(f.end(), other.factors_.begin(), other.factors_.end());
  auto blocks = blocks_ ? blocks_ : other.blocks_;
  return SpaceLayout(std::move(f), std::move(blocks));
}

bool SpaceLayout::operator==(const SpaceLayout& o) const { return factors_ == o.factors_ && blocks_ == o.blocks_; }

Operator::Operator(SpaceLayout layout, Matrix entries) : layout_(std::move(layout)), m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) fail(ErrorCode::DimensionMismatch, "operator matrix must be square");
  if (m_.rows() != layout_.total_dim()) {
    std::ostringstream os;
    os << "operator has " << m_.rows() << " rows but layout dimension is " << layout_.total_dim();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

DensityMatrix DensityMatrix::from(Operator op) {
  const Matrix& m = op.matrix();
  if (!is_hermitian(m)) fail(ErrorCode::NotHermitian, "density matrix is not Hermitian");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol::kTrace) fail(ErrorCode::InvalidArgument, "density matrix trace differs from 1");
  if (!is_psd(hermitian_part(m))) fail(ErrorCode::NotPsd, "density matrix has a negative eigenvalue");
  return DensityMatrix(std::move(op));
}

UnitaryOperator UnitaryOperator::from(Operator op) {
  if (!is_unitary(op.matrix())) fail(ErrorCode::NotUnitary, "operator is not unitary");
  return UnitaryOperator(std::move(op));
}

// ---------------------------------------------------------------------------

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix partial_trace(const Matrix& m, std::span<const int> dims, std::span<const int> keep) {
  const int nf = static_cast<int>(dims.size());
  std::vector<bool> kept(nf, false);
  for (int k : keep) {
    if (k < 0 || k >= nf) fail(ErrorCode::UnknownFactor, "partial trace position out of range");
    kept[k] = true;
  }
  int n = 1, dk = 1;
  for (int i = 0; i < nf; ++i) {
    n *= dims[i];
    if (kept[i]) dk *= dims[i];
  }
  if (m.rows() != n || m.cols() != n) fail(ErrorCode::DimensionMismatch, "partial trace dimension mismatch");

  // Split every full index into (kept, traced) mixed-radix parts.
  std::vector<int> kidx(n), tidx(n);
  for (int i = 0; i < n; ++i) {
    int rem = i, kpart = 0, tpart = 0, kmul = 1, tmul = 1;
    for (int f = nf - 1; f >= 0; --f) {
      const int digit = rem % dims[f];
      rem /= dims[f];
      if (kept[f]) {
        kpart += digit * kmul;
        kmul *= dims[f];
      } else {
        tpart += digit * tmul;
        tmul *= dims[f];
      }
    }
    kidx[i] = kpart;
    tidx[i] = tpart;
  }
  Matrix out = Matrix::Zero(dk, dk);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (tidx[i] == tidx[j]) out(kidx[i], kidx[j]) += m(i, j);
  return out;
}

Matrix trace_second(const Matrix& m, int d1, int d2) {
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2) fail(ErrorCode::DimensionMismatch, "trace_second dimension mismatch");
  Matrix out = Matrix::Zero(d1, d1);
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d1; ++b) {
      cplx s = 0;
      for (int e = 0; e < d2; ++e) s += m(a * d2 + e, b * d2 + e);
      out(a, b) = s;
    }
  return out;
}

Matrix trace_first(const Matrix& m, int d1, int d2) {
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2) fail(ErrorCode::DimensionMismatch, "trace_first dimension mismatch");
  Matrix out = Matrix::Zero(d2, d2);
  for (int s = 0; s < d1; ++s) out += m.block(s * d2, s * d2, d2, d2);
  return out;
}

Matrix conjugate(const Matrix& u, const Matrix& m) {
  if (u.cols() != m.rows() || m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "conjugation dimension mismatch");
  return u * m * u.adjoint();
}

Matrix swap_unitary(int d) {
  Matrix u = Matrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) u(b * d + a, a * d + b) = 1.0;
  return u;
}

double hermiticity_error(const Matrix& m) { return (m - m.adjoint()).norm(); }

bool is_hermitian(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  return hermiticity_error(m) <= rel_tol * std::max(1.0, m.norm());
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

RealVector eigenvalues_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

double min_eigenvalue(const Matrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

bool is_psd(const Matrix& hermitian, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = std::max({1.0, std::abs(ev(0)), std::abs(ev(ev.size() - 1))});
  return ev(0) >= -rel_tol * scale;
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  return (u * u.adjoint() - id).norm() <= tol * std::max<double>(1.0, std::sqrt(double(u.rows())));
}

SpectralDecomposition eig_hermitian(const Matrix& m) {
  if (!is_hermitian(m)) fail(ErrorCode::NotHermitian, "eig_hermitian: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  SpectralDecomposition out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

Matrix random_ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

Matrix random_hermitian(int dim, Rng& rng) { return hermitian_part(random_ginibre(dim, dim, rng)); }

Matrix haar_unitary(int dim, Rng& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0 ? d / a : cplx(1.0));
  }
  return q;
}

Matrix random_density_matrix(int dim, int rank, Rng& rng) {
  if (rank < 1 || rank > dim) fail(ErrorCode::InvalidArgument, "random density: rank must lie in [1, dim]");
  const Matrix g = random_ginibre(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

Matrix basis_projector(int dim, int i) {
  Matrix p = Matrix::Zero(dim, dim);
  p(i, i) = 1.0;
  return p;
}

Matrix pure_state(const Vector& psi) {
  const Vector v = psi / psi.norm();
  return v * v.adjoint();
}

double entropy_from_spectrum(const RealVector& eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues)
    if (l > 1e-12) s -= l * std::log(l);
  return s;
}

double von_neumann_entropy(const Matrix& rho) { return entropy_from_spectrum(eigenvalues_hermitian(rho)); }

Vector vec(const Matrix& m) {
  Vector v(m.size());
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) v(a * m.cols() + b) = m(a, b);
  return v;
}

Matrix unvec(const Vector& v, int rows, int cols) {
  if (v.size() != Eigen::Index(rows) * cols) fail(ErrorCode::DimensionMismatch, "unvec size mismatch");
  Matrix m(rows, cols);
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b) m(a, b) = v(a * cols + b);
  return m;
}

// ---------------------------------------------------------------------------

Operator kron(const Operator& a, const Operator& b) {
  return Operator(a.layout().concat(b.layout()), kron(a.matrix(), b.matrix()));
}

Operator partial_trace(const Operator& m, std::span<const std::string> keep) {
  const auto& layout = m.layout();
  std::vector<int> positions;
  for (const auto& label : keep) positions.push_back(layout.position_of(label));
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  std::vector<Factor> kept;
  for (int p : positions) kept.push_back(layout.factors()[p]);
  if (kept.empty()) fail(ErrorCode::InvalidArgument, "partial trace must keep at least one factor");
  std::optional<BlockStructure> blocks;
  if (layout.blocks() && std::any_of(kept.begin(), kept.end(), [](const Factor& f) { return f.label == "S"; }))
    blocks = layout.blocks();
  const auto dims = layout.dims();
  return Operator(SpaceLayout(std::move(kept), std::move(blocks)), partial_trace(m.matrix(), dims, positions));
}

Operator ad_u(const UnitaryOperator& u, const Operator& m) {
  if (u.dim() != m.dim()) fail(ErrorCode::DimensionMismatch, "ad_u: unitary and operator dimensions differ");
  return Operator(m.layout(), conjugate(u.matrix(), m.matrix()));
}

SpectralDecomposition eig_hermitian(const Operator& m) { return eig_hermitian(m.matrix()); }

UnitaryOperator random_haar_unitary(const SpaceLayout& layout, Rng& rng) {
  return UnitaryOperator::from(layout, haar_unitary(layout.total_dim(), rng));
}

UnitaryOperator random_haar_unitary(int dim, Rng& rng) { return random_haar_unitary(SpaceLayout::single("S", dim), rng); }

DensityMatrix random_density(const SpaceLayout& layout, int rank, Rng& rng) {
  return DensityMatrix::from(layout, random_density_matrix(layout.total_dim(), rank, rng));
}

DensityMatrix random_density(int dim, int rank, Rng& rng) { return random_density(SpaceLayout::single("S", dim), rank, rng); }

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

}  // namespace cpdyn
