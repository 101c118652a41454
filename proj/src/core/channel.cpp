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

#include "channel.hpp"

#include <cmath>

#include "subspace.hpp"

namespace cpdyn {

ChannelMap::ChannelMap(int in_dim, int out_dim, Matrix m) : in_(in_dim), out_(out_dim), m_(std::move(m)) {
  if (in_ < 1 || out_ < 1) fail(ErrorCode::InvalidArgument, "channel dimensions must be positive");
  if (m_.rows() != out_ * out_ || m_.cols() != in_ * in_)
    fail(ErrorCode::DimensionMismatch, "channel matrix must be out^2 x in^2");
}

ChannelMap ChannelMap::from_function(int in_dim, int out_dim, const std::function<Matrix(const Matrix&)>& f) {
  Matrix m(out_dim * out_dim, in_dim * in_dim);
  for (int i = 0; i < in_dim; ++i)
    for (int j = 0; j < in_dim; ++j) {
      Matrix e = Matrix::Zero(in_dim, in_dim);
      e(i, j) = 1.0;
      const Matrix y = f(e);
      if (y.rows() != out_dim || y.cols() != out_dim) fail(ErrorCode::DimensionMismatch, "channel function returned a wrongly sized operator");
      m.col(i * in_dim + j) = vec(y);
    }
  return ChannelMap(in_dim, out_dim, std::move(m));
}

ChannelMap ChannelMap::identity(int d) {
  const int d2 = d * d;
  return ChannelMap(d, d, Matrix::Identity(d2, d2));
}

ChannelMap ChannelMap::unitary(const Matrix& u) {
  if (u.rows() != u.cols()) fail(ErrorCode::DimensionMismatch, "unitary channel needs a square matrix");
  // Row-major vec(U X U^dag) = (U (x) conj U) vec(X).
  const int d = static_cast<int>(u.rows());
  return ChannelMap(d, d, kron(u, u.conjugate()));
}

Matrix ChannelMap::apply(const Matrix& x) const {
  if (x.rows() != in_ || x.cols() != in_) fail(ErrorCode::DimensionMismatch, "channel input size mismatch");
  return unvec(m_ * vec(x), out_, out_);
}

ChannelMap ChannelMap::after(const ChannelMap& first) const {
  if (first.out_dim() != in_) fail(ErrorCode::DimensionMismatch, "channel composition dimension mismatch");
  return ChannelMap(first.in_dim(), out_, m_ * first.matrix());
}

ChoiMatrix::ChoiMatrix(int in_dim, int out_dim, Matrix m) : in_(in_dim), out_(out_dim), m_(std::move(m)) {
  if (m_.rows() != in_ * out_ || m_.cols() != in_ * out_) fail(ErrorCode::DimensionMismatch, "Choi matrix must be (in*out) square");
}

ChoiMatrix choi(const ChannelMap& c) {
  const int in = c.in_dim();
  const int out = c.out_dim();
  Matrix m(in * out, in * out);
  for (int i = 0; i < in; ++i)
    for (int j = 0; j < in; ++j)
      for (int a = 0; a < out; ++a)
        for (int b = 0; b < out; ++b) m(i * out + a, j * out + b) = c.matrix()(a * out + b, i * in + j);
  return ChoiMatrix(in, out, std::move(m));
}

ChannelMap channel_from_choi(const ChoiMatrix& ch) {
  const int in = ch.in_dim();
  const int out = ch.out_dim();
  Matrix m(out * out, in * in);
  for (int i = 0; i < in; ++i)
    for (int j = 0; j < in; ++j)
      for (int a = 0; a < out; ++a)
        for (int b = 0; b < out; ++b) m(a * out + b, i * in + j) = ch.matrix()(i * out + a, j * out + b);
  return ChannelMap(in, out, std::move(m));
}

double min_choi_eigenvalue(const ChoiMatrix& ch) { return min_eigenvalue(ch.matrix()); }

bool is_cp(const ChoiMatrix& ch, double rel_tol) { return is_psd(ch.matrix(), rel_tol); }

bool is_cp(const ChannelMap& c, double rel_tol) { return is_cp(choi(c), rel_tol); }

double tp_error(const ChannelMap& c) {
  const Matrix tr = trace_second(choi(c).matrix(), c.in_dim(), c.out_dim());
  return (tr - Matrix::Identity(c.in_dim(), c.in_dim())).norm();
}

bool is_tp(const ChannelMap& c, double tol) { return tp_error(c) <= tol; }

bool is_hermitian_preserving(const ChannelMap& c, double rel_tol) { return is_hermitian(choi(c).matrix(), rel_tol); }

double choi_distance(const ChannelMap& a, const ChannelMap& b) {
  if (a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim()) fail(ErrorCode::DimensionMismatch, "choi_distance: channel shapes differ");
  // The Choi matrix is a permutation of the channel matrix.
  return (a.matrix() - b.matrix()).norm();
}

// --- Kraus -----------------------------------------------------------------

Matrix KrausSet::apply(const Matrix& x) const {
  Matrix y = Matrix::Zero(out_dim, out_dim);
  for (const auto& t : terms) y += t.coeff * t.op * x * t.op.adjoint();
  return y;
}

ChannelMap KrausSet::to_channel() const {
  Matrix m = Matrix::Zero(out_dim * out_dim, in_dim * in_dim);
  for (const auto& t : terms) m += t.coeff * kron(t.op, t.op.conjugate());
  return ChannelMap(in_dim, out_dim, std::move(m));
}

Matrix KrausSet::closure() const {
  Matrix c = Matrix::Zero(in_dim, in_dim);
  for (const auto& t : terms) c += t.coeff * t.op.adjoint() * t.op;
  return c;
}

double KrausSet::closure_error() const { return (closure() - Matrix::Identity(in_dim, in_dim)).norm(); }

KrausSet kraus_from_choi(const ChoiMatrix& ch) {
  if (!is_hermitian(ch.matrix())) fail(ErrorCode::NotHermitian, "kraus_from_choi: Choi matrix is not Hermitian");
  const int in = ch.in_dim();
  const int out = ch.out_dim();
  const auto spec = eig_hermitian(ch.matrix());
  KrausSet k;
  k.in_dim = in;
  k.out_dim = out;
  for (Eigen::Index n = 0; n < spec.values.size(); ++n) {
    const double e = spec.values(n);
    if (std::abs(e) <= kRankTol * in) continue;
    Matrix op(out, in);
    for (int i = 0; i < in; ++i)
      for (int a = 0; a < out; ++a) op(a, i) = spec.vectors(i * out + a, n);
    k.terms.push_back({e, std::move(op)});
    if (e < 0) k.all_positive = false;
  }
  return k;
}

KrausSet kraus_factorized(const Matrix& u, const Matrix& omega_e, int ds) {
  const int de = static_cast<int>(omega_e.rows());
  if (u.rows() != ds * de || u.cols() != ds * de) fail(ErrorCode::DimensionMismatch, "kraus_factorized: U must act on S (x) E");
  const auto env = eig_hermitian(omega_e);
  KrausSet k;
  k.in_dim = ds;
  k.out_dim = ds;
  for (int l = 0; l < de; ++l) {
    const double lambda = env.values(l);
    if (lambda <= kRankTol * ds) continue;
    const Vector mu = env.vectors.col(l);
    for (int kk = 0; kk < de; ++kk) {
      // <k_E| U |mu_l>, an operator on H_S.
      Matrix op = Matrix::Zero(ds, ds);
      for (int s = 0; s < ds; ++s)
        for (int t = 0; t < ds; ++t)
          for (int e = 0; e < de; ++e) op(s, t) += u(s * de + kk, t * de + e) * mu(e);
      k.terms.push_back({lambda, std::move(op)});
    }
  }
  return k;
}

KrausSet kraus_factorized(const UnitaryOperator& u, const DensityMatrix& omega_e) {
  const int de = omega_e.dim();
  if (u.dim() % de != 0) fail(ErrorCode::DimensionMismatch, "kraus_factorized: dim(U) is not a multiple of dim(E)");
  return kraus_factorized(u.matrix(), omega_e.matrix(), u.dim() / de);
}

KrausSet kraus_classical_quantum(const Matrix& u, const ClassicalQuantumSpec& spec) {
  const int ds = static_cast<int>(spec.basis.rows());
  KrausSet k;
  k.in_dim = ds;
  k.out_dim = ds;
  for (int i = 0; i < ds; ++i) {
    const Vector w = spec.basis.col(i);
    const Matrix proj = w * w.adjoint();
    const KrausSet d = kraus_factorized(u, spec.omegas[i], ds);
    for (const auto& t : d.terms) k.terms.push_back({t.coeff, t.op * proj});
  }
  return k;
}

// --- assignments -------------------------------------------------------------

AssignmentMap::AssignmentMap(int ds, int de, Matrix m, std::optional<Matrix> domain)
    : ds_(ds), de_(de), map_(ds, ds * de, std::move(m)) {
  domain_ = domain ? std::move(*domain) : Matrix(Matrix::Identity(ds * ds, ds * ds));
  if (domain_.rows() != ds * ds) fail(ErrorCode::DimensionMismatch, "assignment domain basis must have ds^2 rows");
  const Matrix t = trace_e_superop(ds, de);
  trace_error_ = domain_.cols() == 0 ? 0.0 : (t * map_.matrix() * domain_ - domain_).norm();
  const ChoiMatrix c = choi(map_);
  hermitian_ = is_hermitian(c.matrix());
  min_eig_ = min_eigenvalue(c.matrix());
  cp_ = hermitian_ && is_psd(c.matrix());
}

AssignmentMap AssignmentMap::from_function(int ds, int de, const std::function<Matrix(const Matrix&)>& f,
                                           std::optional<Matrix> domain) {
  ChannelMap c = ChannelMap::from_function(ds, ds * de, f);
  return AssignmentMap(ds, de, c.matrix(), std::move(domain));
}

AssignmentMap product_assignment(const Matrix& omega_e, int ds) {
  const int de = static_cast<int>(omega_e.rows());
  return AssignmentMap::from_function(ds, de, [&](const Matrix& x) { return kron(x, omega_e); });
}

AssignmentMap markov_assignment(const MarkovForm& form) {
  const int ds = form.ds();
  const int de = form.de;
  const auto offsets = block_offsets(form.blocks);
  const Matrix w_se = kron(form.frame, Matrix::Identity(de, de));

  // Physical domain: W [(+)_i L(H_Li) (x) w_Ri] W^dag.
  std::vector<Matrix> marg;
  for (const auto& o : form.omega_re) marg.push_back(trace_second(o, static_cast<int>(o.rows()) / de, de));
  Matrix span_cols(ds * ds, 0);
  for (size_t i = 0; i < form.blocks.size(); ++i) {
    const int dl = form.blocks[i].left;
    for (int a = 0; a < dl; ++a)
      for (int b = 0; b < dl; ++b) {
        Matrix e = Matrix::Zero(dl, dl);
        e(a, b) = 1.0;
        Matrix x = Matrix::Zero(ds, ds);
        x.block(offsets[i], offsets[i], form.blocks[i].dim(), form.blocks[i].dim()) = kron(e, marg[i]);
        span_cols.conservativeResize(Eigen::NoChange, span_cols.cols() + 1);
        span_cols.col(span_cols.cols() - 1) = vec(form.frame * x * form.frame.adjoint());
      }
  }

  auto f = [&](const Matrix& x) {
    const Matrix y = form.frame.adjoint() * x * form.frame;
    std::vector<Matrix> left;
    for (size_t i = 0; i < form.blocks.size(); ++i) {
      const Block& b = form.blocks[i];
      const Matrix sub = y.block(offsets[i], offsets[i], b.dim(), b.dim());
      left.push_back(trace_second(sub, b.left, b.right));
    }
    return Matrix(w_se * embed_blocks(form.blocks, de, left, form.omega_re) * w_se.adjoint());
  };
  return AssignmentMap::from_function(ds, de, f, orthonormal_range(span_cols));
}

AssignmentMap family_assignment(const FamilySpec& spec) { return markov_assignment(to_markov_form(spec)); }

Matrix evolve_reduced(const Matrix& u, const Matrix& rho_se, int ds, int de) {
  return trace_second(conjugate(u, rho_se), ds, de);
}

ChannelMap reduced_dynamics(const Matrix& u, const AssignmentMap& assign) {
  const int ds = assign.ds();
  const int de = assign.de();
  if (u.rows() != ds * de || u.cols() != ds * de) fail(ErrorCode::DimensionMismatch, "reduced_dynamics: U must act on S (x) E");
  const int n = ds * de;
  Matrix m(ds * ds, ds * ds);
  for (int c = 0; c < ds * ds; ++c) {
    const Matrix x = unvec(assign.matrix().col(c), n, n);
    m.col(c) = vec(evolve_reduced(u, x, ds, de));
  }
  return ChannelMap(ds, ds, std::move(m));
}

ChannelMap reduced_dynamics(const UnitaryOperator& u, const AssignmentMap& assign) { return reduced_dynamics(u.matrix(), assign); }

// --- dilation ------------------------------------------------------------------

Matrix StinespringDilation::apply(const Matrix& x) const {
  if (x.rows() != in_dim || x.cols() != in_dim) fail(ErrorCode::DimensionMismatch, "dilation input size mismatch");
  const int stride = env_dim * ancilla_dim;
  const int n = in_dim * stride;
  const int zero = zero_e * ancilla_dim + zero_c;
  Matrix big = Matrix::Zero(n, n);
  for (int s = 0; s < in_dim; ++s)
    for (int t = 0; t < in_dim; ++t) big(s * stride + zero, t * stride + zero) = x(s, t);
  return trace_second(conjugate(v, big), in_dim * env_dim, ancilla_dim);
}

ChannelMap StinespringDilation::to_channel() const {
  return ChannelMap::from_function(in_dim, in_dim * env_dim, [this](const Matrix& x) { return apply(x); });
}

StinespringDilation stinespring(const KrausSet& k) {
  if (!k.all_positive) fail(ErrorCode::SignedKraus, "stinespring requires a positive Kraus set");
  if (k.terms.empty()) fail(ErrorCode::InvalidArgument, "stinespring: empty Kraus set");
  if (k.out_dim % k.in_dim != 0) fail(ErrorCode::DimensionMismatch, "stinespring: output dimension must be a multiple of the input");
  if (k.closure_error() > 1e-9) fail(ErrorCode::InvalidArgument, "stinespring: map is not trace preserving");

  StinespringDilation d;
  d.in_dim = k.in_dim;
  d.env_dim = k.out_dim / k.in_dim;
  d.ancilla_dim = static_cast<int>(k.terms.size());
  const int r = d.ancilla_dim;
  const int out = k.out_dim;
  const int n = out * r;

  // Isometry |s> -> sum_k (sqrt(e_k) K_k |s>) (x) |k>_C.
  Matrix w = Matrix::Zero(n, k.in_dim);
  for (int kk = 0; kk < r; ++kk) {
    const Matrix op = std::sqrt(k.terms[kk].coeff) * k.terms[kk].op;
    for (int o = 0; o < out; ++o)
      for (int s = 0; s < k.in_dim; ++s) w(o * r + kk, s) = op(o, s);
  }
  Eigen::HouseholderQR<Matrix> qr(w);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);

  d.v = Matrix::Zero(n, n);
  const int stride = d.env_dim * r;
  std::vector<bool> used(n, false);
  for (int s = 0; s < k.in_dim; ++s) {
    d.v.col(s * stride) = w.col(s);
    used[s * stride] = true;
  }
  int next = k.in_dim;
  for (int c = 0; c < n; ++c)
    if (!used[c]) d.v.col(c) = q.col(next++);
  return d;
}

double verify_fixed_point(const AssignmentMap& assign, std::span<const Matrix> samples) {
  double worst = 0.0;
  for (const auto& rho : samples) {
    const Matrix back = trace_second(assign.apply(rho), assign.ds(), assign.de());
    worst = std::max(worst, (back - rho).norm());
  }
  return worst;
}

}  // namespace cpdyn
