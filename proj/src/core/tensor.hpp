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

#include <complex>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cpdyn {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

// Numerical thresholds shared by every module.
namespace tol {
inline constexpr double kPsd = 1e-9;        // relative to max(1, spectral norm)
inline constexpr double kHermitian = 1e-9;  // relative to max(1, ||M||_F)
inline constexpr double kTrace = 1e-9;
inline constexpr double kUnitary = 1e-9;
inline constexpr double kOrthonormal = 1e-9;
}  // namespace tol

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch,
  UnknownFactor,
  NotHermitian,
  NotPsd,
  NotUnitary,
  InvalidDistribution,
  ZeroNormalization,
  SignedKraus,
  OutOfKernel,
  Parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

struct Factor {
  std::string label;  // A, S, E, C, L<i> or R<i>
  int dim = 1;
};

/// One summand L_i (x) R_i of a direct-sum decomposition of the system space.
struct Block {
  int left = 1;
  int right = 1;
  int dim() const { return left * right; }
};
using BlockStructure = std::vector<Block>;

int block_total(const BlockStructure& blocks);
/// Offset of each block inside the concatenated basis.
std::vector<int> block_offsets(const BlockStructure& blocks);

/// Ordered tensor factors with an optional direct-sum split of the S factor.
/// Basis ordering is row-major over factors (last factor varies fastest);
/// blocks are concatenated in declaration order, row-major inside L (x) R.
class SpaceLayout {
 public:
  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<Factor> factors,
                       std::optional<BlockStructure> blocks = std::nullopt);

  static SpaceLayout single(std::string label, int dim);
  static SpaceLayout bipartite(std::string a, int da, std::string b, int db);

  const std::vector<Factor>& factors() const { return factors_; }
  const std::optional<BlockStructure>& blocks() const { return blocks_; }
  std::vector<int> dims() const;
  int total_dim() const;
  bool has(std::string_view label) const;
  int position_of(std::string_view label) const;  // throws UnknownFactor
  int dim_of(std::string_view label) const;
  SpaceLayout concat(const SpaceLayout& other) const;

  bool operator==(const SpaceLayout&) const;

 private:
  std::vector<Factor> factors_;
  std::optional<BlockStructure> blocks_;
};

bool operator==(const Factor& a, const Factor& b);
bool operator==(const Block& a, const Block& b);

class Operator {
 public:
  Operator(SpaceLayout layout, Matrix entries);

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  SpaceLayout layout_;
  Matrix m_;
};

/// Hermitian, unit trace, PSD up to the scale-aware tolerance.
class DensityMatrix {
 public:
  static DensityMatrix from(Operator op);
  static DensityMatrix from(SpaceLayout layout, Matrix m) { return from(Operator(std::move(layout), std::move(m))); }

  const Operator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const SpaceLayout& layout() const { return op_.layout(); }
  int dim() const { return op_.dim(); }

 private:
  explicit DensityMatrix(Operator op) : op_(std::move(op)) {}
  Operator op_;
};

class UnitaryOperator {
 public:
  static UnitaryOperator from(Operator op);
  static UnitaryOperator from(SpaceLayout layout, Matrix m) { return from(Operator(std::move(layout), std::move(m))); }

  const Operator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const SpaceLayout& layout() const { return op_.layout(); }
  int dim() const { return op_.dim(); }

 private:
  explicit UnitaryOperator(Operator op) : op_(std::move(op)) {}
  Operator op_;
};

struct SpectralDecomposition {
  RealVector values;  // descending
  Matrix vectors;     // orthonormal columns, matching order
};

// --- dense helpers on raw matrices ----------------------------------------

Matrix kron(const Matrix& a, const Matrix& b);
/// Partial trace over a row-major tensor product; `keep` lists the factor
/// positions to retain (any order, result ordered as in `dims`).
Matrix partial_trace(const Matrix& m, std::span<const int> dims, std::span<const int> keep);
/// Tr over the second factor of a d1 (x) d2 operator.
Matrix trace_second(const Matrix& m, int d1, int d2);
/// Tr over the first factor of a d1 (x) d2 operator.
Matrix trace_first(const Matrix& m, int d1, int d2);
Matrix conjugate(const Matrix& u, const Matrix& m);  // u m u^dagger
Matrix swap_unitary(int d);                          // U_sw on C^d (x) C^d

double hermiticity_error(const Matrix& m);
bool is_hermitian(const Matrix& m, double rel_tol = tol::kHermitian);
Matrix hermitian_part(const Matrix& m);
double min_eigenvalue(const Matrix& hermitian);
double spectral_norm(const Matrix& m);
/// min eigenvalue >= -rel_tol * max(1, spectral norm)
bool is_psd(const Matrix& hermitian, double rel_tol = tol::kPsd);
bool is_unitary(const Matrix& u, double tol = tol::kUnitary);

SpectralDecomposition eig_hermitian(const Matrix& m);
RealVector eigenvalues_hermitian(const Matrix& m);  // descending

Matrix random_ginibre(int rows, int cols, Rng& rng);
Matrix random_hermitian(int dim, Rng& rng);
Matrix haar_unitary(int dim, Rng& rng);
Matrix random_density_matrix(int dim, int rank, Rng& rng);
Matrix basis_projector(int dim, int i);
Matrix pure_state(const Vector& psi);

/// Entropy in nats from an eigenvalue list; values below 1e-12 count as 0.
double entropy_from_spectrum(const RealVector& eigenvalues);
double von_neumann_entropy(const Matrix& rho);

/// Row-major vectorisation: X(a, b) -> a * cols + b.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int rows, int cols);

// --- layout-aware operations -----------------------------------------------

Operator kron(const Operator& a, const Operator& b);
Operator partial_trace(const Operator& m, std::span<const std::string> keep);
Operator ad_u(const UnitaryOperator& u, const Operator& m);
SpectralDecomposition eig_hermitian(const Operator& m);
UnitaryOperator random_haar_unitary(const SpaceLayout& layout, Rng& rng);
UnitaryOperator random_haar_unitary(int dim, Rng& rng);
DensityMatrix random_density(const SpaceLayout& layout, int rank, Rng& rng);
DensityMatrix random_density(int dim, int rank, Rng& rng);
double von_neumann_entropy(const DensityMatrix& rho);

}  // namespace cpdyn
