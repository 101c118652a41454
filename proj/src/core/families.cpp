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

#include "families.hpp"

#include <cmath>
#include <numeric>

namespace cpdyn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_density(const Matrix& m, int dim, const std::string& what) {
  if (m.rows() != dim || m.cols() != dim)
    fail(ErrorCode::DimensionMismatch, what + ": expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  try {
    (void)DensityMatrix::from(SpaceLayout::single("S", dim), m);
  } catch (const Error& e) {
    throw Error(e.code(), what + ": " + e.what());
  }
}

void require_distribution(const std::vector<double>& p, size_t n) {
  if (p.size() != n) fail(ErrorCode::InvalidDistribution, "distribution has " + std::to_string(p.size()) + " entries, expected " + std::to_string(n));
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= -1e-12)) fail(ErrorCode::InvalidDistribution, "distribution has a negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) fail(ErrorCode::InvalidDistribution, "distribution does not sum to 1");
}

BlockStructure column_blocks(const std::vector<int>& dims) {
  BlockStructure b;
  for (int d : dims) b.push_back({d, 1});
  return b;
}

int sum_of(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

void validate_markov_blocks(const MarkovBlocksSpec& s) {
  if (s.blocks.empty()) fail(ErrorCode::InvalidArgument, "Markov block layout is empty");
  if (s.de < 1) fail(ErrorCode::InvalidArgument, "environment dimension must be positive");
  if (s.omega_re.size() != s.blocks.size()) fail(ErrorCode::DimensionMismatch, "one w_RE state per block is required");
  for (size_t i = 0; i < s.blocks.size(); ++i) {
    if (s.blocks[i].left < 1 || s.blocks[i].right < 1) fail(ErrorCode::InvalidArgument, "block dimensions must be positive");
    require_density(s.omega_re[i], s.blocks[i].right * s.de, "w_RE[" + std::to_string(i) + "]");
  }
}

void validate_markov_state(const MarkovStateSpec& s) {
  if (s.da < 1 || s.de < 1) fail(ErrorCode::InvalidArgument, "dimensions must be positive");
  if (s.blocks.empty()) fail(ErrorCode::InvalidArgument, "Markov block layout is empty");
  require_distribution(s.q, s.blocks.size());
  if (s.omega_al.size() != s.blocks.size() || s.omega_re.size() != s.blocks.size())
    fail(ErrorCode::DimensionMismatch, "one w_AL and one w_RE state per block are required");
  for (size_t i = 0; i < s.blocks.size(); ++i) {
    require_density(s.omega_al[i], s.da * s.blocks[i].left, "w_AL[" + std::to_string(i) + "]");
    require_density(s.omega_re[i], s.blocks[i].right * s.de, "w_RE[" + std::to_string(i) + "]");
  }
}

SpaceLayout se_layout(int ds, int de, std::optional<BlockStructure> blocks = std::nullopt) {
  return SpaceLayout({{"S", ds}, {"E", de}}, std::move(blocks));
}

Matrix member_from_form(const MarkovForm& form, const std::vector<double>& probs, const std::vector<Matrix>& lstates) {
  std::vector<Matrix> left;
  for (size_t i = 0; i < form.blocks.size(); ++i) left.push_back(probs[i] * lstates[i]);
  Matrix m = embed_blocks(form.blocks, form.de, left, form.omega_re);
  const Matrix w = kron(form.frame, Matrix::Identity(form.de, form.de));
  return hermitian_part(w * m * w.adjoint());
}

bool frame_is_identity(const MarkovForm& f) { return (f.frame - Matrix::Identity(f.ds(), f.ds())).norm() == 0.0; }

Matrix trivial_state() { return Matrix::Identity(1, 1); }

// Per-block L-states for the form-based variants.
std::vector<Matrix> left_states(const FamilySpec& spec, const FamilyParams& params, const MarkovForm& form) {
  std::vector<Matrix> out;
  const size_t m = form.blocks.size();
  switch (spec.variant()) {
    case FamilyVariant::ClassicalQuantum:
      out.assign(m, trivial_state());
      break;
    case FamilyVariant::MixedDirectSum: {
      const auto& s = spec.as<MixedDirectSumSpec>();
      if (params.states.size() != m - s.split) fail(ErrorCode::InvalidArgument, "mixed direct sum needs one free state per factorized block");
      for (int i = 0; i < s.split; ++i) out.push_back(trivial_state());
      for (const auto& st : params.states) out.push_back(st);
      break;
    }
    default:
      if (params.states.size() != m) fail(ErrorCode::InvalidArgument, "one free state per block is required");
      out = params.states;
  }
  for (size_t i = 0; i < m; ++i) require_density(out[i], form.blocks[i].left, "free state[" + std::to_string(i) + "]");
  return out;
}

std::vector<double> block_probs(const FamilySpec& spec, const FamilyParams& params, size_t m) {
  if (spec.variant() == FamilyVariant::Factorized) {
    if (!params.probs.empty()) require_distribution(params.probs, 1);
    return {1.0};
  }
  require_distribution(params.probs, m);
  return params.probs;
}

Matrix kernel_direction(const KernelExtendedSpec& s, const std::vector<double>& coeffs) {
  const auto herm = hermitian_basis(s.kernel);
  const int n = s.kernel.ambient_dim();
  Matrix y = Matrix::Zero(n, n);
  if (coeffs.empty()) return y;
  if (coeffs.size() != herm.size())
    fail(ErrorCode::InvalidArgument, "kernel coefficient count " + std::to_string(coeffs.size()) + " differs from Hermitian kernel dimension " + std::to_string(herm.size()));
  for (size_t k = 0; k < herm.size(); ++k) y += coeffs[k] * herm[k];
  return y;
}

}  // namespace

std::string to_string(FamilyVariant v) {
  switch (v) {
    case FamilyVariant::Factorized: return "Factorized";
    case FamilyVariant::ClassicalQuantum: return "ClassicalQuantum";
    case FamilyVariant::DirectSumFactorized: return "DirectSumFactorized";
    case FamilyVariant::MixedDirectSum: return "MixedDirectSum";
    case FamilyVariant::MarkovBlocks: return "MarkovBlocks";
    case FamilyVariant::Steered: return "Steered";
    case FamilyVariant::KernelExtended: return "KernelExtended";
  }
  return "?";
}

FamilyVariant family_variant_from_string(const std::string& name) {
  for (auto v : {FamilyVariant::Factorized, FamilyVariant::ClassicalQuantum, FamilyVariant::DirectSumFactorized,
                 FamilyVariant::MixedDirectSum, FamilyVariant::MarkovBlocks, FamilyVariant::Steered, FamilyVariant::KernelExtended})
    if (to_string(v) == name) return v;
  fail(ErrorCode::InvalidArgument, "unknown family variant '" + name + "'");
}

FamilySpec::FamilySpec(Data data) : data_(std::move(data)) {
  std::visit(overloaded{
                 [&](const FactorizedSpec& s) {
                   if (s.ds < 1) fail(ErrorCode::InvalidArgument, "ds must be positive");
                   ds_ = s.ds;
                   de_ = static_cast<int>(s.omega_e.rows());
                   require_density(s.omega_e, de_, "w_E");
                 },
                 [&](const ClassicalQuantumSpec& s) {
                   ds_ = static_cast<int>(s.basis.rows());
                   if (ds_ < 1 || s.basis.cols() != ds_ || !is_unitary(s.basis))
                     fail(ErrorCode::InvalidArgument, "classical-quantum basis must be an orthonormal basis of H_S");
                   if (s.omegas.size() != static_cast<size_t>(ds_))
                     fail(ErrorCode::DimensionMismatch, "one environment state per basis vector is required");
                   de_ = static_cast<int>(s.omegas[0].rows());
                   for (size_t i = 0; i < s.omegas.size(); ++i) require_density(s.omegas[i], de_, "w_" + std::to_string(i));
                 },
                 [&](const DirectSumSpec& s) {
                   if (s.block_dims.empty() || s.omegas.size() != s.block_dims.size())
                     fail(ErrorCode::DimensionMismatch, "one environment state per block is required");
                   for (int d : s.block_dims)
                     if (d < 1) fail(ErrorCode::InvalidArgument, "block dimensions must be positive");
                   ds_ = sum_of(s.block_dims);
                   de_ = static_cast<int>(s.omegas[0].rows());
                   for (size_t i = 0; i < s.omegas.size(); ++i) require_density(s.omegas[i], de_, "w_" + std::to_string(i));
                 },
                 [&](const MixedDirectSumSpec& s) {
                   const int m = static_cast<int>(s.block_dims.size());
                   if (m == 0 || s.split < 0 || s.split > m) fail(ErrorCode::InvalidArgument, "split index out of range");
                   if (static_cast<int>(s.fixed_se.size()) != s.split || static_cast<int>(s.omegas.size()) != m - s.split)
                     fail(ErrorCode::DimensionMismatch, "mixed direct sum needs split fixed w_SE states and m - split w_E states");
                   for (int d : s.block_dims)
                     if (d < 1) fail(ErrorCode::InvalidArgument, "block dimensions must be positive");
                   ds_ = sum_of(s.block_dims);
                   de_ = s.split > 0 ? static_cast<int>(s.fixed_se[0].rows()) / s.block_dims[0]
                                     : static_cast<int>(s.omegas[0].rows());
                   for (int i = 0; i < s.split; ++i)
                     require_density(s.fixed_se[i], s.block_dims[i] * de_, "w_SE[" + std::to_string(i) + "]");
                   for (size_t i = 0; i < s.omegas.size(); ++i) require_density(s.omegas[i], de_, "w_" + std::to_string(i));
                 },
                 [&](const MarkovBlocksSpec& s) {
                   validate_markov_blocks(s);
                   ds_ = block_total(s.blocks);
                   de_ = s.de;
                 },
                 [&](const SteeredSpec& s) {
                   if (s.da < 1 || s.ds < 1 || s.de < 1) fail(ErrorCode::InvalidArgument, "dimensions must be positive");
                   require_density(s.omega_ase, s.da * s.ds * s.de, "w_ASE");
                   if (s.markov_source) {
                     validate_markov_state(*s.markov_source);
                     if (s.markov_source->da != s.da || s.markov_source->de != s.de || block_total(s.markov_source->blocks) != s.ds)
                       fail(ErrorCode::DimensionMismatch, "Markov source dimensions differ from the steered spec");
                   }
                   ds_ = s.ds;
                   de_ = s.de;
                 },
                 [&](const KernelExtendedSpec& s) {
                   validate_markov_blocks(s.base);
                   ds_ = block_total(s.base.blocks);
                   de_ = s.base.de;
                   if (s.kernel.ds() != ds_ || s.kernel.de() != de_) fail(ErrorCode::DimensionMismatch, "kernel ambient space differs from the base family");
                   if (!(s.scale > 0)) fail(ErrorCode::InvalidArgument, "kernel scale must be positive");
                   for (const auto& y : s.kernel.elements())
                     if (trace_second(y, ds_, de_).norm() > 1e-9) fail(ErrorCode::OutOfKernel, "kernel element has nonzero Tr_E");
                 },
             },
             data_);
}

FamilyVariant FamilySpec::variant() const { return static_cast<FamilyVariant>(data_.index()); }

MarkovForm to_markov_form(const FamilySpec& spec) {
  MarkovForm f;
  f.de = spec.de();
  f.frame = Matrix::Identity(spec.ds(), spec.ds());
  std::visit(overloaded{
                 [&](const FactorizedSpec& s) {
                   f.blocks = {{s.ds, 1}};
                   f.omega_re = {s.omega_e};
                 },
                 [&](const ClassicalQuantumSpec& s) {
                   f.blocks.assign(s.omegas.size(), Block{1, 1});
                   f.omega_re = s.omegas;
                   f.frame = s.basis;
                 },
                 [&](const DirectSumSpec& s) {
                   f.blocks = column_blocks(s.block_dims);
                   f.omega_re = s.omegas;
                 },
                 [&](const MixedDirectSumSpec& s) {
                   for (int i = 0; i < static_cast<int>(s.block_dims.size()); ++i) {
                     if (i < s.split) {
                       f.blocks.push_back({1, s.block_dims[i]});
                       f.omega_re.push_back(s.fixed_se[i]);
                     } else {
                       f.blocks.push_back({s.block_dims[i], 1});
                       f.omega_re.push_back(s.omegas[i - s.split]);
                     }
                   }
                 },
                 [&](const MarkovBlocksSpec& s) {
                   f.blocks = s.blocks;
                   f.omega_re = s.omega_re;
                 },
                 [&](const SteeredSpec& s) {
                   if (!s.markov_source) fail(ErrorCode::InvalidArgument, "steered family has no Markov source; block form unknown");
                   f.blocks = s.markov_source->blocks;
                   f.omega_re = s.markov_source->omega_re;
                 },
                 [&](const KernelExtendedSpec& s) {
                   f.blocks = s.base.blocks;
                   f.omega_re = s.base.omega_re;
                 },
             },
             spec.data());
  return f;
}

Matrix embed_blocks(const BlockStructure& blocks, int de, const std::vector<Matrix>& left_ops,
                    const std::vector<Matrix>& omega_re) {
  const int ds = block_total(blocks);
  const int n = ds * de;
  Matrix out = Matrix::Zero(n, n);
  const auto offsets = block_offsets(blocks);
  for (size_t i = 0; i < blocks.size(); ++i) {
    // Block i is contiguous in S (x) E: rows off*de .. (off + dL*dR)*de.
    const int size = blocks[i].dim() * de;
    out.block(offsets[i] * de, offsets[i] * de, size, size) = kron(left_ops[i], omega_re[i]);
  }
  return out;
}

DensityMatrix sample_member(const FamilySpec& spec, const FamilyParams& params) {
  const int ds = spec.ds();
  const int de = spec.de();
  switch (spec.variant()) {
    case FamilyVariant::Steered: {
      const auto& s = spec.as<SteeredSpec>();
      if (!params.p_a) fail(ErrorCode::InvalidArgument, "steered family requires P_A");
      auto omega = DensityMatrix::from(SpaceLayout({{"A", s.da}, {"S", s.ds}, {"E", s.de}}), s.omega_ase);
      return steer(omega, *params.p_a);
    }
    case FamilyVariant::KernelExtended: {
      const auto& s = spec.as<KernelExtendedSpec>();
      const FamilySpec base{s.base};
      const Matrix b = sample_member(base, params).matrix();
      const Matrix y = kernel_direction(s, params.kernel_coeffs);
      Matrix rho;
      if (params.kernel_step) {
        rho = b + (*params.kernel_step * s.scale) * y;
        if (!is_psd(rho)) fail(ErrorCode::NotPsd, "kernel step leaves the density matrices");
      } else {
        double lo = 0.0, hi = 1.0;
        if (is_psd(b + s.scale * y)) {
          lo = 1.0;
        } else {
          for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (is_psd(b + (mid * s.scale) * y) ? lo : hi) = mid;
          }
        }
        rho = b + (0.9 * lo * s.scale) * y;
      }
      return DensityMatrix::from(se_layout(ds, de, s.base.blocks), hermitian_part(rho));
    }
    default: {
      const MarkovForm form = to_markov_form(spec);
      const auto probs = block_probs(spec, params, form.blocks.size());
      const auto lstates = left_states(spec, params, form);
      std::optional<BlockStructure> blocks;
      if (frame_is_identity(form)) blocks = form.blocks;
      return DensityMatrix::from(se_layout(ds, de, blocks), member_from_form(form, probs, lstates));
    }
  }
}

std::vector<double> random_distribution(int n, Rng& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) sum += (x = ex(rng));
  for (auto& x : p) x /= sum;
  return p;
}

FamilyParams random_params(const FamilySpec& spec, Rng& rng) {
  FamilyParams p;
  switch (spec.variant()) {
    case FamilyVariant::Factorized:
      p.probs = {1.0};
      p.states = {random_density_matrix(spec.ds(), spec.ds(), rng)};
      break;
    case FamilyVariant::ClassicalQuantum:
      p.probs = random_distribution(spec.ds(), rng);
      break;
    case FamilyVariant::DirectSumFactorized: {
      const auto& s = spec.as<DirectSumSpec>();
      p.probs = random_distribution(static_cast<int>(s.block_dims.size()), rng);
      for (int d : s.block_dims) p.states.push_back(random_density_matrix(d, d, rng));
      break;
    }
    case FamilyVariant::MixedDirectSum: {
      const auto& s = spec.as<MixedDirectSumSpec>();
      p.probs = random_distribution(static_cast<int>(s.block_dims.size()), rng);
      for (size_t i = s.split; i < s.block_dims.size(); ++i) p.states.push_back(random_density_matrix(s.block_dims[i], s.block_dims[i], rng));
      break;
    }
    case FamilyVariant::MarkovBlocks: {
      const auto& s = spec.as<MarkovBlocksSpec>();
      p.probs = random_distribution(static_cast<int>(s.blocks.size()), rng);
      for (const auto& b : s.blocks) p.states.push_back(random_density_matrix(b.left, b.left, rng));
      break;
    }
    case FamilyVariant::Steered: {
      const auto& s = spec.as<SteeredSpec>();
      p.p_a = s.da * random_density_matrix(s.da, s.da, rng);
      break;
    }
    case FamilyVariant::KernelExtended: {
      const auto& s = spec.as<KernelExtendedSpec>();
      p = random_params(FamilySpec{s.base}, rng);
      std::normal_distribution<double> n(0.0, 1.0);
      const size_t k = hermitian_basis(s.kernel).size();
      for (size_t i = 0; i < k; ++i) p.kernel_coeffs.push_back(n(rng));
      break;
    }
  }
  return p;
}

std::vector<Matrix> spanning_members(const FamilySpec& spec) {
  std::vector<Matrix> out;
  if (spec.variant() == FamilyVariant::Steered) {
    const auto& s = spec.as<SteeredSpec>();
    auto omega = DensityMatrix::from(SpaceLayout({{"A", s.da}, {"S", s.ds}, {"E", s.de}}), s.omega_ase);
    for (const auto& pa : spanning_pure_states(s.da)) {
      const double norm = (kron(pa, Matrix::Identity(s.ds * s.de, s.ds * s.de)) * s.omega_ase).trace().real();
      if (norm > 1e-12) out.push_back(steer(omega, pa).matrix());
    }
    return out;
  }
  const MarkovForm form = to_markov_form(spec);
  const size_t m = form.blocks.size();
  for (size_t i = 0; i < m; ++i) {
    std::vector<double> probs(m, 0.0);
    probs[i] = 1.0;
    std::vector<Matrix> lstates;
    for (const auto& b : form.blocks) lstates.push_back(Matrix::Identity(b.left, b.left) / double(b.left));
    for (const auto& sigma : spanning_pure_states(form.blocks[i].left)) {
      lstates[i] = sigma;
      out.push_back(member_from_form(form, probs, lstates));
    }
  }
  if (spec.variant() == FamilyVariant::KernelExtended)
    for (const auto& y : spec.as<KernelExtendedSpec>().kernel.elements()) out.push_back(y);
  return out;
}

OperatorSubspace family_subspace(const FamilySpec& spec) {
  const auto members = spanning_members(spec);
  return span_from_states(members, spec.ds(), spec.de());
}

DensityMatrix build_markov_state(const MarkovStateSpec& s) {
  validate_markov_state(s);
  const int ds = block_total(s.blocks);
  const int se = ds * s.de;
  const int n = s.da * se;
  Matrix out = Matrix::Zero(n, n);
  const auto offsets = block_offsets(s.blocks);
  for (size_t i = 0; i < s.blocks.size(); ++i) {
    const int dl = s.blocks[i].left;
    const int size = s.blocks[i].dim() * s.de;
    for (int a = 0; a < s.da; ++a)
      for (int b = 0; b < s.da; ++b)
        out.block(a * se + offsets[i] * s.de, b * se + offsets[i] * s.de, size, size) +=
            s.q[i] * kron(s.omega_al[i].block(a * dl, b * dl, dl, dl), s.omega_re[i]);
  }
  return DensityMatrix::from(SpaceLayout({{"A", s.da}, {"S", ds}, {"E", s.de}}, s.blocks), hermitian_part(out));
}

DensityMatrix steer(const DensityMatrix& omega_ase, const Matrix& p_a) {
  const auto& layout = omega_ase.layout();
  if (layout.factors().size() != 3 || layout.factors()[0].label != "A" || !layout.has("S") || !layout.has("E"))
    fail(ErrorCode::InvalidArgument, "steer expects a layout A, S, E");
  const int da = layout.dim_of("A");
  if (p_a.rows() != da || p_a.cols() != da) fail(ErrorCode::DimensionMismatch, "P_A dimension differs from dim(A)");
  if (!is_hermitian(p_a) || !is_psd(hermitian_part(p_a))) fail(ErrorCode::NotPsd, "P_A must be positive semidefinite");
  const int rest = layout.total_dim() / da;
  const Matrix weighted = kron(hermitian_part(p_a), Matrix::Identity(rest, rest)) * omega_ase.matrix();
  const double norm = weighted.trace().real();
  if (!(norm > 1e-14)) fail(ErrorCode::ZeroNormalization, "tr[(P_A (x) I) w_ASE] vanishes");
  const std::vector<std::string> keep{"S", "E"};
  Operator reduced = partial_trace(Operator(layout, weighted), keep);
  return DensityMatrix::from(reduced.layout(), hermitian_part(reduced.matrix() / norm));
}

StructureFit structure_fit(const Matrix& rho_se, const BlockStructure& blocks, const std::vector<Matrix>& omega_re, int de) {
  const int ds = block_total(blocks);
  if (rho_se.rows() != ds * de || rho_se.cols() != ds * de) fail(ErrorCode::DimensionMismatch, "structure_fit: state size differs from the layout");
  if (omega_re.size() != blocks.size()) fail(ErrorCode::DimensionMismatch, "structure_fit: one w_RE per block is required");
  const auto offsets = block_offsets(blocks);
  StructureFit fit;
  std::vector<Matrix> left;
  for (size_t i = 0; i < blocks.size(); ++i) {
    const int dl = blocks[i].left;
    const int w = blocks[i].right * de;
    const Matrix& omega = omega_re[i];
    if (omega.rows() != w) fail(ErrorCode::DimensionMismatch, "structure_fit: w_RE size differs from the block");
    const Matrix sub = rho_se.block(offsets[i] * de, offsets[i] * de, dl * w, dl * w);
    const double gram = omega.squaredNorm();
    Matrix x(dl, dl);
    for (int l = 0; l < dl; ++l)
      for (int k = 0; k < dl; ++k) x(l, k) = (omega.adjoint() * sub.block(l * w, k * w, w, w)).trace() / gram;
    const double p = x.trace().real();
    fit.probs.push_back(p);
    fit.states.push_back(std::abs(p) > 1e-14 ? Matrix(x / p) : Matrix(Matrix::Identity(dl, dl) / double(dl)));
    left.push_back(x);
  }
  fit.residual = (rho_se - embed_blocks(blocks, de, left, omega_re)).norm();
  return fit;
}

FamilySpec random_factorized(int ds, int de, Rng& rng, int env_rank) {
  return FamilySpec{FactorizedSpec{ds, random_density_matrix(de, env_rank > 0 ? env_rank : de, rng)}};
}

FamilySpec random_classical_quantum(int ds, int de, Rng& rng) {
  ClassicalQuantumSpec s;
  s.basis = haar_unitary(ds, rng);
  for (int i = 0; i < ds; ++i) s.omegas.push_back(random_density_matrix(de, de, rng));
  return FamilySpec{s};
}

FamilySpec random_direct_sum(const std::vector<int>& block_dims, int de, Rng& rng) {
  DirectSumSpec s;
  s.block_dims = block_dims;
  for (size_t i = 0; i < block_dims.size(); ++i) s.omegas.push_back(random_density_matrix(de, de, rng));
  return FamilySpec{s};
}

FamilySpec random_mixed_direct_sum(const std::vector<int>& block_dims, int split, int de, Rng& rng) {
  MixedDirectSumSpec s;
  s.block_dims = block_dims;
  s.split = split;
  for (int i = 0; i < static_cast<int>(block_dims.size()); ++i) {
    if (i < split)
      s.fixed_se.push_back(random_density_matrix(block_dims[i] * de, block_dims[i] * de, rng));
    else
      s.omegas.push_back(random_density_matrix(de, de, rng));
  }
  return FamilySpec{s};
}

FamilySpec random_markov_blocks(const BlockStructure& blocks, int de, Rng& rng) {
  MarkovBlocksSpec s;
  s.blocks = blocks;
  s.de = de;
  for (const auto& b : blocks) s.omega_re.push_back(random_density_matrix(b.right * de, b.right * de, rng));
  return FamilySpec{s};
}

MarkovStateSpec random_markov_state_spec(int da, const BlockStructure& blocks, int de, Rng& rng) {
  MarkovStateSpec s;
  s.da = da;
  s.blocks = blocks;
  s.de = de;
  s.q = random_distribution(static_cast<int>(blocks.size()), rng);
  for (const auto& b : blocks) {
    s.omega_al.push_back(random_density_matrix(da * b.left, da * b.left, rng));
    s.omega_re.push_back(random_density_matrix(b.right * de, b.right * de, rng));
  }
  return s;
}

FamilySpec steered_from_markov(const MarkovStateSpec& spec) {
  const auto omega = build_markov_state(spec);
  SteeredSpec s;
  s.da = spec.da;
  s.ds = block_total(spec.blocks);
  s.de = spec.de;
  s.omega_ase = omega.matrix();
  s.markov_source = spec;
  return FamilySpec{s};
}

FamilySpec kernel_extended(const MarkovBlocksSpec& base, OperatorSubspace kernel, double scale) {
  return FamilySpec{KernelExtendedSpec{base, std::move(kernel), scale}};
}

}  // namespace cpdyn
