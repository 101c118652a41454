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

#include "consistency.hpp"

#include <algorithm>
#include <cmath>

namespace cpdyn {

UnitarySetSpec UnitarySetSpec::explicit_list(std::vector<Matrix> us) {
  UnitarySetSpec g;
  g.kind = Kind::ExplicitList;
  g.unitaries = std::move(us);
  g.samples = static_cast<int>(g.unitaries.size());
  return g;
}

UnitarySetSpec UnitarySetSpec::all(int samples) {
  UnitarySetSpec g;
  g.kind = Kind::AllUnitaries;
  g.samples = samples;
  return g;
}

UnitarySetSpec UnitarySetSpec::local(int samples) {
  UnitarySetSpec g;
  g.kind = Kind::LocalProducts;
  g.samples = samples;
  return g;
}

UnitarySetSpec UnitarySetSpec::swap() {
  UnitarySetSpec g;
  g.kind = Kind::SwapOnly;
  g.samples = 1;
  return g;
}

std::string to_string(UnitarySetSpec::Kind k) {
  switch (k) {
    case UnitarySetSpec::Kind::ExplicitList: return "explicit";
    case UnitarySetSpec::Kind::AllUnitaries: return "all";
    case UnitarySetSpec::Kind::LocalProducts: return "local";
    case UnitarySetSpec::Kind::SwapOnly: return "swap";
  }
  return "?";
}

namespace {
UnitarySetSpec explicit_list_of(const UnitarySetSpec& g) { return UnitarySetSpec::explicit_list(g.unitaries); }
}  // namespace

std::vector<Matrix> enumerate_unitaries(const UnitarySetSpec& g, int ds, int de, Rng& rng) {
  const int n = ds * de;
  std::vector<Matrix> out;
  switch (g.kind) {
    case UnitarySetSpec::Kind::ExplicitList:
      for (const auto& u : g.unitaries) {
        if (u.rows() != n || u.cols() != n) fail(ErrorCode::DimensionMismatch, "listed unitary does not act on S (x) E");
        if (!is_unitary(u)) fail(ErrorCode::NotUnitary, "listed operator is not unitary");
        out.push_back(u);
      }
      break;
    case UnitarySetSpec::Kind::AllUnitaries:
      if (!g.unitaries.empty()) return enumerate_unitaries(explicit_list_of(g), ds, de, rng);
      for (int i = 0; i < g.samples; ++i) out.push_back(haar_unitary(n, rng));
      break;
    case UnitarySetSpec::Kind::LocalProducts:
      if (!g.unitaries.empty()) return enumerate_unitaries(explicit_list_of(g), ds, de, rng);
      for (int i = 0; i < g.samples; ++i) {
        const Matrix us = haar_unitary(ds, rng);
        const Matrix ue = haar_unitary(de, rng);
        out.push_back(kron(us, ue));
      }
      break;
    case UnitarySetSpec::Kind::SwapOnly:
      if (ds != de) fail(ErrorCode::DimensionMismatch, "swap requires dim(S) == dim(E)");
      out.push_back(swap_unitary(ds));
      break;
  }
  return out;
}

double consistency_violation(const OperatorSubspace& kernel, const Matrix& u) {
  double worst = 0.0;
  for (int k = 0; k < kernel.dim(); ++k)
    worst = std::max(worst, evolve_reduced(u, kernel.element(k), kernel.ds(), kernel.de()).norm());
  return worst;
}

bool is_u_consistent(const OperatorSubspace& v, const Matrix& u, double tol) {
  return consistency_violation(kernel_tr_e(v), u) <= tol;
}

ConsistencyReport check_consistency(const OperatorSubspace& /*v*/, const OperatorSubspace& kernel, UnitarySetSpec::Kind kind,
                                    const std::vector<Matrix>& unitaries) {
  ConsistencyReport r;
  r.kernel_dim = kernel.dim();
  for (const auto& u : unitaries) {
    const double viol = consistency_violation(kernel, u);
    r.violations.push_back(viol);
    r.worst_violation = std::max(r.worst_violation, viol);
  }
  r.checked = static_cast<int>(unitaries.size());
  const bool sampled_ok = r.worst_violation <= kConsistencyTol;
  if (kernel.dim() == 0) {
    r.consistent = true;
    r.exact = true;
    r.method = "empty-kernel";
    return r;
  }
  switch (kind) {
    case UnitarySetSpec::Kind::LocalProducts:
      // Tr_E((Us (x) Ue) Y (Us (x) Ue)^dag) = Us Tr_E(Y) Us^dag = 0 for Y in V0.
      r.consistent = sampled_ok;
      r.exact = true;
      r.method = "local-kernel-identity+sampled";
      break;
    case UnitarySetSpec::Kind::AllUnitaries:
      r.consistent = sampled_ok;
      r.exact = !sampled_ok;  // a violation is a certificate, a pass is only statistical
      r.method = "sampled";
      break;
    case UnitarySetSpec::Kind::SwapOnly:
    case UnitarySetSpec::Kind::ExplicitList:
      r.consistent = sampled_ok;
      r.exact = true;
      r.method = "enumerated";
      break;
  }
  return r;
}

ConsistencyReport is_g_consistent(const OperatorSubspace& v, const UnitarySetSpec& g, Rng& rng) {
  const auto us = enumerate_unitaries(g, v.ds(), v.de(), rng);
  return check_consistency(v, kernel_tr_e(v), g.kind, us);
}

AssignmentMap canonical_assignment(const OperatorSubspace& v) {
  const int ds = v.ds();
  const int de = v.de();
  const int n2 = ds * de * ds * de;
  if (v.dim() == 0) return AssignmentMap(ds, de, Matrix::Zero(n2, ds * ds), Matrix(ds * ds, 0));
  const Matrix m = trace_e_superop(ds, de) * v.basis();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(kSpanRankTol);
  cod.compute(m);
  const Matrix pinv = cod.pseudoInverse();
  const Matrix uu = orthonormal_range(m);
  return AssignmentMap(ds, de, v.basis() * pinv, uu);
}

AssignmentMap perturb_assignment(const AssignmentMap& base, const ChannelMap& delta, const OperatorSubspace& kernel) {
  if (delta.in_dim() != base.ds() || delta.out_dim() != base.ds() * base.de())
    fail(ErrorCode::DimensionMismatch, "perturbation must map L(H_S) into L(H_S (x) H_E)");
  for (Eigen::Index c = 0; c < delta.matrix().cols(); ++c) {
    const Vector col = delta.matrix().col(c);
    const double off = (col - kernel.project(col)).norm();
    if (off > 1e-9 * std::max(1.0, col.norm())) fail(ErrorCode::OutOfKernel, "perturbation range leaves V0");
  }
  return AssignmentMap(base.ds(), base.de(), base.matrix() + delta.matrix(), base.domain());
}

ChannelMap random_kernel_delta(const OperatorSubspace& kernel, Rng& rng, double scale) {
  const int ds = kernel.ds();
  const int n = kernel.ambient_dim();
  const auto herm = hermitian_basis(kernel);
  const auto sys = hermitian_operator_basis(ds);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd c(herm.size(), sys.size());
  for (Eigen::Index k = 0; k < c.rows(); ++k)
    for (Eigen::Index m = 0; m < c.cols(); ++m) c(k, m) = nd(rng);
  return ChannelMap::from_function(ds, n, [&](const Matrix& x) {
    Matrix y = Matrix::Zero(n, n);
    for (size_t m = 0; m < sys.size(); ++m) {
      const cplx coord = (sys[m] * x).trace();
      for (size_t k = 0; k < herm.size(); ++k) y += scale * c(k, m) * coord * herm[k];
    }
    return y;
  });
}

double section_error(const AssignmentMap& assign, const OperatorSubspace& v) {
  if (v.dim() == 0) return 0.0;
  const Matrix t = trace_e_superop(v.ds(), v.de());
  const Matrix dom = orthonormal_range(t * v.basis());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < dom.cols(); ++k) {
    const Vector img = assign.matrix() * dom.col(k);
    worst = std::max(worst, (img - v.project(img)).norm());
    worst = std::max(worst, (t * img - dom.col(k)).norm());
  }
  return worst;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t hash_matrix(const Matrix& m, std::uint64_t h) {
  const std::int64_t shape[2] = {m.rows(), m.cols()};
  h = fnv1a(shape, sizeof(shape), h);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      // Round so that last-bit eigensolver noise does not change the hash.
      const double parts[2] = {std::round(m(i, j).real() * 1e9) / 1e9, std::round(m(i, j).imag() * 1e9) / 1e9};
      h = fnv1a(parts, sizeof(parts), h);
    }
  return h;
}

Theorem1Report theorem1_verify(const OperatorSubspace& v, const UnitarySetSpec& g, Rng& rng, const Theorem1Options& opts) {
  Theorem1Report rep;
  rep.g_kind = g.kind;
  const OperatorSubspace kernel = kernel_tr_e(v);
  rep.dim_v = v.dim();
  rep.dim_v0 = kernel.dim();
  rep.dim_domain = marginal_dim(v);

  const auto us = enumerate_unitaries(g, v.ds(), v.de(), rng);
  rep.consistency = check_consistency(v, kernel, g.kind, us);

  // The hash covers V (through its projector, which is basis independent) and G.
  std::uint64_t h = hash_matrix(v.basis() * v.basis().adjoint());
  const int kind = static_cast<int>(g.kind);
  h = fnv1a(&kind, sizeof(kind), h);
  for (const auto& u : us) h = hash_matrix(u, h);
  rep.inputs_hash = h;

  const AssignmentMap canonical = canonical_assignment(v);
  rep.canonical_cp = canonical.cp();
  rep.canonical_min_choi = canonical.min_choi_eigenvalue();
  const AssignmentMap base = opts.base ? *opts.base : canonical;
  rep.base_cp = base.cp();
  rep.base_min_choi = base.min_choi_eigenvalue();
  rep.base_section_error = section_error(base, v);

  std::vector<AssignmentMap> perturbed;
  if (kernel.dim() > 0)
    for (int p = 0; p < opts.perturbations; ++p) perturbed.push_back(perturb_assignment(base, random_kernel_delta(kernel, rng), kernel));

  const Matrix dom = orthonormal_range(trace_e_superop(v.ds(), v.de()) * v.basis());
  bool all_ok = true;
  for (size_t i = 0; i < us.size(); ++i) {
    UnitaryVerdict vd;
    vd.index = static_cast<int>(i);
    vd.violation = rep.consistency.violations[i];
    vd.consistent = vd.violation <= kConsistencyTol;
    const ChannelMap psi = reduced_dynamics(us[i], base);
    const ChoiMatrix c = choi(psi);
    vd.min_choi = min_choi_eigenvalue(c);
    vd.cp = is_cp(c);
    vd.tp_error = tp_error(psi);
    for (Eigen::Index k = 0; k < dom.cols(); ++k) {
      const Matrix x = unvec(dom.col(k), v.ds(), v.ds());
      vd.domain_tp_error = std::max(vd.domain_tp_error, std::abs(psi.apply(x).trace() - x.trace()));
    }
    vd.perturbed_min_choi = vd.min_choi;
    vd.perturbed_cp = vd.cp;
    for (const auto& pt : perturbed) {
      const ChannelMap psi_t = reduced_dynamics(us[i], pt);
      vd.perturbation_distance = std::max(vd.perturbation_distance, choi_distance(psi_t, psi));
      const ChoiMatrix ct = choi(psi_t);
      vd.perturbed_min_choi = std::min(vd.perturbed_min_choi, min_choi_eigenvalue(ct));
      vd.perturbed_cp = vd.perturbed_cp && is_cp(ct);
    }
    all_ok = all_ok && vd.cp && vd.perturbed_cp && vd.perturbation_distance <= opts.eq_tol;
    rep.verdicts.push_back(vd);
  }
  rep.premises_hold = rep.consistency.consistent && rep.base_cp && rep.base_section_error <= 1e-9;
  rep.conclusion_holds = all_ok;
  rep.theorem_holds = !rep.premises_hold || rep.conclusion_holds;
  return rep;
}

AssignmentMap witness_assignment(const Matrix& omega_e, const Matrix& delta, int ds, double gamma) {
  const int de = static_cast<int>(omega_e.rows());
  if (delta.rows() != de || delta.cols() != de) fail(ErrorCode::DimensionMismatch, "witness: D must act on H_E");
  if (!is_hermitian(delta) || std::abs(delta.trace()) > 1e-12) fail(ErrorCode::InvalidArgument, "witness: D must be traceless Hermitian");
  const Matrix id = Matrix::Identity(ds, ds);
  return AssignmentMap::from_function(ds, de, [&](const Matrix& x) {
    return Matrix(kron(x, omega_e) + gamma * kron(x - x.trace() * id / double(ds), delta));
  });
}

double witness_cp_threshold(const Matrix& omega_e, const Matrix& delta, int ds) {
  auto cp_at = [&](double g) { return witness_assignment(omega_e, delta, ds, g).cp(); };
  if (!cp_at(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (cp_at(hi) && hi < 1e6) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cp_at(mid) ? lo : hi) = mid;
  }
  return lo;
}

Matrix default_traceless(int de) {
  Matrix d = Matrix::Zero(de, de);
  if (de >= 2) {
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
  }
  return d;
}

WitnessSearch search_non_cp_witness(const Matrix& omega_e, const Matrix& delta, int ds, double gamma, int draws, Rng& rng,
                                    double target) {
  WitnessSearch ws;
  ws.gamma = gamma;
  ws.threshold = witness_cp_threshold(omega_e, delta, ds);
  const AssignmentMap lambda = witness_assignment(omega_e, delta, ds, gamma);
  const int n = ds * static_cast<int>(omega_e.rows());
  ws.best_min_choi = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Matrix u = haar_unitary(n, rng);
    const double e = min_choi_eigenvalue(choi(reduced_dynamics(u, lambda)));
    ++ws.draws;
    if (ws.best_index < 0 || e < ws.best_min_choi) {
      ws.best_min_choi = e;
      ws.best_index = i;
      ws.best_u = u;
    }
  }
  ws.found = ws.best_index >= 0 && ws.best_min_choi <= target;
  return ws;
}

OperatorSubspace fixed_env_marginal_subspace(const Matrix& omega_e, int ds) {
  const int de = static_cast<int>(omega_e.rows());
  const Matrix kernel_s = orthonormal_null_space(trace_s_superop(ds, de));
  Matrix cols(kernel_s.rows(), kernel_s.cols() + ds * ds);
  cols.leftCols(kernel_s.cols()) = kernel_s;
  int c = static_cast<int>(kernel_s.cols());
  for (int i = 0; i < ds; ++i)
    for (int j = 0; j < ds; ++j) {
      Matrix e = Matrix::Zero(ds, ds);
      e(i, j) = 1.0;
      cols.col(c++) = vec(kron(e, omega_e));
    }
  return OperatorSubspace(ds, de, orthonormal_range(cols));
}

}  // namespace cpdyn
