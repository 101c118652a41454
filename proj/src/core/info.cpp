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

#include "info.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cpdyn {

double mutual_information(const Matrix& rho_xy, int dx, int dy) {
  if (dx < 1 || dy < 1 || rho_xy.rows() != dx * dy) fail(ErrorCode::DimensionMismatch, "mutual_information: bad split");
  return von_neumann_entropy(trace_second(rho_xy, dx, dy)) + von_neumann_entropy(trace_first(rho_xy, dx, dy)) -
         von_neumann_entropy(rho_xy);
}

double mutual_information(const DensityMatrix& rho, std::span<const std::string> part_x) {
  const auto& factors = rho.layout().factors();
  std::vector<bool> in_x(factors.size(), false);
  for (const auto& label : part_x) in_x[rho.layout().position_of(label)] = true;
  std::vector<int> keep_x, keep_y;
  for (size_t i = 0; i < factors.size(); ++i) (in_x[i] ? keep_x : keep_y).push_back(static_cast<int>(i));
  if (keep_x.empty() || keep_y.empty()) fail(ErrorCode::InvalidArgument, "mutual_information: both sides must be non-empty");
  const auto dims = rho.layout().dims();
  return von_neumann_entropy(partial_trace(rho.matrix(), dims, keep_x)) +
         von_neumann_entropy(partial_trace(rho.matrix(), dims, keep_y)) - von_neumann_entropy(rho.matrix());
}

double conditional_mutual_information(const Matrix& rho, int da, int ds, int de) {
  if (rho.rows() != da * ds * de) fail(ErrorCode::DimensionMismatch, "conditional_mutual_information: bad dimensions");
  const std::array<int, 3> dims{da, ds, de};
  const std::array<int, 2> as{0, 1};
  const std::array<int, 2> se{1, 2};
  const std::array<int, 1> s{1};
  return von_neumann_entropy(partial_trace(rho, dims, as)) + von_neumann_entropy(partial_trace(rho, dims, se)) -
         von_neumann_entropy(partial_trace(rho, dims, s)) - von_neumann_entropy(rho);
}

double conditional_mutual_information(const DensityMatrix& rho) {
  const auto& f = rho.layout().factors();
  if (f.size() != 3 || f[0].label != "A" || f[1].label != "S" || f[2].label != "E")
    fail(ErrorCode::InvalidArgument, "conditional_mutual_information: layout must be A, S, E");
  return conditional_mutual_information(rho.matrix(), f[0].dim, f[1].dim, f[2].dim);
}

InfoReport dpi_check(const Matrix& rho, int da, int ds, int de, const Matrix& u_se) {
  if (u_se.rows() != ds * de || u_se.cols() != ds * de) fail(ErrorCode::DimensionMismatch, "dpi_check: U must act on S (x) E");
  if (rho.rows() != da * ds * de) fail(ErrorCode::DimensionMismatch, "dpi_check: state does not match dimensions");
  const std::array<int, 3> dims{da, ds, de};
  const std::array<int, 2> as{0, 1};
  const Matrix u = kron(Matrix::Identity(da, da), u_se);
  InfoReport r;
  r.i_before = mutual_information(partial_trace(rho, dims, as), da, ds);
  r.i_after = mutual_information(partial_trace(conjugate(u, rho), dims, as), da, ds);
  r.delta = r.i_before - r.i_after;
  return r;
}

InfoReport dpi_check(const DensityMatrix& rho, const UnitaryOperator& u_se) {
  const auto& f = rho.layout().factors();
  if (f.size() != 3 || f[0].label != "A" || f[1].label != "S" || f[2].label != "E")
    fail(ErrorCode::InvalidArgument, "dpi_check: layout must be A, S, E");
  InfoReport r = dpi_check(rho.matrix(), f[0].dim, f[1].dim, f[2].dim, u_se.matrix());
  r.cmi = conditional_mutual_information(rho);
  return r;
}

DpiSearch dpi_counterexample_search(const Matrix& rho, int da, int ds, int de, int draws, Rng& rng, double threshold) {
  DpiSearch s;
  s.threshold = threshold;
  s.cmi = conditional_mutual_information(rho, da, ds, de);
  for (int i = 0; i < draws; ++i) {
    const Matrix u = haar_unitary(ds * de, rng);
    const double d = dpi_check(rho, da, ds, de, u).delta;
    ++s.draws;
    if (s.best_index < 0 || d < s.best_delta) {
      s.best_delta = d;
      s.best_index = i;
      s.best_u = u;
    }
  }
  s.found = s.best_index >= 0 && s.best_delta < threshold;
  return s;
}

DensityMatrix ghz_state() {
  Vector psi = Vector::Zero(8);
  psi(0) = psi(7) = 1.0 / std::sqrt(2.0);
  SpaceLayout layout({{"A", 2}, {"S", 2}, {"E", 2}});
  return DensityMatrix::from(std::move(layout), pure_state(psi));
}

}  // namespace cpdyn
