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
#include <span>
#include <string>

#include "tensor.hpp"

namespace cpdyn {

// All quantities in nats.

struct InfoReport {
  double i_before = 0.0;
  double i_after = 0.0;
  double delta = 0.0;  // i_before - i_after
  std::optional<double> cmi;
};

/// I(X:Y) where X is the listed factors and Y the remaining ones.
double mutual_information(const DensityMatrix& rho, std::span<const std::string> part_x);
double mutual_information(const Matrix& rho_xy, int dx, int dy);

/// I(A:E|S) = S(AS) + S(SE) - S(S) - S(ASE); the layout must be exactly A, S, E.
double conditional_mutual_information(const DensityMatrix& rho_ase);
double conditional_mutual_information(const Matrix& rho_ase, int da, int ds, int de);

/// I(A:S) before and after id_A (x) Ad_U on S (x) E.
InfoReport dpi_check(const DensityMatrix& rho_ase, const UnitaryOperator& u_se);
InfoReport dpi_check(const Matrix& rho_ase, int da, int ds, int de, const Matrix& u_se);

/// Haar search for a unitary that increases I(A:S). A miss is "not found",
/// never a certificate that the input is Markov.
struct DpiSearch {
  int draws = 0;
  double threshold = -0.01;
  double best_delta = 0.0;
  int best_index = -1;
  bool found = false;
  double cmi = 0.0;
  Matrix best_u;
};
DpiSearch dpi_counterexample_search(const Matrix& rho_ase, int da, int ds, int de, int draws, Rng& rng,
                                    double threshold = -0.01);

/// (|000> + |111>)/sqrt(2) on A (x) S (x) E, qubits.
DensityMatrix ghz_state();

}  // namespace cpdyn
