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

// Reference implementations used as test oracles. Everything here is written
// with explicit index loops and Eigen's own solvers so that it shares no code
// path with the library under test.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using MapFn = std::function<Mat(const Mat&)>;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Tr_2 of an operator on C^d1 (x) C^d2.
inline Mat trace_out_second(const Mat& m, int d1, int d2) {
  Mat out = Mat::Zero(d1, d1);
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d1; ++b)
      for (int e = 0; e < d2; ++e) out(a, b) += m(a * d2 + e, b * d2 + e);
  return out;
}

/// Tr_1 of an operator on C^d1 (x) C^d2.
inline Mat trace_out_first(const Mat& m, int d1, int d2) {
  Mat out = Mat::Zero(d2, d2);
  for (int a = 0; a < d2; ++a)
    for (int b = 0; b < d2; ++b)
      for (int s = 0; s < d1; ++s) out(a, b) += m(s * d2 + a, s * d2 + b);
  return out;
}

/// Partial trace on three factors; keep[k] selects the kept factors.
inline Mat partial_trace3(const Mat& m, int d0, int d1, int d2, bool k0, bool k1, bool k2) {
  const int r0 = k0 ? d0 : 1, r1 = k1 ? d1 : 1, r2 = k2 ? d2 : 1;
  Mat out = Mat::Zero(r0 * r1 * r2, r0 * r1 * r2);
  for (int a = 0; a < d0; ++a)
    for (int b = 0; b < d1; ++b)
      for (int c = 0; c < d2; ++c)
        for (int a2 = 0; a2 < d0; ++a2)
          for (int b2 = 0; b2 < d1; ++b2)
            for (int c2 = 0; c2 < d2; ++c2) {
              if ((!k0 && a != a2) || (!k1 && b != b2) || (!k2 && c != c2)) continue;
              const int row = ((k0 ? a : 0) * r1 + (k1 ? b : 0)) * r2 + (k2 ? c : 0);
              const int col = ((k0 ? a2 : 0) * r1 + (k1 ? b2 : 0)) * r2 + (k2 ? c2 : 0);
              out(row, col) += m((a * d1 + b) * d2 + c, (a2 * d1 + b2) * d2 + c2);
            }
  return out;
}

inline Eigen::VectorXd eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_eigenvalue(const Mat& h) { return eigenvalues(h).minCoeff(); }

inline double entropy(const Mat& rho) {
  double s = 0.0;
  for (double l : eigenvalues(rho))
    if (l > 1e-12) s -= l * std::log(l);
  return s;
}

inline Mat unit(int d, int i, int j) {
  Mat e = Mat::Zero(d, d);
  e(i, j) = 1.0;
  return e;
}

/// sum_ij |i><j| (x) f(|i><j|)
inline Mat choi(const MapFn& f, int din) {
  const Mat probe = f(unit(din, 0, 0));
  const int dout = static_cast<int>(probe.rows());
  Mat c = Mat::Zero(din * dout, din * dout);
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j) {
      const Mat y = f(unit(din, i, j));
      for (int a = 0; a < dout; ++a)
        for (int b = 0; b < dout; ++b) c(i * dout + a, j * dout + b) = y(a, b);
    }
  return c;
}

/// x -> Tr_E(U lambda(x) U^dagger)
inline MapFn reduced(const Mat& u, const MapFn& lambda, int ds, int de) {
  return [=](const Mat& x) { return trace_out_second(u * lambda(x) * u.adjoint(), ds, de); };
}

/// Superoperator matrix in the row-major convention: column i*d+j holds the
/// row-major flattening of f(|i><j|).
inline Mat superop(const MapFn& f, int din) {
  const int dout = static_cast<int>(f(unit(din, 0, 0)).rows());
  Mat m(dout * dout, din * din);
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j) {
      const Mat y = f(unit(din, i, j));
      for (int a = 0; a < dout; ++a)
        for (int b = 0; b < dout; ++b) m(a * dout + b, i * din + j) = y(a, b);
    }
  return m;
}

inline Mat swap(int d) {
  Mat u = Mat::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) u(b * d + a, a * d + b) = 1.0;
  return u;
}

/// CNOT with E as control and S as target on C^2 (x) C^2 (S first).
inline Mat cnot_e_controls_s() {
  Mat u = Mat::Zero(4, 4);
  for (int s = 0; s < 2; ++s)
    for (int e = 0; e < 2; ++e) u(((s ^ e) * 2) + e, s * 2 + e) = 1.0;
  return u;
}

inline double mutual_information(const Mat& rho, int da, int db) {
  return entropy(trace_out_second(rho, da, db)) + entropy(trace_out_first(rho, da, db)) - entropy(rho);
}

}  // namespace oracle
