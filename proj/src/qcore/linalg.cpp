// Copyright 2026 The qsgd authors
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

#include "qsgd/qcore/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qsgd {

namespace {

double off_diagonal_frobenius(const CMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigenSystem hermitian_eigensystem(const CMatrix& input) {
  if (input.hermiticity_defect() > 1e-10)
    throw std::invalid_argument("hermitian_eigensystem: matrix is not Hermitian within 1e-10");
  const int n = input.dim();

  // Work on the Hermitian average so rounding in the input cannot push the
  // iteration off the Hermitian manifold.
  CMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));

  CMatrix v = CMatrix::identity(n);

  constexpr double kOffTol = 1e-12;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_frobenius(a) > kOffTol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cdouble apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cdouble eip = apq / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Rotation J: J(p,p)=c, J(q,q)=c, J(p,q)=s e^{i phi}, J(q,p)=-s e^{-i phi};
        // apply A <- J^dagger A J, V <- V J.
        for (int k = 0; k < n; ++k) {
          const cdouble akp = a(p, k);
          const cdouble akq = a(q, k);
          a(p, k) = c * akp - s * eip * akq;
          a(q, k) = s * std::conj(eip) * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const cdouble akp = a(k, p);
          const cdouble akq = a(k, q);
          a(k, p) = c * akp - s * std::conj(eip) * akq;
          a(k, q) = s * eip * akp + c * akq;
          const cdouble vkp = v(k, p);
          const cdouble vkq = v(k, q);
          v(k, p) = c * vkp - s * std::conj(eip) * vkq;
          v(k, q) = s * eip * vkp + c * vkq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = cdouble(a(p, p).real(), 0.0);
        a(q, q) = cdouble(a(q, q).real(), 0.0);
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] > diag[y]; });

  EigenSystem out;
  out.values.resize(n);
  out.vectors = CMatrix(n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& a) {
  return hermitian_eigensystem(a).values;
}

double trace_norm(const CMatrix& a) {
  const auto ev = hermitian_eigenvalues(a);
  double s = 0.0;
  for (double x : ev) s += std::abs(x);
  return s;
}

CMatrix expm(const CMatrix& a) {
  const int n = a.dim();
  // Infinity norm controls the scaling.
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(a(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }

  CMatrix scaled = a;
  scaled *= scale;

  CMatrix result = CMatrix::identity(n);
  CMatrix term = CMatrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = term * scaled;
    term *= 1.0 / k;
    result += term;
    if (term.max_abs() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace qsgd
