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

#pragma once

#include <algorithm>
#include <complex>
#include <span>
#include <vector>

namespace qsgd {

using cdouble = std::complex<double>;

/// Dense row-major complex matrix. Dimensions here are always a power of two
/// (2^d for d qubits, d <= 6 at desk scale), with qubit 0 the most significant
/// bit of the basis index. Values are immutable in spirit: every operation
/// returns a fresh matrix, so instances can be shared across threads.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

  static CMatrix identity(int dim);

  int dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  cdouble& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const cdouble& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

  cdouble* data() { return a_.data(); }
  const cdouble* data() const { return a_.data(); }

  void set_zero() { std::fill(a_.begin(), a_.end(), cdouble(0.0, 0.0)); }
  /// Reshape to dim x dim without preserving contents (reuses storage).
  void reset(int dim) {
    dim_ = dim;
    a_.assign(static_cast<size_t>(dim) * dim, cdouble(0.0, 0.0));
  }

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cdouble s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(cdouble s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);  // matrix product

  CMatrix adjoint() const;
  cdouble trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  /// max |A[i][j] - conj(A[j][i])|
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }
  bool is_unitary(double tol = 1e-10) const;

 private:
  int dim_ = 0;
  std::vector<cdouble> a_;
};

/// Unit-norm state vector (squared norm within 1e-12 of 1 for physical kets).
struct Ket {
  std::vector<cdouble> amp;

  Ket() = default;
  explicit Ket(int dim) : amp(dim) {}
  int dim() const { return static_cast<int>(amp.size()); }
  double norm() const;
  void normalize();
};

CMatrix density(const Ket& k);     // |k><k|
CMatrix outer(const Ket& a, const Ket& b);  // |a><b|

CMatrix tensor(const CMatrix& a, const CMatrix& b);
Ket tensor(const Ket& a, const Ket& b);
CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// Trace out the listed qubits (indices in [0,d)); remaining qubits keep their
/// relative order. Qubit 0 is the most significant bit of the basis index.
CMatrix partial_trace(const CMatrix& a, int num_qubits, std::span<const int> traced);

/// Embed an operator acting on `support` (strictly increasing qubit indices)
/// into the full d-qubit space, identity elsewhere.
CMatrix embed_on_qubits(const CMatrix& op, int num_qubits, std::span<const int> support);

int num_qubits_of_dim(int dim);  // log2, throws unless dim is a power of two

}  // namespace qsgd
