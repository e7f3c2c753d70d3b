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

#include "qsgd/qcore/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace qsgd {

CMatrix CMatrix::identity(int dim) {
  CMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("CMatrix: dimension mismatch in +=");
  for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("CMatrix: dimension mismatch in -=");
  for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cdouble s) {
  for (auto& v : a_) v *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("CMatrix: dimension mismatch in product");
  const int n = a.dim_;
  CMatrix out(n);
  for (int i = 0; i < n; ++i) {
    const cdouble* arow = a.data() + static_cast<size_t>(i) * n;
    cdouble* orow = out.data() + static_cast<size_t>(i) * n;
    for (int k = 0; k < n; ++k) {
      const cdouble aik = arow[k];
      if (aik == cdouble(0.0, 0.0)) continue;
      const cdouble* brow = b.data() + static_cast<size_t>(k) * n;
      for (int j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

cdouble CMatrix::trace() const {
  cdouble t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double CMatrix::hermiticity_defect() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

bool CMatrix::is_unitary(double tol) const {
  CMatrix p = (*this) * adjoint();
  p -= identity(dim_);
  return p.max_abs() <= tol;
}

double Ket::norm() const {
  double s = 0.0;
  for (const auto& v : amp) s += std::norm(v);
  return std::sqrt(s);
}

void Ket::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("Ket: cannot normalize the zero vector");
  for (auto& v : amp) v /= n;
}

CMatrix density(const Ket& k) {
  const int n = k.dim();
  CMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = k.amp[i] * std::conj(k.amp[j]);
  return out;
}

CMatrix outer(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("outer: dimension mismatch");
  CMatrix out(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) out(i, j) = a.amp[i] * std::conj(b.amp[j]);
  return out;
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  const int na = a.dim(), nb = b.dim();
  CMatrix out(na * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) {
      const cdouble aij = a(i, j);
      if (aij == cdouble(0.0, 0.0)) continue;
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

Ket tensor(const Ket& a, const Ket& b) {
  Ket out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 0; k < b.dim(); ++k) out.amp[i * b.dim() + k] = a.amp[i] * b.amp[k];
  return out;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

int num_qubits_of_dim(int dim) {
  int d = 0;
  int x = dim;
  while (x > 1) {
    if (x & 1) throw std::invalid_argument("dimension is not a power of two");
    x >>= 1;
    ++d;
  }
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  return d;
}

namespace {

// Scatter `value` bits (MSB-first over `positions`) into a d-qubit basis index.
int place_bits(int value, std::span<const int> positions, int num_qubits) {
  int idx = 0;
  const int n = static_cast<int>(positions.size());
  for (int i = 0; i < n; ++i) {
    const int bit = (value >> (n - 1 - i)) & 1;
    idx |= bit << (num_qubits - 1 - positions[i]);
  }
  return idx;
}

}  // namespace

CMatrix partial_trace(const CMatrix& a, int num_qubits, std::span<const int> traced) {
  if (a.dim() != (1 << num_qubits)) throw std::invalid_argument("partial_trace: dim mismatch");
  std::vector<bool> is_traced(num_qubits, false);
  for (int q : traced) {
    if (q < 0 || q >= num_qubits || is_traced[q])
      throw std::invalid_argument("partial_trace: bad qubit index");
    is_traced[q] = true;
  }
  std::vector<int> kept;
  for (int q = 0; q < num_qubits; ++q)
    if (!is_traced[q]) kept.push_back(q);
  std::vector<int> tr(traced.begin(), traced.end());

  const int nk = 1 << kept.size();
  const int nt = 1 << tr.size();
  CMatrix out(nk);
  for (int r = 0; r < nk; ++r) {
    const int rbase = place_bits(r, kept, num_qubits);
    for (int c = 0; c < nk; ++c) {
      const int cbase = place_bits(c, kept, num_qubits);
      cdouble acc = 0.0;
      for (int t = 0; t < nt; ++t) {
        const int toff = place_bits(t, tr, num_qubits);
        acc += a(rbase | toff, cbase | toff);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

CMatrix embed_on_qubits(const CMatrix& op, int num_qubits, std::span<const int> support) {
  const int k = static_cast<int>(support.size());
  if (op.dim() != (1 << k)) throw std::invalid_argument("embed_on_qubits: operator dim mismatch");
  for (int i = 0; i < k; ++i) {
    if (support[i] < 0 || support[i] >= num_qubits)
      throw std::invalid_argument("embed_on_qubits: qubit index out of range");
    if (i > 0 && support[i] <= support[i - 1])
      throw std::invalid_argument("embed_on_qubits: support must be strictly increasing");
  }
  std::vector<bool> in_support(num_qubits, false);
  for (int q : support) in_support[q] = true;
  std::vector<int> rest;
  for (int q = 0; q < num_qubits; ++q)
    if (!in_support[q]) rest.push_back(q);

  const int nr = 1 << rest.size();
  const int nk = 1 << k;
  CMatrix out(1 << num_qubits);
  for (int i = 0; i < nk; ++i) {
    const int ibase = place_bits(i, support, num_qubits);
    for (int j = 0; j < nk; ++j) {
      const cdouble v = op(i, j);
      if (v == cdouble(0.0, 0.0)) continue;
      const int jbase = place_bits(j, support, num_qubits);
      for (int r = 0; r < nr; ++r) {
        const int roff = place_bits(r, rest, num_qubits);
        out(ibase | roff, jbase | roff) = v;
      }
    }
  }
  return out;
}

}  // namespace qsgd
