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

#include "qsgd/qcore/pauli.hpp"

#include <cmath>
#include <stdexcept>

namespace qsgd {

namespace {

constexpr cdouble kQuarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// Single-qubit products sigma^a sigma^b = i^q sigma^c, as (c, q) tables.
// XY = iZ, YZ = iX, ZX = iY; reversed order conjugates the phase.
constexpr uint8_t kMulLetter[4][4] = {
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
};
constexpr uint8_t kMulQuarter[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
};

}  // namespace

cdouble PauliString::phase() const { return kQuarter[quarter_turns & 3]; }

bool PauliString::is_identity_string() const {
  for (uint8_t l : letters)
    if (l != 0) return false;
  return true;
}

PauliString PauliString::from_text(const std::string& text) {
  PauliString p;
  size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    const bool neg = text[i] == '-';
    ++i;
    if (i < text.size() && text[i] == 'i') {
      p.quarter_turns = neg ? 3 : 1;
      ++i;
    } else {
      p.quarter_turns = neg ? 2 : 0;
    }
  }
  for (; i < text.size(); ++i) {
    switch (text[i]) {
      case 'I': p.letters.push_back(kPauliI); break;
      case 'X': p.letters.push_back(kPauliX); break;
      case 'Y': p.letters.push_back(kPauliY); break;
      case 'Z': p.letters.push_back(kPauliZ); break;
      default: throw std::invalid_argument("PauliString: bad letter in '" + text + "'");
    }
  }
  return p;
}

std::string PauliString::text() const {
  static const char* kSign[4] = {"", "+i", "-", "-i"};
  std::string s = kSign[quarter_turns & 3];
  static const char kLetter[4] = {'I', 'X', 'Y', 'Z'};
  for (uint8_t l : letters) s.push_back(kLetter[l]);
  return s;
}

PauliString pauli_product(const PauliString& r, const PauliString& s) {
  if (r.num_qubits() != s.num_qubits())
    throw std::invalid_argument("pauli_product: length mismatch");
  PauliString out;
  out.letters.resize(r.letters.size());
  unsigned q = static_cast<unsigned>(r.quarter_turns) + s.quarter_turns;
  for (size_t j = 0; j < r.letters.size(); ++j) {
    const uint8_t a = r.letters[j], b = s.letters[j];
    out.letters[j] = kMulLetter[a][b];
    q += kMulQuarter[a][b];
  }
  out.quarter_turns = static_cast<uint8_t>(q & 3);
  return out;
}

CMatrix pauli_matrix(const PauliString& p) {
  if (p.num_qubits() > 12) throw std::invalid_argument("pauli_matrix: more than 12 qubits");
  const PauliAction act(p);
  CMatrix out(act.dim());
  CMatrix id = CMatrix::identity(act.dim());
  act.mul_left(id, out);
  return out;
}

CMatrix pauli_exp(const PauliString& p, double angle) {
  if (!p.phase_is_real()) throw std::invalid_argument("pauli_exp: phase must be real (+1 or -1)");
  const int dim = 1 << p.num_qubits();
  CMatrix out = pauli_matrix(p);
  const cdouble is = cdouble(0.0, std::sin(angle));
  out *= is;
  const double c = std::cos(angle);
  for (int i = 0; i < dim; ++i) out(i, i) += c;
  return out;
}

int pauli_code(const PauliString& p) {
  int code = 0;
  for (uint8_t l : p.letters) code = code * 4 + l;
  return code;
}

PauliString pauli_from_code(int code, int num_qubits) {
  PauliString p;
  p.letters.assign(num_qubits, 0);
  for (int j = num_qubits - 1; j >= 0; --j) {
    p.letters[j] = static_cast<uint8_t>(code & 3);
    code >>= 2;
  }
  return p;
}

PauliAction::PauliAction(const PauliString& p) {
  const int d = p.num_qubits();
  dim_ = 1 << d;
  real_phase_ = p.phase_is_real();
  perm_.resize(dim_);
  coeff_.resize(dim_);
  for (int i = 0; i < dim_; ++i) {
    int target = i;
    cdouble c = p.phase();
    for (int j = 0; j < d; ++j) {
      const int pos = d - 1 - j;  // qubit j occupies bit (d-1-j)
      const int bit = (i >> pos) & 1;
      switch (p.letters[j]) {
        case kPauliI: break;
        case kPauliX: target ^= 1 << pos; break;
        case kPauliY:
          target ^= 1 << pos;
          c *= bit ? cdouble(0, -1) : cdouble(0, 1);
          break;
        case kPauliZ:
          if (bit) c = -c;
          break;
      }
    }
    perm_[i] = target;
    coeff_[i] = c;
  }
}

namespace {

// Reuse the output buffer across calls; the hot loops run once per gate per
// iteration and allocation dominates otherwise.
inline void ensure_shape(CMatrix& out, int dim, bool zero) {
  if (out.dim() != dim) {
    out.reset(dim);
  } else if (zero) {
    out.set_zero();
  }
}

}  // namespace

void PauliAction::mul_left(const CMatrix& in, CMatrix& out) const {
  ensure_shape(out, dim_, false);
  for (int i = 0; i < dim_; ++i) {
    const cdouble ci = coeff_[i];
    const cdouble* src = in.data() + static_cast<size_t>(i) * dim_;
    cdouble* dst = out.data() + static_cast<size_t>(perm_[i]) * dim_;
    for (int j = 0; j < dim_; ++j) dst[j] = ci * src[j];
  }
}

void PauliAction::mul_right(const CMatrix& in, CMatrix& out) const {
  ensure_shape(out, dim_, false);
  // (A sigma)[i][j] = A[i][perm[j]] * coeff[j]
  for (int i = 0; i < dim_; ++i) {
    const cdouble* src = in.data() + static_cast<size_t>(i) * dim_;
    cdouble* dst = out.data() + static_cast<size_t>(i) * dim_;
    for (int j = 0; j < dim_; ++j) dst[j] = src[perm_[j]] * coeff_[j];
  }
}

void PauliAction::apply_exp_left(double angle, const CMatrix& in, CMatrix& out) const {
  if (!real_phase_) throw std::invalid_argument("PauliAction: exp of a non-real-phase string");
  ensure_shape(out, dim_, true);
  const double c = std::cos(angle);
  const cdouble is(0.0, std::sin(angle));
  for (int i = 0; i < dim_; ++i) {
    const cdouble ici = is * coeff_[i];
    const cdouble* src = in.data() + static_cast<size_t>(i) * dim_;
    cdouble* keep = out.data() + static_cast<size_t>(i) * dim_;
    cdouble* flip = out.data() + static_cast<size_t>(perm_[i]) * dim_;
    for (int j = 0; j < dim_; ++j) {
      keep[j] += c * src[j];
      flip[j] += ici * src[j];
    }
  }
}

void PauliAction::conjugate_exp(double angle, const CMatrix& in, CMatrix& out) const {
  if (!real_phase_) throw std::invalid_argument("PauliAction: exp of a non-real-phase string");
  ensure_shape(out, dim_, true);
  const double c = std::cos(angle), s = std::sin(angle);
  const double c2 = c * c, s2 = s * s;
  const cdouble ics(0.0, c * s);
  // e^{ia s} A e^{-ia s} = c^2 A + i c s (sA - As) + s^2 sAs
  for (int i = 0; i < dim_; ++i) {
    const int pi = perm_[i];
    const cdouble ci = coeff_[i];
    const cdouble* src = in.data() + static_cast<size_t>(i) * dim_;
    cdouble* row_i = out.data() + static_cast<size_t>(i) * dim_;
    cdouble* row_pi = out.data() + static_cast<size_t>(pi) * dim_;
    for (int j = 0; j < dim_; ++j) {
      const cdouble v = src[j];
      const int pj = perm_[j];
      const cdouble cpj = coeff_[pj];
      row_i[j] += c2 * v;
      row_pi[j] += ics * ci * v;
      row_i[pj] -= ics * cpj * v;
      row_pi[pj] += s2 * ci * cpj * v;
    }
  }
}

void PauliAction::conjugate_exp_inverse(double angle, const CMatrix& in, CMatrix& out) const {
  conjugate_exp(-angle, in, out);
}

cdouble PauliAction::trace_b_sigma_rho(const CMatrix& b, const CMatrix& rho) const {
  // tr{B sigma rho} = sum_{i,r} B[r][perm[i]] coeff[i] rho[i][r]
  cdouble acc = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const int pi = perm_[i];
    const cdouble ci = coeff_[i];
    const cdouble* rrow = rho.data() + static_cast<size_t>(i) * dim_;
    cdouble part = 0.0;
    for (int r = 0; r < dim_; ++r) part += b(r, pi) * rrow[r];
    acc += ci * part;
  }
  return acc;
}

cdouble PauliAction::trace_b_rho_sigma(const CMatrix& b, const CMatrix& rho) const {
  // tr{B rho sigma} = sum_{r,j} B[r][j] rho[j][perm[r]] coeff[r]
  cdouble acc = 0.0;
  for (int r = 0; r < dim_; ++r) {
    const int pr = perm_[r];
    const cdouble* brow = b.data() + static_cast<size_t>(r) * dim_;
    cdouble part = 0.0;
    for (int j = 0; j < dim_; ++j) part += brow[j] * rho(j, pr);
    acc += coeff_[r] * part;
  }
  return acc;
}

}  // namespace qsgd
