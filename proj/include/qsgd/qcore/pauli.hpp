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

#include <cstdint>
#include <string>
#include <vector>

#include "qsgd/qcore/matrix.hpp"

namespace qsgd {

// Letters: 0 = I, 1 = X, 2 = Y, 3 = Z.
enum : uint8_t { kPauliI = 0, kPauliX = 1, kPauliY = 2, kPauliZ = 3 };

/// A signed Pauli string: phase * (sigma^{s_0} x ... x sigma^{s_{d-1}}), with
/// the phase one of {1, i, -1, -i} stored as a quarter-turn count (phase = i^q).
/// Qubit 0 is the leftmost letter and the most significant bit of basis
/// indices.
struct PauliString {
  std::vector<uint8_t> letters;
  uint8_t quarter_turns = 0;

  PauliString() = default;
  PauliString(std::vector<uint8_t> ls, uint8_t q = 0) : letters(std::move(ls)), quarter_turns(q) {}

  static PauliString identity(int num_qubits) { return PauliString(std::vector<uint8_t>(num_qubits, 0)); }
  /// Parse "XZYI" (optionally prefixed with +, -, +i, -i).
  static PauliString from_text(const std::string& text);

  int num_qubits() const { return static_cast<int>(letters.size()); }
  cdouble phase() const;
  bool is_identity_string() const;
  bool phase_is_real() const { return (quarter_turns & 1) == 0; }
  std::string text() const;

  friend bool operator==(const PauliString& a, const PauliString& b) = default;
};

/// Unique t (with combined phase) such that sigma^r sigma^s = phase * sigma^t.
/// This realizes the structure constants kappa_{rst}: kappa is the returned
/// phase when t matches the returned string and zero otherwise.
PauliString pauli_product(const PauliString& r, const PauliString& s);

/// Dense realization phase * tensor of single-qubit Paulis. d <= 12.
CMatrix pauli_matrix(const PauliString& p);

/// exp(i * angle * sigma^p) = cos(angle) I + i sin(angle) pauli_matrix(p),
/// valid because (sigma^p)^2 = I. Requires a real phase (+1 or -1).
CMatrix pauli_exp(const PauliString& p, double angle);

/// Base-4 code of the letter string (qubit 0 = most significant digit); the
/// canonical index into tables over all 4^d strings.
int pauli_code(const PauliString& p);
PauliString pauli_from_code(int code, int num_qubits);

/// Precomputed permutation form of a Pauli string: sigma|i> = coeff[i] |perm[i]>.
/// All the hot kernels (left/right multiplication, exp-conjugation, traces)
/// run in O(dim^2) through this instead of dense O(dim^3) products.
class PauliAction {
 public:
  explicit PauliAction(const PauliString& p);

  int dim() const { return dim_; }

  void mul_left(const CMatrix& in, CMatrix& out) const;   // out = sigma * in
  void mul_right(const CMatrix& in, CMatrix& out) const;  // out = in * sigma

  /// out = e^{i a sigma} in e^{-i a sigma}; requires the string phase be +1.
  void conjugate_exp(double angle, const CMatrix& in, CMatrix& out) const;
  /// out = e^{i a sigma} * in
  void apply_exp_left(double angle, const CMatrix& in, CMatrix& out) const;
  /// out = e^{-i a sigma} in e^{+i a sigma}
  void conjugate_exp_inverse(double angle, const CMatrix& in, CMatrix& out) const;

  cdouble trace_b_sigma_rho(const CMatrix& b, const CMatrix& rho) const;  // tr{B sigma rho}
  cdouble trace_b_rho_sigma(const CMatrix& b, const CMatrix& rho) const;  // tr{B rho sigma}

 private:
  int dim_ = 0;
  bool real_phase_ = true;
  std::vector<int> perm_;
  std::vector<cdouble> coeff_;
};

}  // namespace qsgd
