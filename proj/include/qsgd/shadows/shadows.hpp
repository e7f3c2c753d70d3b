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
#include <functional>
#include <span>
#include <vector>

#include "qsgd/parallel.hpp"
#include "qsgd/qcore/matrix.hpp"
#include "qsgd/qcore/rng.hpp"

namespace qsgd::shadows {

/// Measurement basis per qubit. The rotation applied to the state before a
/// computational-basis measurement is I (Z), H (X) or H S-dagger (Y), with
/// S = diag(1, i); the recovered eigenkets V-dagger |b> therefore run over
/// {|0>, |1>, |+>, |->, |+i>, |-i>}.
enum class Basis : uint8_t { z = 0, x = 1, y = 2 };

struct ShadowSnapshot {
  std::vector<Basis> basis_choices;
  std::vector<uint8_t> bits;

  int num_qubits() const { return static_cast<int>(basis_choices.size()); }

  std::vector<uint8_t> to_bytes() const;
  static ShadowSnapshot from_bytes(std::span<const uint8_t> bytes);
};

/// Rotation applied before measurement for one basis choice.
CMatrix basis_rotation(Basis b);
/// The post-measurement eigenket omega = V^dagger |bit>.
Ket snapshot_eigenket(Basis b, int bit);

/// Depolarizing-average channel of the 3-basis measure-and-prepare procedure:
/// Gamma0[B] = (1/3) sum_{V} sum_b <b|V^dagger B V|b> V|b><b|V^dagger.
CMatrix gamma0(const CMatrix& b);
/// Gamma0^{-1} on a pure state: 3|omega><omega| - I.
CMatrix gamma0_inv_pure(const Ket& omega);

/// One randomized Pauli measurement of a d-qubit state: uniform basis choice
/// per qubit, then one joint Born draw of the full bit string (the state may
/// be entangled, so bits are sampled jointly, not per-qubit).
ShadowSnapshot sample_snapshot(const CMatrix& rho, RngStream& rng);

/// Per-qubit factors 3|omega_j><omega_j| - I (each trace 1, eigenvalues
/// {2, -1}); densified lazily via dense().
struct ShadowMatrix {
  std::vector<CMatrix> factors;  // d matrices of size 2x2

  int num_qubits() const { return static_cast<int>(factors.size()); }
  CMatrix dense() const;  // tensor product of all factors, trace 1
};

ShadowMatrix shadow_matrix(const ShadowSnapshot& snap);

/// Tensor product of the selected factors only (distinct in-range indices, in
/// the order given).
CMatrix local_shadow(const ShadowSnapshot& snap, std::span<const int> qubits);

/// Empirical-average estimator (1/n) sum_i tr{M local_shadow(snap_i, support)}.
/// M is Hermitian on its support; the imaginary residue must stay below 1e-12
/// (relative) and is discarded after the check.
double estimate_observable(std::span<const ShadowSnapshot> snaps, const CMatrix& m_local,
                           std::span<const int> support);

/// Exhaustive enumeration over all (basis choices, outcomes) pairs with their
/// exact probabilities; d <= 3. `fn` receives each snapshot and its
/// probability. Enumeration order is fixed (basis combinations in base-3
/// order, then bit strings), independent of the execution policy.
void for_each_snapshot(const CMatrix& rho, const std::function<void(const ShadowSnapshot&, double)>& fn);

/// Exact expectation of a scalar statistic over all snapshot randomness.
double brute_force_expectation(const CMatrix& rho, const std::function<double(const ShadowSnapshot&)>& fn,
                               Exec exec = Exec::parallel);
/// Exact expectation of a matrix statistic (e.g. the shadow itself).
CMatrix brute_force_expectation_matrix(const CMatrix& rho,
                                       const std::function<CMatrix(const ShadowSnapshot&)>& fn,
                                       Exec exec = Exec::parallel);
/// Exact expectation of a vector statistic (e.g. a gradient estimate).
std::vector<double> brute_force_expectation_vector(
    const CMatrix& rho, const std::function<std::vector<double>(const ShadowSnapshot&)>& fn,
    Exec exec = Exec::parallel);

}  // namespace qsgd::shadows
