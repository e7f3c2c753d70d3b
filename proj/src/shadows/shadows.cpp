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

#include "qsgd/shadows/shadows.hpp"

#include <cmath>
#include <stdexcept>

namespace qsgd::shadows {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

CMatrix hadamard() {
  CMatrix h(2);
  h(0, 0) = kInvSqrt2;
  h(0, 1) = kInvSqrt2;
  h(1, 0) = kInvSqrt2;
  h(1, 1) = -kInvSqrt2;
  return h;
}

}  // namespace

std::vector<uint8_t> ShadowSnapshot::to_bytes() const {
  std::vector<uint8_t> out;
  out.reserve(1 + 2 * basis_choices.size());
  out.push_back(static_cast<uint8_t>(basis_choices.size()));
  for (Basis b : basis_choices) out.push_back(static_cast<uint8_t>(b));
  out.insert(out.end(), bits.begin(), bits.end());
  return out;
}

ShadowSnapshot ShadowSnapshot::from_bytes(std::span<const uint8_t> bytes) {
  if (bytes.empty()) throw std::invalid_argument("ShadowSnapshot: empty byte string");
  const int d = bytes[0];
  if (static_cast<int>(bytes.size()) != 1 + 2 * d)
    throw std::invalid_argument("ShadowSnapshot: byte length mismatch");
  ShadowSnapshot snap;
  for (int j = 0; j < d; ++j) {
    const uint8_t b = bytes[1 + j];
    if (b > 2) throw std::invalid_argument("ShadowSnapshot: bad basis byte");
    snap.basis_choices.push_back(static_cast<Basis>(b));
  }
  for (int j = 0; j < d; ++j) {
    const uint8_t b = bytes[1 + d + j];
    if (b > 1) throw std::invalid_argument("ShadowSnapshot: bad bit byte");
    snap.bits.push_back(b);
  }
  return snap;
}

CMatrix basis_rotation(Basis b) {
  switch (b) {
    case Basis::z: return CMatrix::identity(2);
    case Basis::x: return hadamard();
    case Basis::y: {
      // H S^dagger with S = diag(1, i)
      CMatrix sdag(2);
      sdag(0, 0) = 1.0;
      sdag(1, 1) = cdouble(0.0, -1.0);
      return hadamard() * sdag;
    }
  }
  throw std::invalid_argument("basis_rotation: bad basis");
}

Ket snapshot_eigenket(Basis b, int bit) {
  Ket k(2);
  switch (b) {
    case Basis::z:
      k.amp[bit] = 1.0;
      break;
    case Basis::x:
      k.amp[0] = kInvSqrt2;
      k.amp[1] = bit ? -kInvSqrt2 : kInvSqrt2;
      break;
    case Basis::y:
      k.amp[0] = kInvSqrt2;
      k.amp[1] = bit ? cdouble(0.0, -kInvSqrt2) : cdouble(0.0, kInvSqrt2);
      break;
  }
  return k;
}

CMatrix gamma0(const CMatrix& b) {
  if (b.dim() != 2) throw std::invalid_argument("gamma0: 2x2 input required");
  CMatrix out(2);
  for (int basis = 0; basis < 3; ++basis) {
    for (int bit = 0; bit < 2; ++bit) {
      const Ket omega = snapshot_eigenket(static_cast<Basis>(basis), bit);
      // <omega|B|omega>
      cdouble val = 0.0;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) val += std::conj(omega.amp[r]) * b(r, c) * omega.amp[c];
      CMatrix proj = density(omega);
      proj *= val / 3.0;
      out += proj;
    }
  }
  return out;
}

CMatrix gamma0_inv_pure(const Ket& omega) {
  if (omega.dim() != 2) throw std::invalid_argument("gamma0_inv_pure: qubit ket required");
  CMatrix out = density(omega);
  out *= 3.0;
  out -= CMatrix::identity(2);
  return out;
}

ShadowSnapshot sample_snapshot(const CMatrix& rho, RngStream& rng) {
  const int d = num_qubits_of_dim(rho.dim());
  ShadowSnapshot snap;
  snap.basis_choices.resize(d);
  for (int j = 0; j < d; ++j) snap.basis_choices[j] = static_cast<Basis>(rng.uniform_int(3));

  CMatrix v(1);
  v(0, 0) = 1.0;
  for (int j = 0; j < d; ++j) v = tensor(v, basis_rotation(snap.basis_choices[j]));
  const CMatrix rotated = v * rho * v.adjoint();

  std::vector<double> probs(rho.dim());
  for (int i = 0; i < rho.dim(); ++i) probs[i] = rotated(i, i).real();
  const int outcome = rng.discrete(probs);

  snap.bits.resize(d);
  for (int j = 0; j < d; ++j) snap.bits[j] = static_cast<uint8_t>((outcome >> (d - 1 - j)) & 1);
  return snap;
}

ShadowMatrix shadow_matrix(const ShadowSnapshot& snap) {
  ShadowMatrix out;
  out.factors.reserve(snap.basis_choices.size());
  for (int j = 0; j < snap.num_qubits(); ++j)
    out.factors.push_back(gamma0_inv_pure(snapshot_eigenket(snap.basis_choices[j], snap.bits[j])));
  return out;
}

CMatrix ShadowMatrix::dense() const {
  CMatrix out(1);
  out(0, 0) = 1.0;
  for (const auto& f : factors) out = tensor(out, f);
  return out;
}

CMatrix local_shadow(const ShadowSnapshot& snap, std::span<const int> qubits) {
  std::vector<bool> seen(snap.num_qubits(), false);
  CMatrix out(1);
  out(0, 0) = 1.0;
  for (int q : qubits) {
    if (q < 0 || q >= snap.num_qubits() || seen[q])
      throw std::invalid_argument("local_shadow: bad qubit index");
    seen[q] = true;
    out = tensor(out, gamma0_inv_pure(snapshot_eigenket(snap.basis_choices[q], snap.bits[q])));
  }
  return out;
}

double estimate_observable(std::span<const ShadowSnapshot> snaps, const CMatrix& m_local,
                           std::span<const int> support) {
  if (snaps.empty()) throw std::invalid_argument("estimate_observable: no snapshots");
  if (m_local.dim() != (1 << support.size()))
    throw std::invalid_argument("estimate_observable: observable/support size mismatch");
  if (static_cast<int>(support.size()) > snaps[0].num_qubits())
    throw std::invalid_argument("estimate_observable: support larger than system");
  cdouble acc = 0.0;
  for (const auto& snap : snaps) {
    const CMatrix sh = local_shadow(snap, support);
    for (int r = 0; r < sh.dim(); ++r)
      for (int c = 0; c < sh.dim(); ++c) acc += m_local(r, c) * sh(c, r);
  }
  acc /= static_cast<double>(snaps.size());
  const double scale = std::max(1.0, std::abs(acc));
  if (std::abs(acc.imag()) > 1e-12 * scale)
    throw std::runtime_error("estimate_observable: imaginary residue too large");
  return acc.real();
}

void for_each_snapshot(const CMatrix& rho,
                       const std::function<void(const ShadowSnapshot&, double)>& fn) {
  const int d = num_qubits_of_dim(rho.dim());
  if (d > 3) throw std::invalid_argument("for_each_snapshot: d <= 3 enumeration bound");
  const int dim = rho.dim();
  int ncombo = 1;
  for (int j = 0; j < d; ++j) ncombo *= 3;
  const double basis_weight = 1.0 / ncombo;

  for (int combo = 0; combo < ncombo; ++combo) {
    ShadowSnapshot snap;
    snap.basis_choices.resize(d);
    int c = combo;
    for (int j = d - 1; j >= 0; --j) {
      snap.basis_choices[j] = static_cast<Basis>(c % 3);
      c /= 3;
    }
    CMatrix v(1);
    v(0, 0) = 1.0;
    for (int j = 0; j < d; ++j) v = tensor(v, basis_rotation(snap.basis_choices[j]));
    const CMatrix rotated = v * rho * v.adjoint();
    snap.bits.resize(d);
    for (int outcome = 0; outcome < dim; ++outcome) {
      const double p = rotated(outcome, outcome).real() * basis_weight;
      for (int j = 0; j < d; ++j)
        snap.bits[j] = static_cast<uint8_t>((outcome >> (d - 1 - j)) & 1);
      fn(snap, p);
    }
  }
}

namespace {

// Shared enumeration driver: evaluates fn on every snapshot into a
// deterministic slot, then reduces in fixed order.
template <typename T, typename Fn, typename Init, typename Axpy>
T brute_force_impl(const CMatrix& rho, const Fn& fn, Exec exec, Init init, Axpy axpy) {
  std::vector<ShadowSnapshot> snaps;
  std::vector<double> probs;
  for_each_snapshot(rho, [&](const ShadowSnapshot& s, double p) {
    snaps.push_back(s);
    probs.push_back(p);
  });
  const int n = static_cast<int>(snaps.size());
  std::vector<T> slots(n);
  for_each_index(exec, n, [&](int i) { slots[i] = fn(snaps[i]); });
  T acc = init();
  for (int i = 0; i < n; ++i) axpy(acc, probs[i], slots[i]);
  return acc;
}

}  // namespace

double brute_force_expectation(const CMatrix& rho,
                               const std::function<double(const ShadowSnapshot&)>& fn, Exec exec) {
  return brute_force_impl<double>(
      rho, fn, exec, [] { return 0.0; },
      [](double& acc, double p, double v) { acc += p * v; });
}

CMatrix brute_force_expectation_matrix(const CMatrix& rho,
                                       const std::function<CMatrix(const ShadowSnapshot&)>& fn,
                                       Exec exec) {
  return brute_force_impl<CMatrix>(
      rho, fn, exec, [&] { return CMatrix(rho.dim()); },
      [](CMatrix& acc, double p, const CMatrix& v) {
        CMatrix scaled = v;
        scaled *= p;
        acc += scaled;
      });
}

std::vector<double> brute_force_expectation_vector(
    const CMatrix& rho, const std::function<std::vector<double>(const ShadowSnapshot&)>& fn,
    Exec exec) {
  return brute_force_impl<std::vector<double>>(
      rho, fn, exec, [] { return std::vector<double>(); },
      [](std::vector<double>& acc, double p, const std::vector<double>& v) {
        if (acc.empty()) acc.assign(v.size(), 0.0);
        for (size_t k = 0; k < v.size(); ++k) acc[k] += p * v[k];
      });
}

}  // namespace qsgd::shadows
