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

#include "qsgd/gradients/gradients.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsgd::gradients {

namespace {

// K = sum_yhat l(y, yhat) M_yhat; Hermitian since the weights are real.
CMatrix loss_observable(int y, const Povm& povm, const LossFn& loss_fn) {
  CMatrix k(povm.dim());
  for (size_t i = 0; i < povm.ops.size(); ++i) {
    CMatrix term = povm.ops[i];
    term *= loss_fn.ell(y, povm.outcomes[i]);
    k += term;
  }
  return k;
}

// i tr{B [sigma, rho]} for Hermitian B, rho; checks the imaginary residue.
double commutator_derivative(const PauliAction& action, const CMatrix& b, const CMatrix& rho) {
  const cdouble t1 = action.trace_b_sigma_rho(b, rho);
  const cdouble t2 = action.trace_b_rho_sigma(b, rho);
  const cdouble d = cdouble(0.0, 1.0) * (t1 - t2);
  const double scale = std::max(1.0, std::abs(d));
  if (std::abs(d.imag()) > 1e-10 * scale)
    throw std::runtime_error("gradient: imaginary residue exceeds 1e-10");
  return d.real();
}

}  // namespace

std::vector<double> gradient_of_state(const CompiledAnsatz& compiled, const ParamVector& a,
                                      const CMatrix& rho_in, int y, const Povm& povm,
                                      const LossFn& loss_fn, Exec exec) {
  const int p = compiled.param_count();
  thread_local std::vector<CMatrix> rho_at;
  compiled.forward_states(a, rho_in, rho_at);
  const CMatrix k_obs = loss_observable(y, povm, loss_fn);
  std::vector<double> grad(p);

  if (exec == Exec::serial) {
    // Reference path: fold the trace into the backward sweep, no stored
    // observables. Produces bit-identical values to the parallel path (each
    // component is the same pure function of the same operands).
    thread_local CMatrix cur, next;
    cur = k_obs;
    const auto& steps = compiled.steps();
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      if (it->fixed) {
        cur = it->fixed->adjoint() * cur * (*it->fixed);
      } else {
        const auto& action = compiled.action(it->param);
        grad[it->param] = commutator_derivative(action, cur, rho_at[it->param]);
        action.conjugate_exp_inverse(a[it->param], cur, next);
        std::swap(cur, next);
      }
    }
    return grad;
  }

  thread_local std::vector<CMatrix> b_at;
  compiled.backward_observables(a, k_obs, b_at);
  for_each_index(exec, p, [&](int j) {
    grad[j] = commutator_derivative(compiled.action(j), b_at[j], rho_at[j]);
  });
  return grad;
}

GradEstimate exact_gradient(const CompiledAnsatz& compiled, const ParamVector& a,
                            const LabeledSample& sample, const Povm& povm, const LossFn& loss_fn,
                            Exec exec) {
  GradEstimate est;
  est.method = Method::exact;
  est.samples_consumed = 0;
  est.values = gradient_of_state(compiled, a, sample.density(), sample.label, povm, loss_fn, exec);
  return est;
}

GradEstimate exact_gradient(const AnsatzSpec& spec, const ParamVector& a,
                            const LabeledSample& sample, const Povm& povm, const LossFn& loss_fn,
                            Exec exec) {
  CompiledAnsatz compiled(spec);
  return exact_gradient(compiled, a, sample, povm, loss_fn, exec);
}

GradEstimate finite_difference_gradient(const AnsatzSpec& spec, const ParamVector& a,
                                        const LabeledSample& sample, const Povm& povm,
                                        const LossFn& loss_fn, double h) {
  if (!(h >= 1e-7 && h <= 1e-2))
    throw std::invalid_argument("finite_difference_gradient: h must lie in [1e-7, 1e-2]");
  CompiledAnsatz compiled(spec);
  const CMatrix rho = sample.density();
  GradEstimate est;
  est.method = Method::finite_difference;
  est.samples_consumed = 0;
  const int p = compiled.param_count();
  est.values.resize(p);
  ParamVector shifted = a;
  for (int j = 0; j < p; ++j) {
    shifted[j] = a[j] + h;
    const double lp = ansatz::loss_of_output(compiled.output_state(shifted, rho), sample.label,
                                             povm, loss_fn);
    shifted[j] = a[j] - h;
    const double lm = ansatz::loss_of_output(compiled.output_state(shifted, rho), sample.label,
                                             povm, loss_fn);
    shifted[j] = a[j];
    est.values[j] = (lp - lm) / (2.0 * h);
  }
  return est;
}

std::vector<HadamardOutcome> hadamard_test_distribution(const CompiledAnsatz& compiled,
                                                        const ParamVector& a,
                                                        const LabeledSample& sample,
                                                        const Povm& povm, const LossFn& loss_fn,
                                                        int param_index) {
  const int p = compiled.param_count();
  if (param_index < 0 || param_index >= p)
    throw std::invalid_argument("hadamard_test: parameter index out of range");
  const int dim = compiled.dim();
  const double quarter = std::numbers::pi / 4.0;

  // State through the parameter's own exponential, ancilla |+> appended as
  // the least significant qubit.
  const CMatrix rho_l = compiled.state_through(a, sample.density(), param_index);
  Ket plus(2);
  plus.amp[0] = plus.amp[1] = 1.0 / std::sqrt(2.0);
  CMatrix rho_tilde = tensor(rho_l, density(plus));

  // V_s = e^{-i pi/4 sigma} (x) |0><0| + e^{+i pi/4 sigma} (x) |1><1|
  // (the block assignment that realizes E[g] = dL/da with g = -2(-1)^z l).
  const PauliString& s = compiled.spec().generator(param_index);
  CMatrix p0(2), p1(2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const CMatrix vs = tensor(pauli_exp(s, -quarter), p0) + tensor(pauli_exp(s, quarter), p1);
  rho_tilde = vs * rho_tilde * vs.adjoint();

  const CMatrix u_gt = tensor(compiled.unitary_after(a, param_index), CMatrix::identity(2));
  rho_tilde = u_gt * rho_tilde * u_gt.adjoint();

  std::vector<HadamardOutcome> outcomes;
  outcomes.reserve(2 * povm.ops.size());
  for (size_t iy = 0; iy < povm.ops.size(); ++iy) {
    for (int z = 0; z < 2; ++z) {
      const CMatrix lambda = tensor(povm.ops[iy], z == 0 ? p0 : p1);
      cdouble prob = 0.0;
      for (int r = 0; r < 2 * dim; ++r)
        for (int c = 0; c < 2 * dim; ++c) prob += lambda(r, c) * rho_tilde(c, r);
      const double g = -2.0 * (z == 0 ? 1.0 : -1.0) *
                       loss_fn.ell(sample.label, povm.outcomes[iy]);
      outcomes.push_back({static_cast<int>(iy), z, prob.real(), g});
    }
  }
  return outcomes;
}

double hadamard_test_sample(const CompiledAnsatz& compiled, const ParamVector& a,
                            const LabeledSample& sample, const Povm& povm, const LossFn& loss_fn,
                            int param_index, RngStream& rng) {
  const auto dist = hadamard_test_distribution(compiled, a, sample, povm, loss_fn, param_index);
  std::vector<double> probs(dist.size());
  for (size_t i = 0; i < dist.size(); ++i) probs[i] = dist[i].probability;
  return dist[rng.discrete(probs)].g;
}

double hadamard_test_expectation(const CompiledAnsatz& compiled, const ParamVector& a,
                                 const LabeledSample& sample, const Povm& povm,
                                 const LossFn& loss_fn, int param_index) {
  double acc = 0.0;
  for (const auto& o : hadamard_test_distribution(compiled, a, sample, povm, loss_fn, param_index))
    acc += o.probability * o.g;
  return acc;
}

GradEstimate psr_gradient(const CompiledAnsatz& compiled, const ParamVector& a,
                          std::span<const LabeledSample> batch, const Povm& povm,
                          const LossFn& loss_fn, int m_shots, RngStream& rng, Exec exec) {
  const int p = compiled.param_count();
  if (m_shots < 1) throw std::invalid_argument("psr_gradient: m_shots must be >= 1");
  if (batch.size() < static_cast<size_t>(2) * m_shots * p)
    throw std::invalid_argument("psr_gradient: batch smaller than 2*m*p samples");
  const double quarter = std::numbers::pi / 4.0;

  GradEstimate est;
  est.method = Method::psr;
  est.samples_consumed = static_cast<long>(2) * m_shots * p;
  est.values.resize(p);
  // One draw from the caller's stream seeds this call; parameters then use
  // per-parameter derived streams so the result is schedule-independent and
  // successive calls stay decorrelated.
  const RngStream call_base(rng.next_u64());
  for_each_index(exec, p, [&](int j) {
    RngStream stream = call_base.child(static_cast<uint64_t>(j));
    ParamVector shifted = a;
    double mean_plus = 0.0, mean_minus = 0.0;
    for (int shot = 0; shot < m_shots; ++shot) {
      const LabeledSample& sp = batch[static_cast<size_t>(2) * m_shots * j + shot];
      shifted[j] = a[j] + quarter;
      const int yp = ansatz::sample_outcome_of_output(compiled.output_state(shifted, sp.density()),
                                                      povm, stream);
      mean_plus += loss_fn.ell(sp.label, yp);

      const LabeledSample& sm = batch[static_cast<size_t>(2) * m_shots * j + m_shots + shot];
      shifted[j] = a[j] - quarter;
      const int ym = ansatz::sample_outcome_of_output(compiled.output_state(shifted, sm.density()),
                                                      povm, stream);
      mean_minus += loss_fn.ell(sm.label, ym);
      shifted[j] = a[j];
    }
    est.values[j] = (mean_plus - mean_minus) / m_shots;
  });
  return est;
}

double psr_exact_difference(const CompiledAnsatz& compiled, const ParamVector& a,
                            const LabeledSample& sample, const Povm& povm, const LossFn& loss_fn,
                            int param_index) {
  const double quarter = std::numbers::pi / 4.0;
  const CMatrix rho = sample.density();
  ParamVector shifted = a;
  shifted[param_index] = a[param_index] + quarter;
  const double lp =
      ansatz::loss_of_output(compiled.output_state(shifted, rho), sample.label, povm, loss_fn);
  shifted[param_index] = a[param_index] - quarter;
  const double lm =
      ansatz::loss_of_output(compiled.output_state(shifted, rho), sample.label, povm, loss_fn);
  return lp - lm;
}

std::pair<int, double> rqsgd_estimate(const CompiledAnsatz& compiled, const ParamVector& a,
                                      const LabeledSample& sample, const Povm& povm,
                                      const LossFn& loss_fn, RngStream& rng) {
  const int p = compiled.param_count();
  const int j = p == 1 ? 0 : rng.uniform_int(p);
  const double g = hadamard_test_sample(compiled, a, sample, povm, loss_fn, j, rng);
  return {j, g};
}

std::vector<double> qsgd_gradient_from_snapshot(const CompiledAnsatz& compiled,
                                                const ParamVector& a,
                                                const shadows::ShadowSnapshot& snap, int y,
                                                const Povm& povm, const LossFn& loss_fn,
                                                Exec exec) {
  const CMatrix rho_hat = shadows::shadow_matrix(snap).dense();
  return gradient_of_state(compiled, a, rho_hat, y, povm, loss_fn, exec);
}

GradEstimate qsgd_gradient(const CompiledAnsatz& compiled, const ParamVector& a,
                           const LabeledSample& sample, const Povm& povm, const LossFn& loss_fn,
                           RngStream& rng, Exec exec) {
  const auto snap = shadows::sample_snapshot(sample.density(), rng);
  GradEstimate est;
  est.method = Method::qsgd;
  est.samples_consumed = 1;
  est.values = qsgd_gradient_from_snapshot(compiled, a, snap, sample.label, povm, loss_fn, exec);
  return est;
}

std::vector<double> tilde_gradients_all_strings(int num_qubits, const CMatrix& rho_out, int y,
                                                const Povm& povm, const LossFn& loss_fn,
                                                Exec exec) {
  const CMatrix k_obs = loss_observable(y, povm, loss_fn);
  const int count = 1 << (2 * num_qubits);
  std::vector<double> tilde(count);
  for_each_index(exec, count, [&](int code) {
    const PauliAction action(pauli_from_code(code, num_qubits));
    tilde[code] = commutator_derivative(action, k_obs, rho_out);
  });
  return tilde;
}

std::vector<double> nonproduct_gradient_expansion(const std::vector<PauliString>& generators,
                                                  const ParamVector& a,
                                                  std::span<const double> tilde_all) {
  const int p = static_cast<int>(generators.size());
  if (static_cast<int>(a.size()) != p)
    throw std::invalid_argument("nonproduct_gradient_expansion: parameter count mismatch");
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (generators[i].letters == generators[j].letters)
        throw std::invalid_argument("nonproduct_gradient_expansion: duplicate generator strings");
  const int d = generators.empty() ? 0 : generators[0].num_qubits();
  if (static_cast<int>(tilde_all.size()) != (1 << (2 * d)))
    throw std::invalid_argument("nonproduct_gradient_expansion: tilde table size mismatch");

  std::vector<double> grad(p);
  for (int si = 0; si < p; ++si) {
    const PauliString& s = generators[si];
    double val = tilde_all[pauli_code(s)];
    // First order: (i/2)(kappa_rst - kappa_srt) = -Im(kappa_rst).
    for (int ri = 0; ri < p; ++ri) {
      const PauliString rs = pauli_product(generators[ri], s);
      val -= a[ri] * rs.phase().imag() * tilde_all[pauli_code(rs)];
    }
    // Second order: -(1/6)(kappa_{r's q}-kappa_{s r' q})(kappa_{r q t}-kappa_{q r t})
    //             = +(2/3) Im(kappa_{r's q}) Im(kappa_{r q t}).
    for (int ri = 0; ri < p; ++ri) {
      for (int ri2 = 0; ri2 < p; ++ri2) {
        const PauliString q = pauli_product(generators[ri2], s);
        const double im1 = q.phase().imag();
        if (im1 == 0.0) continue;
        PauliString q_string = q;
        q_string.quarter_turns = 0;
        const PauliString t = pauli_product(generators[ri], q_string);
        const double im2 = t.phase().imag();
        if (im2 == 0.0) continue;
        val += (2.0 / 3.0) * a[ri] * a[ri2] * im1 * im2 * tilde_all[pauli_code(t)];
      }
    }
    grad[si] = val;
  }
  return grad;
}

}  // namespace qsgd::gradients
