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

#include <span>
#include <utility>
#include <vector>

#include "qsgd/ansatz/ansatz.hpp"
#include "qsgd/parallel.hpp"
#include "qsgd/shadows/shadows.hpp"

namespace qsgd::gradients {

enum class Method { exact, finite_difference, hadamard, psr, rqsgd, qsgd };

struct GradEstimate {
  std::vector<double> values;
  long samples_consumed = 0;  // quantum samples; 0 for exact/oracle methods
  Method method = Method::exact;
};

/// Analytic per-sample gradient: for each parameter s at split position l,
/// sum_yhat i l(y,yhat) tr{M_yhat U_{>l} [sigma^s, rho_l] U_{>l}^dagger} with
/// rho_l = U_{<=l} rho U_{<=l}^dagger. Accepts any Hermitian input through
/// the sample's density (classical shadows included). Layered form only.
GradEstimate exact_gradient(const CompiledAnsatz& compiled, const ParamVector& a,
                            const LabeledSample& sample, const Povm& povm, const LossFn& loss_fn,
                            Exec exec = Exec::parallel);
GradEstimate exact_gradient(const AnsatzSpec& spec, const ParamVector& a,
                            const LabeledSample& sample, const Povm& povm, const LossFn& loss_fn,
                            Exec exec = Exec::parallel);
/// Same engine on an explicit Hermitian input matrix (used by the shadow path).
std::vector<double> gradient_of_state(const CompiledAnsatz& compiled, const ParamVector& a,
                                      const CMatrix& rho_in, int y, const Povm& povm,
                                      const LossFn& loss_fn, Exec exec = Exec::parallel);

/// Central differences (L(a+h e_j) - L(a-h e_j)) / (2h); h in [1e-7, 1e-2].
GradEstimate finite_difference_gradient(const AnsatzSpec& spec, const ParamVector& a,
                                        const LabeledSample& sample, const Povm& povm,
                                        const LossFn& loss_fn, double h);

/// One-shot derivative measurement: rho_l (x) |+><+| on an ancilla, the
/// controlled +-pi/4 rotation pair V_s, the remaining layers, then the joint
/// POVM Lambda_{yhat,z} = M_yhat (x) |z><z|; returns g = -2 (-1)^z l(y,yhat),
/// |g| <= 2 l_max.
double hadamard_test_sample(const CompiledAnsatz& compiled, const ParamVector& a,
                            const LabeledSample& sample, const Povm& povm, const LossFn& loss_fn,
                            int param_index, RngStream& rng);
/// Exhaustive expectation over the <= 2|Y| outcomes with their Born
/// probabilities; equals the analytic derivative (the Lemma-2 identity).
double hadamard_test_expectation(const CompiledAnsatz& compiled, const ParamVector& a,
                                 const LabeledSample& sample, const Povm& povm,
                                 const LossFn& loss_fn, int param_index);
/// Outcome table ((yhat index, z), probability, g) of the derivative circuit.
struct HadamardOutcome {
  int outcome_index;
  int z;
  double probability;
  double g;
};
std::vector<HadamardOutcome> hadamard_test_distribution(const CompiledAnsatz& compiled,
                                                        const ParamVector& a,
                                                        const LabeledSample& sample,
                                                        const Povm& povm, const LossFn& loss_fn,
                                                        int param_index);

/// Parameter-shift estimate: per parameter, m one-shot loss measurements at
/// a + pi/4 e_j and m at a - pi/4 e_j, each consuming one fresh sample from
/// `batch` (so batch.size() >= 2 m p); estimate = mean+ - mean-. Each
/// parameter draws from its own derived RNG stream, so results do not depend
/// on the parallel schedule.
GradEstimate psr_gradient(const CompiledAnsatz& compiled, const ParamVector& a,
                          std::span<const LabeledSample> batch, const Povm& povm,
                          const LossFn& loss_fn, int m_shots, RngStream& rng,
                          Exec exec = Exec::parallel);
/// Infinite-shot limit L(a + pi/4 e_j) - L(a - pi/4 e_j) via expected losses.
double psr_exact_difference(const CompiledAnsatz& compiled, const ParamVector& a,
                            const LabeledSample& sample, const Povm& povm, const LossFn& loss_fn,
                            int param_index);

/// Coordinate descent step: uniform coordinate j, one Hadamard-test draw.
/// E[p g e_j] = grad L. Consumes one sample. When p == 1 no coordinate draw
/// is made and this reduces to hadamard_test_sample on the same stream.
std::pair<int, double> rqsgd_estimate(const CompiledAnsatz& compiled, const ParamVector& a,
                                      const LabeledSample& sample, const Povm& povm,
                                      const LossFn& loss_fn, RngStream& rng);

/// Shadow gradient: ONE snapshot of the sample state, then the Lemma-1
/// expression for every parameter with the dense shadow in place of rho.
/// All p components from samples_consumed = 1.
GradEstimate qsgd_gradient(const CompiledAnsatz& compiled, const ParamVector& a,
                           const LabeledSample& sample, const Povm& povm, const LossFn& loss_fn,
                           RngStream& rng, Exec exec = Exec::parallel);
/// Deterministic part of the shadow gradient, given the snapshot.
std::vector<double> qsgd_gradient_from_snapshot(const CompiledAnsatz& compiled,
                                                const ParamVector& a,
                                                const shadows::ShadowSnapshot& snap, int y,
                                                const Povm& povm, const LossFn& loss_fn,
                                                Exec exec = Exec::parallel);

/// d/da_t of the proxy loss: tilde_t = sum_yhat i l(y,yhat) tr{M_yhat [sigma^t, rho_out]}
/// for every t in {0,1,2,3}^d, indexed by pauli_code.
std::vector<double> tilde_gradients_all_strings(int num_qubits, const CMatrix& rho_out, int y,
                                                const Povm& povm, const LossFn& loss_fn,
                                                Exec exec = Exec::parallel);

/// Second-order expansion of the true derivative of the single-exponential
/// ansatz U = exp(i sum_s a_s sigma^s) in terms of the proxy derivatives:
///   dL/da_s = tilde_s + (i/2) sum_r a_r (kappa_rst - kappa_srt) tilde_t
///             - (1/6) sum_{r,r'} a_r a_r' (kappa_{r's q}-kappa_{s r' q})
///                                         (kappa_{r q t}-kappa_{q r t}) tilde_t,
/// with the structure constants realized through pauli_product. Accurate to
/// O(||a||^3). `tilde_all` is indexed by pauli_code over all 4^d strings.
std::vector<double> nonproduct_gradient_expansion(const std::vector<PauliString>& generators,
                                                  const ParamVector& a,
                                                  std::span<const double> tilde_all);

}  // namespace qsgd::gradients
