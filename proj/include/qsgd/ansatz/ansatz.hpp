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

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsgd/qcore/matrix.hpp"
#include "qsgd/qcore/pauli.hpp"
#include "qsgd/qcore/rng.hpp"

namespace qsgd {

using ParamVector = std::vector<double>;

/// One circuit layer: an optional fixed gate followed by a parametric part,
/// the ordered product of single-string exponentials e^{i a sigma}. The fixed
/// gate acts first. An empty `fixed_gate` means identity.
struct Layer {
  std::vector<PauliString> generators;
  CMatrix fixed_gate;
};

struct AnsatzSpec {
  enum class Form { layered_product, single_exponential };

  int num_qubits = 0;
  Form form = Form::layered_product;
  std::vector<Layer> layers;

  int dim() const { return 1 << num_qubits; }
  int param_count() const;
  /// Flattened parameter indexing: layer-major, generator order within layer.
  std::pair<int, int> locate(int param_index) const;  // (layer, generator)
  const PauliString& generator(int param_index) const;

  /// Checks generator phases (+1), letter lengths, fixed-gate unitarity
  /// (1e-10) and, for the single-exponential form, the single-layer shape.
  void validate() const;
};

/// Structured text round-trip for ansatz specs. Only identity fixed gates are
/// representable; that covers every experiment here.
std::string ansatz_to_text(const AnsatzSpec& spec);
AnsatzSpec ansatz_from_text(const std::string& text);

struct Povm {
  std::vector<int> outcomes;   // labels y-hat
  std::vector<CMatrix> ops;    // PSD, summing to identity

  int dim() const { return ops.empty() ? 0 : ops[0].dim(); }
  int outcome_index(int label) const;
  /// PSD within tol and completeness within tol.
  void validate(double tol = 1e-10) const;
};

/// Qubits on which some POVM element deviates from an identity tensor factor;
/// the locality k of downstream bound calculations.
std::vector<int> povm_support(const Povm& povm, int num_qubits);

struct LossFn {
  std::function<double(int y, int y_hat)> ell;
  double l_max = 1.0;

  static LossFn zero_one();
  static LossFn constant(double value);
};

/// A labeled input state: pure (ket) or mixed (density matrix), with label in
/// {-1, +1}. The stored state is the full circuit input (ancillas included).
struct LabeledSample {
  Ket ket;       // empty when mixed
  CMatrix rho;   // empty when pure
  int label = 0;

  bool is_pure() const { return !ket.amp.empty(); }
  int dim() const { return is_pure() ? ket.dim() : rho.dim(); }
  CMatrix density() const { return is_pure() ? qsgd::density(ket) : rho; }

  static LabeledSample pure(Ket k, int label) { return {std::move(k), CMatrix(), label}; }
  static LabeledSample mixed(CMatrix r, int label) { return {Ket(), std::move(r), label}; }
};

/// Precompiled gate program for a layered ansatz: fixed gates and per-
/// generator PauliActions in application order, with parameter bookkeeping.
/// Compile once per spec; reuse across iterations. Immutable after
/// construction, safe to share across threads.
class CompiledAnsatz {
 public:
  explicit CompiledAnsatz(const AnsatzSpec& spec);

  const AnsatzSpec& spec() const { return *spec_; }
  int dim() const { return spec_->dim(); }
  int param_count() const { return param_count_; }

  /// rho -> U(a) rho U(a)^dagger
  CMatrix output_state(const ParamVector& a, const CMatrix& rho_in) const;
  CMatrix unitary(const ParamVector& a) const;

  struct Step {
    const CMatrix* fixed = nullptr;  // set for fixed-gate steps
    int param = -1;                  // set for exponential steps
  };
  const std::vector<Step>& steps() const { return steps_; }
  const PauliAction& action(int param_index) const { return actions_[param_index]; }

  /// States after each parameter's own exponential has been applied
  /// (rho_at[j] = U_{<=j} rho U_{<=j}^dagger). Layered form only.
  void forward_states(const ParamVector& a, const CMatrix& rho_in,
                      std::vector<CMatrix>& rho_at) const;
  /// Back-propagated observable b_at[j] = U_{>j}^dagger K U_{>j}, where U_{>j}
  /// excludes parameter j's own exponential. Layered form only.
  void backward_observables(const ParamVector& a, const CMatrix& k_obs,
                            std::vector<CMatrix>& b_at) const;
  /// Unitary made of everything after parameter j's exponential.
  CMatrix unitary_after(const ParamVector& a, int param_index) const;
  /// rho -> U_{<=j} rho U_{<=j}^dagger (parameter j's exponential included).
  CMatrix state_through(const ParamVector& a, const CMatrix& rho_in, int param_index) const;

 private:
  const AnsatzSpec* spec_;
  int param_count_ = 0;
  std::vector<Step> steps_;
  std::vector<PauliAction> actions_;
};

namespace ansatz {

/// Full circuit unitary, layer 1 acting first. Layered form: product of
/// pauli_exp factors and fixed gates; single-exponential form: expm(i sum a_s sigma^s).
CMatrix unitary(const AnsatzSpec& spec, const ParamVector& a);

/// (U_leq, U_gt) with U_gt * U_leq = unitary(spec, a); the parameter's own
/// exponential is assigned to U_leq. Layered form only.
std::pair<CMatrix, CMatrix> split_unitaries(const AnsatzSpec& spec, const ParamVector& a,
                                            int param_index);

/// Expected loss sum_yhat l(y, yhat) tr{M_yhat U rho U^dagger}. Defined for
/// arbitrary Hermitian inputs (shadows); in [0, l_max] for physical states.
double loss(const AnsatzSpec& spec, const ParamVector& a, const LabeledSample& sample,
            const Povm& povm, const LossFn& loss_fn);
double loss_of_output(const CMatrix& rho_out, int y, const Povm& povm, const LossFn& loss_fn);

std::vector<double> outcome_probabilities(const CMatrix& rho_out, const Povm& povm);

/// Born-rule draw of a POVM outcome label at the circuit output. Probabilities
/// must sum to 1 within 1e-9 (residual renormalized); negatives beyond -1e-9
/// are an error.
int sample_outcome(const AnsatzSpec& spec, const ParamVector& a, const LabeledSample& sample,
                   const Povm& povm, RngStream& rng);
int sample_outcome_of_output(const CMatrix& rho_out, const Povm& povm, RngStream& rng);

/// Deterministic reporting rule: argmax_yhat tr{M_yhat rho_out}.
int argmax_prediction(const CMatrix& rho_out, const Povm& povm);

}  // namespace ansatz

}  // namespace qsgd
