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

#include "qsgd/ansatz/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qsgd/qcore/linalg.hpp"

namespace qsgd {

int AnsatzSpec::param_count() const {
  int p = 0;
  for (const auto& l : layers) p += static_cast<int>(l.generators.size());
  return p;
}

std::pair<int, int> AnsatzSpec::locate(int param_index) const {
  int offset = param_index;
  for (size_t l = 0; l < layers.size(); ++l) {
    const int g = static_cast<int>(layers[l].generators.size());
    if (offset < g) return {static_cast<int>(l), offset};
    offset -= g;
  }
  throw std::out_of_range("AnsatzSpec: parameter index out of range");
}

const PauliString& AnsatzSpec::generator(int param_index) const {
  const auto [l, g] = locate(param_index);
  return layers[l].generators[g];
}

void AnsatzSpec::validate() const {
  if (num_qubits <= 0) throw std::invalid_argument("AnsatzSpec: num_qubits must be positive");
  for (const auto& layer : layers) {
    for (const auto& g : layer.generators) {
      if (g.num_qubits() != num_qubits)
        throw std::invalid_argument("AnsatzSpec: generator length mismatch");
      if (g.quarter_turns != 0)
        throw std::invalid_argument("AnsatzSpec: generators must have phase +1");
    }
    if (!layer.fixed_gate.empty()) {
      if (layer.fixed_gate.dim() != dim())
        throw std::invalid_argument("AnsatzSpec: fixed gate dimension mismatch");
      if (!layer.fixed_gate.is_unitary(1e-10))
        throw std::invalid_argument("AnsatzSpec: fixed gate is not unitary within 1e-10");
    }
  }
  if (form == Form::single_exponential) {
    if (layers.size() != 1 || !layers[0].fixed_gate.empty())
      throw std::invalid_argument(
          "AnsatzSpec: single-exponential form takes one layer with no fixed gate");
  }
}

std::string ansatz_to_text(const AnsatzSpec& spec) {
  std::ostringstream os;
  os << "qubits " << spec.num_qubits << "\n";
  os << "form " << (spec.form == AnsatzSpec::Form::layered_product ? "layered" : "single-exp")
     << "\n";
  for (const auto& layer : spec.layers) {
    if (!layer.fixed_gate.empty()) {
      CMatrix diff = layer.fixed_gate - CMatrix::identity(spec.dim());
      if (diff.max_abs() > 0.0)
        throw std::invalid_argument("ansatz_to_text: only identity fixed gates are representable");
    }
    os << "layer";
    for (const auto& g : layer.generators) os << ' ' << g.text();
    os << "\n";
  }
  return os.str();
}

AnsatzSpec ansatz_from_text(const std::string& text) {
  AnsatzSpec spec;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "qubits") {
      ls >> spec.num_qubits;
    } else if (key == "form") {
      std::string f;
      ls >> f;
      if (f == "layered")
        spec.form = AnsatzSpec::Form::layered_product;
      else if (f == "single-exp")
        spec.form = AnsatzSpec::Form::single_exponential;
      else
        throw std::invalid_argument("ansatz_from_text: unknown form '" + f + "'");
    } else if (key == "layer") {
      Layer layer;
      std::string tok;
      while (ls >> tok) layer.generators.push_back(PauliString::from_text(tok));
      spec.layers.push_back(std::move(layer));
    } else {
      throw std::invalid_argument("ansatz_from_text: unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

int Povm::outcome_index(int label) const {
  for (size_t i = 0; i < outcomes.size(); ++i)
    if (outcomes[i] == label) return static_cast<int>(i);
  throw std::invalid_argument("Povm: unknown outcome label");
}

void Povm::validate(double tol) const {
  if (ops.empty()) throw std::invalid_argument("Povm: empty");
  if (ops.size() != outcomes.size()) throw std::invalid_argument("Povm: outcome/op count mismatch");
  CMatrix sum(dim());
  for (const auto& m : ops) {
    if (m.dim() != dim()) throw std::invalid_argument("Povm: dimension mismatch");
    const auto ev = hermitian_eigenvalues(m);
    if (!ev.empty() && ev.back() < -tol)
      throw std::invalid_argument("Povm: element is not PSD");
    sum += m;
  }
  sum -= CMatrix::identity(dim());
  if (sum.max_abs() > tol) throw std::invalid_argument("Povm: elements do not sum to identity");
}

std::vector<int> povm_support(const Povm& povm, int num_qubits) {
  std::vector<int> support;
  for (int q = 0; q < num_qubits; ++q) {
    bool trivial = true;
    for (const auto& m : povm.ops) {
      // q is trivial for M iff M = I_q (x) tr_q{M}/2, i.e. tracing out q and
      // re-tensoring identity reproduces M.
      std::vector<int> tq{q};
      CMatrix reduced = partial_trace(m, num_qubits, tq);
      reduced *= 0.5;
      std::vector<int> rest;
      for (int r = 0; r < num_qubits; ++r)
        if (r != q) rest.push_back(r);
      CMatrix rebuilt = embed_on_qubits(reduced, num_qubits, rest);
      rebuilt -= m;
      if (rebuilt.max_abs() > 1e-12) {
        trivial = false;
        break;
      }
    }
    if (!trivial) support.push_back(q);
  }
  return support;
}

LossFn LossFn::zero_one() {
  return {[](int y, int y_hat) { return y == y_hat ? 0.0 : 1.0; }, 1.0};
}

LossFn LossFn::constant(double value) {
  return {[value](int, int) { return value; }, value};
}

CompiledAnsatz::CompiledAnsatz(const AnsatzSpec& spec) : spec_(&spec) {
  spec.validate();
  param_count_ = spec.param_count();
  if (spec.form == AnsatzSpec::Form::layered_product) {
    for (const auto& layer : spec.layers) {
      if (!layer.fixed_gate.empty()) steps_.push_back({&layer.fixed_gate, -1});
      for (const auto& g : layer.generators) {
        steps_.push_back({nullptr, static_cast<int>(actions_.size())});
        actions_.emplace_back(g);
      }
    }
  } else {
    for (const auto& g : spec.layers[0].generators) actions_.emplace_back(g);
  }
}

CMatrix CompiledAnsatz::unitary(const ParamVector& a) const {
  return ansatz::unitary(*spec_, a);
}

CMatrix CompiledAnsatz::output_state(const ParamVector& a, const CMatrix& rho_in) const {
  if (static_cast<int>(a.size()) != param_count_)
    throw std::invalid_argument("CompiledAnsatz: parameter count mismatch");
  if (spec_->form == AnsatzSpec::Form::single_exponential) {
    const CMatrix u = unitary(a);
    return u * rho_in * u.adjoint();
  }
  thread_local CMatrix cur, next;
  cur = rho_in;
  for (const auto& step : steps_) {
    if (step.fixed) {
      cur = (*step.fixed) * cur * step.fixed->adjoint();
    } else {
      actions_[step.param].conjugate_exp(a[step.param], cur, next);
      std::swap(cur, next);
    }
  }
  return cur;
}

void CompiledAnsatz::forward_states(const ParamVector& a, const CMatrix& rho_in,
                                    std::vector<CMatrix>& rho_at) const {
  if (spec_->form != AnsatzSpec::Form::layered_product)
    throw std::invalid_argument("forward_states: layered form only");
  rho_at.resize(param_count_);
  thread_local CMatrix cur, next;
  cur = rho_in;
  for (const auto& step : steps_) {
    if (step.fixed) {
      cur = (*step.fixed) * cur * step.fixed->adjoint();
    } else {
      actions_[step.param].conjugate_exp(a[step.param], cur, next);
      std::swap(cur, next);
      rho_at[step.param] = cur;
    }
  }
}

void CompiledAnsatz::backward_observables(const ParamVector& a, const CMatrix& k_obs,
                                          std::vector<CMatrix>& b_at) const {
  if (spec_->form != AnsatzSpec::Form::layered_product)
    throw std::invalid_argument("backward_observables: layered form only");
  b_at.resize(param_count_);
  thread_local CMatrix cur, next;
  cur = k_obs;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    if (it->fixed) {
      cur = it->fixed->adjoint() * cur * (*it->fixed);
    } else {
      b_at[it->param] = cur;  // U_{>j} excludes parameter j's own exponential
      actions_[it->param].conjugate_exp_inverse(a[it->param], cur, next);
      std::swap(cur, next);
    }
  }
}

CMatrix CompiledAnsatz::unitary_after(const ParamVector& a, int param_index) const {
  if (spec_->form != AnsatzSpec::Form::layered_product)
    throw std::invalid_argument("unitary_after: layered form only");
  thread_local CMatrix u, next;
  u = CMatrix::identity(dim());
  bool past = false;
  for (const auto& step : steps_) {
    if (!past) {
      if (!step.fixed && step.param == param_index) past = true;
      continue;
    }
    if (step.fixed) {
      u = (*step.fixed) * u;
    } else {
      actions_[step.param].apply_exp_left(a[step.param], u, next);
      std::swap(u, next);
    }
  }
  return u;
}

CMatrix CompiledAnsatz::state_through(const ParamVector& a, const CMatrix& rho_in,
                                      int param_index) const {
  if (spec_->form != AnsatzSpec::Form::layered_product)
    throw std::invalid_argument("state_through: layered form only");
  thread_local CMatrix cur, next;
  cur = rho_in;
  for (const auto& step : steps_) {
    if (step.fixed) {
      cur = (*step.fixed) * cur * step.fixed->adjoint();
    } else {
      actions_[step.param].conjugate_exp(a[step.param], cur, next);
      std::swap(cur, next);
      if (step.param == param_index) return cur;
    }
  }
  throw std::out_of_range("state_through: parameter index out of range");
}

namespace ansatz {

CMatrix unitary(const AnsatzSpec& spec, const ParamVector& a) {
  spec.validate();
  if (static_cast<int>(a.size()) != spec.param_count())
    throw std::invalid_argument("unitary: parameter count mismatch");
  const int dim = spec.dim();

  if (spec.form == AnsatzSpec::Form::single_exponential) {
    CMatrix h(dim);
    int j = 0;
    for (const auto& g : spec.layers[0].generators) {
      CMatrix m = pauli_matrix(g);
      m *= cdouble(0.0, a[j++]);
      h += m;
    }
    return expm(h);
  }

  CMatrix u = CMatrix::identity(dim);
  int j = 0;
  for (const auto& layer : spec.layers) {
    if (!layer.fixed_gate.empty()) u = layer.fixed_gate * u;
    for (const auto& g : layer.generators) u = pauli_exp(g, a[j++]) * u;
  }
  return u;
}

std::pair<CMatrix, CMatrix> split_unitaries(const AnsatzSpec& spec, const ParamVector& a,
                                            int param_index) {
  if (spec.form != AnsatzSpec::Form::layered_product)
    throw std::invalid_argument(
        "split_unitaries: single-exponential form has no layer split; use the "
        "kappa-expansion path");
  if (static_cast<int>(a.size()) != spec.param_count())
    throw std::invalid_argument("split_unitaries: parameter count mismatch");
  const int dim = spec.dim();
  CMatrix u_leq = CMatrix::identity(dim);
  CMatrix u_gt = CMatrix::identity(dim);
  bool past = false;
  int j = 0;
  for (const auto& layer : spec.layers) {
    if (!layer.fixed_gate.empty()) {
      (past ? u_gt : u_leq) = layer.fixed_gate * (past ? u_gt : u_leq);
    }
    for (const auto& g : layer.generators) {
      (past ? u_gt : u_leq) = pauli_exp(g, a[j]) * (past ? u_gt : u_leq);
      if (j == param_index) past = true;
      ++j;
    }
  }
  if (!past) throw std::out_of_range("split_unitaries: parameter index out of range");
  return {u_leq, u_gt};
}

std::vector<double> outcome_probabilities(const CMatrix& rho_out, const Povm& povm) {
  std::vector<double> probs(povm.ops.size());
  for (size_t i = 0; i < povm.ops.size(); ++i) {
    cdouble t = 0.0;
    const CMatrix& m = povm.ops[i];
    for (int r = 0; r < m.dim(); ++r)
      for (int c = 0; c < m.dim(); ++c) t += m(r, c) * rho_out(c, r);
    probs[i] = t.real();
  }
  return probs;
}

double loss_of_output(const CMatrix& rho_out, int y, const Povm& povm, const LossFn& loss_fn) {
  const auto probs = outcome_probabilities(rho_out, povm);
  double acc = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) acc += loss_fn.ell(y, povm.outcomes[i]) * probs[i];
  return acc;
}

double loss(const AnsatzSpec& spec, const ParamVector& a, const LabeledSample& sample,
            const Povm& povm, const LossFn& loss_fn) {
  if (povm.dim() != sample.dim() || povm.dim() != spec.dim())
    throw std::invalid_argument("loss: POVM/system dimension mismatch");
  CompiledAnsatz compiled(spec);
  const CMatrix rho_out = compiled.output_state(a, sample.density());
  return loss_of_output(rho_out, sample.label, povm, loss_fn);
}

int sample_outcome_of_output(const CMatrix& rho_out, const Povm& povm, RngStream& rng) {
  auto probs = outcome_probabilities(rho_out, povm);
  double total = 0.0;
  for (double& p : probs) {
    if (p < -1e-9) throw std::runtime_error("sample_outcome: negative outcome probability");
    p = std::max(p, 0.0);
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::runtime_error("sample_outcome: probabilities do not sum to 1");
  return povm.outcomes[rng.discrete(probs)];
}

int sample_outcome(const AnsatzSpec& spec, const ParamVector& a, const LabeledSample& sample,
                   const Povm& povm, RngStream& rng) {
  CompiledAnsatz compiled(spec);
  const CMatrix rho_out = compiled.output_state(a, sample.density());
  return sample_outcome_of_output(rho_out, povm, rng);
}

int argmax_prediction(const CMatrix& rho_out, const Povm& povm) {
  const auto probs = outcome_probabilities(rho_out, povm);
  int best = 0;
  for (size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = static_cast<int>(i);
  return povm.outcomes[best];
}

}  // namespace ansatz

}  // namespace qsgd
