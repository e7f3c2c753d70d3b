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

#include "qsgd/optimize/optimize.hpp"

#include <cmath>
#include <stdexcept>

#include "qsgd/qcore/linalg.hpp"

namespace qsgd::optimize {

std::string method_name(Method m) {
  switch (m) {
    case Method::qsgd: return "qsgd";
    case Method::rqsgd: return "rqsgd";
    case Method::psr: return "psr";
    case Method::exact: return "exact";
  }
  throw std::invalid_argument("method_name: bad method");
}

Method method_from_name(const std::string& name) {
  if (name == "qsgd") return Method::qsgd;
  if (name == "rqsgd") return Method::rqsgd;
  if (name == "psr") return Method::psr;
  if (name == "exact") return Method::exact;
  throw std::invalid_argument("unknown method '" + name + "'");
}

BatchEval evaluate_batch(const CompiledAnsatz& compiled, const ParamVector& a,
                         std::span<const LabeledSample> batch, const Povm& povm,
                         const LossFn& loss_fn, bool with_gradient, Exec exec) {
  const int n = static_cast<int>(batch.size());
  if (n == 0) throw std::invalid_argument("evaluate_batch: empty batch");
  const int p = compiled.param_count();

  std::vector<double> losses(n), hits(n), born(n);
  std::vector<std::vector<double>> grads;
  if (with_gradient) grads.resize(n);
  for_each_index(exec, n, [&](int i) {
    const CMatrix rho = batch[i].density();
    const CMatrix rho_out = compiled.output_state(a, rho);
    losses[i] = ansatz::loss_of_output(rho_out, batch[i].label, povm, loss_fn);
    hits[i] = ansatz::argmax_prediction(rho_out, povm) == batch[i].label ? 1.0 : 0.0;
    const auto probs = ansatz::outcome_probabilities(rho_out, povm);
    born[i] = probs[povm.outcome_index(batch[i].label)];
    if (with_gradient)
      grads[i] = gradients::gradient_of_state(compiled, a, rho, batch[i].label, povm, loss_fn,
                                              Exec::serial);
  });

  BatchEval out;
  out.mean_loss = sum_ordered(losses) / n;
  out.accuracy = sum_ordered(hits) / n;
  out.born_accuracy = sum_ordered(born) / n;
  if (with_gradient) {
    double norm_sq = 0.0;
    for (int j = 0; j < p; ++j) {
      double g = 0.0;
      for (int i = 0; i < n; ++i) g += grads[i][j];
      g /= n;
      norm_sq += g * g;
    }
    out.grad_norm_sq = norm_sq;
  }
  return out;
}

namespace {

long iterations_for_budget(const TrainConfig& cfg, int p) {
  if (cfg.method == Method::psr) {
    const long per_iter = 2L * cfg.m_shots * p;
    const long t = cfg.sample_budget / per_iter;
    if (t < 1)
      throw std::invalid_argument("train: sample budget smaller than one PSR iteration (2 m p)");
    return t;
  }
  return cfg.sample_budget;
}

double step_size(const TrainConfig& cfg, long t) {
  switch (cfg.schedule) {
    case Schedule::fixed: return cfg.eta;
    case Schedule::decaying: return cfg.beta / (cfg.gamma0 + static_cast<double>(t));
    case Schedule::averaged:
      return 1.0 / (cfg.gamma * std::sqrt(static_cast<double>(cfg.sample_budget)));
  }
  throw std::invalid_argument("train: bad schedule");
}

}  // namespace

TrainResult train(const AnsatzSpec& spec, const Povm& povm, const LossFn& loss_fn,
                  const SampleSource& stream, std::span<const LabeledSample> eval_batch,
                  const TrainConfig& cfg) {
  if (cfg.sample_budget < 1) throw std::invalid_argument("train: sample budget must be >= 1");
  CompiledAnsatz compiled(spec);
  const int p = compiled.param_count();
  const long iters = iterations_for_budget(cfg, p);

  RngStream root(cfg.seed);
  RngStream init_rng = root.child(0x1717);
  RngStream grad_rng = root.child(0x4242);

  ParamVector a(p);
  for (int j = 0; j < p; ++j) a[j] = init_rng.uniform(-0.1, 0.1);

  TrainResult result;
  long samples_used = 0;

  auto emit_record = [&](long iter) {
    TrainRecord rec;
    rec.iter = iter;
    rec.samples_used = samples_used;
    if (!eval_batch.empty()) {
      const BatchEval ev = evaluate_batch(compiled, a, eval_batch, povm, loss_fn, true, cfg.exec);
      rec.train_loss = ev.mean_loss;
      rec.train_accuracy = ev.accuracy;
      rec.grad_norm_sq = ev.grad_norm_sq;
    }
    if (cfg.keep_snapshots) rec.a_snapshot = a;
    result.records.push_back(std::move(rec));
  };

  emit_record(0);

  std::vector<LabeledSample> psr_batch;
  for (long t = 1; t <= iters; ++t) {
    const double eta = step_size(cfg, t);
    switch (cfg.method) {
      case Method::qsgd: {
        const LabeledSample sample = stream();
        samples_used += 1;
        RngStream iter_rng = grad_rng.child(static_cast<uint64_t>(t));
        std::vector<double> g(p, 0.0);
        for (int rep = 0; rep < cfg.shadows_per_sample; ++rep) {
          const auto est =
              gradients::qsgd_gradient(compiled, a, sample, povm, loss_fn, iter_rng, cfg.exec);
          for (int j = 0; j < p; ++j) g[j] += est.values[j];
        }
        for (int j = 0; j < p; ++j) a[j] -= eta * g[j] / cfg.shadows_per_sample;
        break;
      }
      case Method::rqsgd: {
        const LabeledSample sample = stream();
        samples_used += 1;
        RngStream iter_rng = grad_rng.child(static_cast<uint64_t>(t));
        const auto [j, g] = gradients::rqsgd_estimate(compiled, a, sample, povm, loss_fn, iter_rng);
        a[j] -= eta * g;
        break;
      }
      case Method::psr: {
        const long need = 2L * cfg.m_shots * p;
        psr_batch.clear();
        psr_batch.reserve(need);
        for (long i = 0; i < need; ++i) psr_batch.push_back(stream());
        samples_used += need;
        RngStream iter_rng = grad_rng.child(static_cast<uint64_t>(t));
        const auto est = gradients::psr_gradient(compiled, a, psr_batch, povm, loss_fn,
                                                 cfg.m_shots, iter_rng, cfg.exec);
        for (int j = 0; j < p; ++j) a[j] -= eta * est.values[j];
        break;
      }
      case Method::exact: {
        const LabeledSample sample = stream();
        samples_used += 1;
        const auto est = gradients::exact_gradient(compiled, a, sample, povm, loss_fn, cfg.exec);
        for (int j = 0; j < p; ++j) a[j] -= eta * est.values[j];
        break;
      }
    }
    if ((cfg.eval_every > 0 && t % cfg.eval_every == 0) || t == iters) emit_record(t);
  }

  result.final_params = a;
  result.samples_used = samples_used;
  return result;
}

ParamVector averaged_iterate(const std::vector<TrainRecord>& records) {
  ParamVector acc;
  long count = 0;
  for (const auto& rec : records) {
    if (!rec.a_snapshot) continue;
    if (acc.empty()) acc.assign(rec.a_snapshot->size(), 0.0);
    for (size_t j = 0; j < acc.size(); ++j) acc[j] += (*rec.a_snapshot)[j];
    ++count;
  }
  if (count == 0) throw std::invalid_argument("averaged_iterate: no retained snapshots");
  for (auto& v : acc) v /= static_cast<double>(count);
  return acc;
}

BoundReport convergence_bound(Method method, int p, int k, double l_max, long n, double eps,
                              double gap0, int m_shots) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("convergence_bound: eps must lie in (0,1)");
  BoundReport rep;
  rep.method = method;
  const double pd = static_cast<double>(p);
  const double p32 = std::pow(pd, 1.5);
  const double p52 = std::pow(pd, 2.5);
  const double pow3k = std::pow(3.0, k);
  const double pow9k = std::pow(9.0, k);
  switch (method) {
    case Method::qsgd:
      rep.c_theorem = 2.0 * p32 * pow3k;
      rep.c_summary = p32 * pow3k;
      rep.c_appendix = p32 * pow9k;
      rep.t_iterations = n;
      break;
    case Method::rqsgd:
      rep.c_theorem = rep.c_summary = rep.c_appendix = p52;
      rep.t_iterations = n;
      break;
    case Method::psr:
      rep.c_theorem = rep.c_summary = rep.c_appendix = 4.0 * p52;
      rep.t_iterations = n / (static_cast<long>(m_shots) * p);
      break;
    case Method::exact:
      throw std::invalid_argument("convergence_bound: no constant for the exact oracle");
  }
  rep.predicted_gap = eps + rep.c_theorem * l_max * l_max * l_max * gap0 /
                                (static_cast<double>(n) * eps);
  // Crossover locality: largest k with 2 p^{3/2} 3^k <= 4 p^{5/2}, i.e. 3^k <= 2p.
  int ks = 0;
  while (std::pow(3.0, ks + 1) <= 2.0 * pd) ++ks;
  rep.k_star = ks;
  return rep;
}

HelstromBound helstrom_ceiling(std::span<const LabeledSample> samples) {
  if (samples.empty()) throw std::invalid_argument("helstrom_ceiling: empty sample set");
  CMatrix signed_mean(samples[0].dim());
  for (const auto& s : samples) {
    if (s.label != -1 && s.label != 1)
      throw std::invalid_argument("helstrom_ceiling: labels must be -1/+1");
    CMatrix rho = s.density();
    rho *= static_cast<double>(s.label);
    signed_mean += rho;
  }
  signed_mean *= 1.0 / static_cast<double>(samples.size());
  HelstromBound out;
  out.min_loss = 0.5 * (1.0 - trace_norm(signed_mean));
  out.max_accuracy = 1.0 - out.min_loss;
  return out;
}

}  // namespace qsgd::optimize
