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
#include <vector>

#include "qsgd/ansatz/ansatz.hpp"
#include "qsgd/gradients/gradients.hpp"
#include "qsgd/parallel.hpp"

namespace qsgd::optimize {

enum class Method { qsgd, rqsgd, psr, exact };
enum class Schedule { fixed, decaying, averaged };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct TrainConfig {
  Method method = Method::qsgd;
  Schedule schedule = Schedule::fixed;
  double eta = 0.1;        // fixed schedule
  double beta = 1.0;       // decaying: eta_t = beta / (gamma0 + t)
  double gamma0 = 1.0;
  double gamma = 1.0;      // averaged: eta_t = 1 / (gamma sqrt(n))
  int m_shots = 1;         // PSR only
  long sample_budget = 0;  // n
  uint64_t seed = 0;
  int eval_every = 0;      // 0: only the final record
  int shadows_per_sample = 1;  // >1 reuses a collapsed sample; non-physical, ablation only
  bool keep_snapshots = false;
  Exec exec = Exec::parallel;
};

struct TrainRecord {
  long iter = 0;
  long samples_used = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double grad_norm_sq = 0.0;  // ||grad L||_2^2 of the mean loss on the eval batch
  std::optional<ParamVector> a_snapshot;
};

struct TrainResult {
  std::vector<TrainRecord> records;
  ParamVector final_params;
  long samples_used = 0;
};

using SampleSource = std::function<LabeledSample()>;

/// Exact loss / argmax accuracy / exact gradient-norm^2 of the mean loss on a
/// fixed batch. Per-sample work is data-parallel; the reductions run in a
/// fixed order so results are schedule-independent.
struct BatchEval {
  double mean_loss = 0.0;
  double accuracy = 0.0;           // argmax decision rule
  double born_accuracy = 0.0;      // 1 - mean Born-expected 0-1-style loss
  double grad_norm_sq = 0.0;
};
BatchEval evaluate_batch(const CompiledAnsatz& compiled, const ParamVector& a,
                         std::span<const LabeledSample> batch, const Povm& povm,
                         const LossFn& loss_fn, bool with_gradient, Exec exec);

/// Runs the configured method for its full sample budget. Per-iteration costs:
/// qsgd/rqsgd/exact consume 1 sample per iteration (T = n); psr consumes
/// 2*m_shots*p per iteration (T = floor(n / (2 m p)), which must be >= 1).
/// Evaluation uses `eval_batch` and consumes no budgeted samples. Fixed seeds
/// give bit-identical records at any parallelism level.
TrainResult train(const AnsatzSpec& spec, const Povm& povm, const LossFn& loss_fn,
                  const SampleSource& stream, std::span<const LabeledSample> eval_batch,
                  const TrainConfig& config);

/// Arithmetic mean of retained iterates (requires keep_snapshots).
ParamVector averaged_iterate(const std::vector<TrainRecord>& records);

/// Theoretical constants and the predicted stationarity gap
/// eps + C l_max^3 (L(a1) - L(a*)) / (n eps). The three QSGD constants are
/// carried separately because the sources differ: the headline summary says
/// p^{3/2} 3^k, the convergence theorem 2 p^{3/2} 3^k, and the appendix
/// second-moment analysis works with 9^k.
struct BoundReport {
  Method method = Method::qsgd;
  double c_theorem = 0.0;
  double c_summary = 0.0;
  double c_appendix = 0.0;
  double predicted_gap = 0.0;  // uses c_theorem
  long t_iterations = 0;       // as the theorem counts them (psr: n / (m p))
  int k_star = 0;              // largest k with C_qsgd(k) <= C_psr
};
BoundReport convergence_bound(Method method, int p, int k, double l_max, long n, double eps,
                              double gap0, int m_shots = 1);

/// Information-theoretic ceiling on discrimination: minimum expected sample
/// loss = (1 - ||mean of y_j rho_j||_1) / 2; max accuracy is its complement
/// for the 0-1 loss.
struct HelstromBound {
  double min_loss = 0.0;
  double max_accuracy = 0.0;
};
HelstromBound helstrom_ceiling(std::span<const LabeledSample> samples);

}  // namespace qsgd::optimize
