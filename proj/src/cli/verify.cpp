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

#include "qsgd/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qsgd/cli/runner.hpp"
#include "qsgd/datasets/datasets.hpp"
#include "qsgd/gradients/gradients.hpp"
#include "qsgd/optimize/optimize.hpp"
#include "qsgd/qcore/linalg.hpp"
#include "qsgd/shadows/shadows.hpp"

namespace qsgd::cli {

namespace {

using gradients::GradEstimate;

CMatrix random_unitary(int dim, RngStream& rng) {
  // Gram-Schmidt on a Ginibre matrix.
  CMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cdouble(rng.normal(), rng.normal());
  for (int c = 0; c < dim; ++c) {
    for (int prev = 0; prev < c; ++prev) {
      cdouble dot = 0.0;
      for (int r = 0; r < dim; ++r) dot += std::conj(g(r, prev)) * g(r, c);
      for (int r = 0; r < dim; ++r) g(r, c) -= dot * g(r, prev);
    }
    double nrm = 0.0;
    for (int r = 0; r < dim; ++r) nrm += std::norm(g(r, c));
    nrm = std::sqrt(nrm);
    for (int r = 0; r < dim; ++r) g(r, c) /= nrm;
  }
  return g;
}

CMatrix random_hermitian(int dim, RngStream& rng) {
  CMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cdouble(rng.normal(), rng.normal());
  CMatrix h = g;
  h += g.adjoint();
  h *= 0.5;
  return h;
}

Povm random_two_outcome_povm(int dim, RngStream& rng) {
  const CMatrix v = random_unitary(dim, rng);
  const int rank = 1 + rng.uniform_int(dim - 1);
  CMatrix p(dim);
  for (int c = 0; c < rank; ++c)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) p(i, j) += v(i, c) * std::conj(v(j, c));
  Povm povm;
  povm.outcomes = {-1, +1};
  povm.ops = {p, CMatrix::identity(dim) - p};
  return povm;
}

LossFn random_loss(RngStream& rng) {
  const double a = rng.uniform(0.0, 2.0), b = rng.uniform(0.0, 2.0);
  const double c = rng.uniform(0.0, 2.0), d = rng.uniform(0.0, 2.0);
  LossFn fn;
  fn.ell = [a, b, c, d](int y, int y_hat) {
    if (y == -1) return y_hat == -1 ? a : b;
    return y_hat == -1 ? c : d;
  };
  fn.l_max = std::max(std::max(a, b), std::max(c, d));
  return fn;
}

LabeledSample random_sample(int dim, RngStream& rng) {
  const int label = rng.uniform_int(2) == 0 ? -1 : +1;
  if (rng.uniform_int(2) == 0) {
    Ket k(dim);
    for (int i = 0; i < dim; ++i) k.amp[i] = cdouble(rng.normal(), rng.normal());
    k.normalize();
    return LabeledSample::pure(std::move(k), label);
  }
  return LabeledSample::mixed(datasets::ginibre_density(dim, rng), label);
}

AnsatzSpec random_layered_spec(int num_qubits, int max_layers, int max_gens, RngStream& rng) {
  AnsatzSpec spec;
  spec.num_qubits = num_qubits;
  spec.form = AnsatzSpec::Form::layered_product;
  const int layers = 1 + rng.uniform_int(max_layers);
  for (int l = 0; l < layers; ++l) {
    Layer layer;
    const int gens = 1 + rng.uniform_int(max_gens);
    for (int g = 0; g < gens; ++g) {
      PauliString s;
      for (int q = 0; q < num_qubits; ++q)
        s.letters.push_back(static_cast<uint8_t>(rng.uniform_int(4)));
      layer.generators.push_back(std::move(s));
    }
    if (rng.uniform_int(2) == 0) layer.fixed_gate = random_unitary(1 << num_qubits, rng);
    spec.layers.push_back(std::move(layer));
  }
  return spec;
}

ParamVector random_params(int p, RngStream& rng, double scale = 0.5) {
  ParamVector a(p);
  for (auto& v : a) v = rng.uniform(-scale, scale);
  return a;
}

double rel_l2_error(std::span<const double> got, std::span<const double> want) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

CheckResult make_check(std::string name, int criterion, double measured, double target,
                       double tolerance, bool pass, std::string note = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.criterion = criterion;
  r.measured = measured;
  r.target = target;
  r.tolerance = tolerance;
  r.pass = pass;
  r.note = std::move(note);
  return r;
}

// ---- Criterion 1: shadow unbiasedness -------------------------------------

CheckResult check_shadow_unbiasedness(Depth, Exec exec) {
  RngStream rng(101);
  double worst = 0.0;
  for (int d = 1; d <= 3; ++d) {
    for (int rep = 0; rep < 20; ++rep) {
      const CMatrix rho = datasets::ginibre_density(1 << d, rng);
      const CMatrix mean = shadows::brute_force_expectation_matrix(
          rho, [](const shadows::ShadowSnapshot& s) { return shadows::shadow_matrix(s).dense(); },
          exec);
      CMatrix diff = mean - rho;
      worst = std::max(worst, diff.max_abs());
    }
  }
  return make_check("1-shadow-unbiasedness", 1, worst, 0.0, 1e-10, worst <= 1e-10);
}

// ---- Criterion 2: estimator unbiasedness and variance ----------------------

std::vector<CheckResult> check_estimator(Depth, Exec exec) {
  RngStream rng(202);
  double worst_bias = 0.0;
  double worst_excess_9k = -1e300;  // measured variance minus the 9^k bound
  int holds_3k = 0;
  const int reps = 20;
  for (int rep = 0; rep < reps; ++rep) {
    const int d = 1 + rng.uniform_int(3);
    const int k = 1 + rng.uniform_int(d);
    std::vector<int> support;
    while (static_cast<int>(support.size()) < k) {
      const int q = rng.uniform_int(d);
      if (std::find(support.begin(), support.end(), q) == support.end()) support.push_back(q);
    }
    std::sort(support.begin(), support.end());
    const CMatrix m_local = random_hermitian(1 << k, rng);
    const CMatrix m_full = embed_on_qubits(m_local, d, support);
    const CMatrix rho = datasets::ginibre_density(1 << d, rng);

    const auto stat = [&](const shadows::ShadowSnapshot& snap) {
      const CMatrix sh = shadows::local_shadow(snap, support);
      cdouble tr = 0.0;
      for (int r = 0; r < sh.dim(); ++r)
        for (int c = 0; c < sh.dim(); ++c) tr += m_local(r, c) * sh(c, r);
      return tr.real();
    };
    const double mean = shadows::brute_force_expectation(rho, stat, exec);
    const double second =
        shadows::brute_force_expectation(rho, [&](const auto& s) { const double x = stat(s); return x * x; }, exec);
    cdouble truth = 0.0;
    for (int r = 0; r < m_full.dim(); ++r)
      for (int c = 0; c < m_full.dim(); ++c) truth += m_full(r, c) * rho(c, r);
    worst_bias = std::max(worst_bias, std::abs(mean - truth.real()));

    const auto ev = hermitian_eigenvalues(m_local);
    const double inf_norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
    const double variance = second - mean * mean;
    const double bound_9k = std::pow(9.0, k) * inf_norm * inf_norm;
    const double bound_3k = std::pow(3.0, k) * inf_norm * inf_norm;
    worst_excess_9k = std::max(worst_excess_9k, variance - bound_9k);
    if (variance <= bound_3k) ++holds_3k;
  }
  std::vector<CheckResult> out;
  out.push_back(
      make_check("2-estimator-unbiasedness", 2, worst_bias, 0.0, 1e-10, worst_bias <= 1e-10));
  out.push_back(make_check("2-estimator-variance-9k", 2, worst_excess_9k, 0.0, 1e-9,
                           worst_excess_9k <= 1e-9,
                           "measured = max over instances of Var - 9^k ||M||_inf^2"));
  CheckResult logged =
      make_check("2-variance-3k-logged", 2, static_cast<double>(holds_3k) / reps, 1.0, 0.0, true,
                 "fraction of instances whose single-snapshot variance also meets the stated 3^k "
                 "bound; logged, not asserted");
  logged.asserted = false;
  out.push_back(logged);
  return out;
}

// ---- Criterion 3: exact gradient vs finite differences ---------------------

std::vector<CheckResult> check_gradient_vs_fd(Depth, Exec exec) {
  std::vector<CheckResult> out;
  for (const std::string id : {"exp1", "exp2", "exp3"}) {
    const auto exp = datasets::experiment_spec(id);
    RngStream rng(303 + id.back());
    auto stream = datasets::make_stream(id, rng.child(1));
    RngStream prng = rng.child(2);
    CompiledAnsatz compiled(exp.ansatz);
    const LossFn loss_fn = LossFn::zero_one();
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const auto a = random_params(exp.ansatz.param_count(), prng);
      const auto sample = stream();
      const auto exact =
          gradients::exact_gradient(compiled, a, sample, exp.povm, loss_fn, exec);
      const auto fd =
          gradients::finite_difference_gradient(exp.ansatz, a, sample, exp.povm, loss_fn, 1e-5);
      worst = std::max(worst, rel_l2_error(exact.values, fd.values));
    }
    out.push_back(
        make_check("3-exact-vs-fd-" + id, 3, worst, 0.0, 1e-6, worst <= 1e-6));
  }
  return out;
}

// ---- Criteria 4 and 6: Hadamard-test unbiasedness and the PSR identity -----

std::vector<CheckResult> check_hadamard_and_psr(Depth, Exec exec) {
  RngStream rng(404);
  double worst_hadamard = 0.0;
  double worst_psr = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto spec = random_layered_spec(2, 2, 2, rng);
    CompiledAnsatz compiled(spec);
    const int p = compiled.param_count();
    const auto a = random_params(p, rng);
    const auto povm = random_two_outcome_povm(4, rng);
    const auto loss_fn = random_loss(rng);
    const auto sample = random_sample(4, rng);
    const auto exact = gradients::exact_gradient(compiled, a, sample, povm, loss_fn, exec);
    for (int j = 0; j < p; ++j) {
      const double expectation =
          gradients::hadamard_test_expectation(compiled, a, sample, povm, loss_fn, j);
      worst_hadamard = std::max(worst_hadamard, std::abs(expectation - exact.values[j]));
      const double shifted =
          gradients::psr_exact_difference(compiled, a, sample, povm, loss_fn, j);
      worst_psr = std::max(worst_psr, std::abs(shifted - exact.values[j]));
    }
  }
  return {make_check("4-hadamard-unbiasedness", 4, worst_hadamard, 0.0, 1e-10,
                     worst_hadamard <= 1e-10),
          make_check("6-psr-identity", 6, worst_psr, 0.0, 1e-10, worst_psr <= 1e-10)};
}

// ---- Criterion 5: QSGD shadow-gradient unbiasedness -------------------------

CheckResult check_qsgd_unbiasedness(Depth, Exec exec) {
  RngStream rng(505);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    AnsatzSpec spec;
    while (true) {
      spec = random_layered_spec(2, 2, 3, rng);
      if (spec.param_count() <= 8) break;
    }
    CompiledAnsatz compiled(spec);
    const auto a = random_params(compiled.param_count(), rng);
    const auto povm = random_two_outcome_povm(4, rng);
    const auto loss_fn = random_loss(rng);
    const auto sample = random_sample(4, rng);
    const CMatrix rho = sample.density();
    const auto mean = shadows::brute_force_expectation_vector(
        rho,
        [&](const shadows::ShadowSnapshot& snap) {
          return gradients::qsgd_gradient_from_snapshot(compiled, a, snap, sample.label, povm,
                                                        loss_fn, Exec::serial);
        },
        exec);
    const auto exact = gradients::exact_gradient(compiled, a, sample, povm, loss_fn, exec);
    for (size_t j = 0; j < mean.size(); ++j)
      worst = std::max(worst, std::abs(mean[j] - exact.values[j]));
  }
  return make_check("5-qsgd-shadow-unbiasedness", 5, worst, 0.0, 1e-10, worst <= 1e-10);
}

// ---- Criterion 7: non-product expansion, cubic error decay ------------------

CheckResult check_nonproduct_cubic(Depth, Exec exec) {
  RngStream rng(707);
  double lo_ratio = 1e300, hi_ratio = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const int d = rep < 5 ? 1 : 2;
    const int dim = 1 << d;
    const int count = 2 + rng.uniform_int(d == 1 ? 2 : 3);
    std::vector<PauliString> gens;
    while (static_cast<int>(gens.size()) < count) {
      PauliString s;
      for (int q = 0; q < d; ++q) s.letters.push_back(static_cast<uint8_t>(rng.uniform_int(4)));
      if (s.is_identity_string()) continue;
      bool dup = false;
      for (const auto& g : gens) dup = dup || g.letters == s.letters;
      if (!dup) gens.push_back(std::move(s));
    }
    AnsatzSpec spec;
    spec.num_qubits = d;
    spec.form = AnsatzSpec::Form::single_exponential;
    spec.layers.push_back({gens, CMatrix()});

    const auto povm = random_two_outcome_povm(dim, rng);
    const auto loss_fn = random_loss(rng);
    const auto sample = random_sample(dim, rng);

    ParamVector dir(count);
    double norm = 0.0;
    for (auto& v : dir) {
      v = rng.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : dir) v /= norm;

    auto expansion_error = [&](double scale) {
      ParamVector a(count);
      for (int j = 0; j < count; ++j) a[j] = scale * dir[j];
      const CMatrix u = ansatz::unitary(spec, a);
      const CMatrix rho_out = u * sample.density() * u.adjoint();
      const auto tilde =
          gradients::tilde_gradients_all_strings(d, rho_out, sample.label, povm, loss_fn, exec);
      const auto grad = gradients::nonproduct_gradient_expansion(gens, a, tilde);
      const auto fd =
          gradients::finite_difference_gradient(spec, a, sample, povm, loss_fn, 1e-5);
      double err = 0.0;
      for (int j = 0; j < count; ++j) err += (grad[j] - fd.values[j]) * (grad[j] - fd.values[j]);
      return std::sqrt(err);
    };
    const double ratio = expansion_error(0.1) / expansion_error(0.05);
    lo_ratio = std::min(lo_ratio, ratio);
    hi_ratio = std::max(hi_ratio, ratio);
  }
  const bool pass = lo_ratio >= 6.0 && hi_ratio <= 10.0;
  std::ostringstream note;
  note << "error ratios when halving ||a|| from 0.1 lie in [" << lo_ratio << ", " << hi_ratio
       << "]; cubic decay predicts 8";
  return make_check("7-nonproduct-cubic-decay", 7, lo_ratio, 8.0, 2.0, pass, note.str());
}

// ---- Criterion 8: desk-scale Table-1 reproduction ---------------------------

struct Table1Row {
  const char* experiment;
  double paper_accuracy;    // validation accuracy reported for QSGD
  double paper_ceiling;     // reported upper bound
  bool accuracy_is_floor;   // exp3: criterion asks >= 0.95 instead of +-3pt
  double accuracy_target;
};

std::vector<CheckResult> check_table1(Depth depth, Exec exec) {
  const Table1Row rows[] = {
      {"exp1", 0.9247, 0.9381, false, 0.9247},
      {"exp2-bell", 0.9418, 0.9516, false, 0.9418},
      {"exp3", 0.9829, 0.9978, true, 0.95},
  };
  std::vector<CheckResult> out;
  for (const auto& row : rows) {
    RunConfig cfg;
    cfg.experiment = row.experiment;
    cfg.methods = {"qsgd"};
    cfg.seed = 7;
    cfg.eval_batch = 1;  // curves not needed here
    long budget = default_budget(row.experiment);
    double acc_target = row.accuracy_target;
    double acc_tol = row.accuracy_is_floor ? 0.0 : 0.03;
    if (depth == Depth::fast) {
      budget = std::string(row.experiment) == "exp3" ? 3000 : 6000;
      acc_target = std::string(row.experiment) == "exp3" ? 0.60 : 0.78;
      acc_tol = 0.0;  // smoke floor
    }
    cfg.samples = budget;
    cfg.eval_every = static_cast<int>(budget);  // final record only
    cfg.exec = exec == Exec::parallel ? "parallel" : "serial";

    const auto result = run_train(cfg, optimize::Method::qsgd);
    const auto exp = datasets::experiment_spec(row.experiment);
    RngStream root(cfg.seed);
    const auto validation = datasets::make_batch(row.experiment, 2000, root.child(3));
    CompiledAnsatz compiled(exp.ansatz);
    const auto ev = optimize::evaluate_batch(compiled, result.final_params, validation, exp.povm,
                                             LossFn::zero_one(), false, exec);
    const bool acc_pass = row.accuracy_is_floor || depth == Depth::fast
                              ? ev.accuracy >= acc_target
                              : std::abs(ev.accuracy - acc_target) <= acc_tol;
    out.push_back(make_check(std::string("8-") + row.experiment + "-qsgd-accuracy", 8, ev.accuracy,
                             acc_target, acc_tol, acc_pass,
                             depth == Depth::fast ? "reduced-budget smoke floor" : ""));

    const auto ceiling = optimize::helstrom_ceiling(validation);
    const double err = std::abs(ceiling.max_accuracy - row.paper_ceiling);
    out.push_back(make_check(std::string("8-") + row.experiment + "-ceiling", 8,
                             ceiling.max_accuracy, row.paper_ceiling, 0.01, err <= 0.01,
                             "reported column is not reproducible from the stated ensembles via "
                             "the trace-norm bound; see README"));
  }
  return out;
}

// ---- Criterion 9: QSGD vs PSR ordering --------------------------------------

std::vector<CheckResult> check_ordering(Depth depth, Exec exec) {
  const int num_seeds = depth == Depth::fast ? 1 : 5;
  const long budget = depth == Depth::fast ? 12000 : 57600;
  int final_wins = 0;
  int dominance_wins = 0;
  for (int s = 0; s < num_seeds; ++s) {
    const uint64_t seed = 11 + s;
    std::vector<optimize::TrainRecord> recs[2];
    int idx = 0;
    for (const auto method : {optimize::Method::qsgd, optimize::Method::psr}) {
      RunConfig cfg;
      cfg.experiment = "exp1";
      cfg.seed = seed;
      cfg.samples = budget;
      cfg.eval_batch = 500;
      cfg.eval_every = method == optimize::Method::qsgd ? static_cast<int>(budget / 50) : 10;
      cfg.exec = exec == Exec::parallel ? "parallel" : "serial";
      recs[idx++] = run_train(cfg, method).records;
    }
    auto accuracy_at = [](const std::vector<optimize::TrainRecord>& rs, long samples) {
      double acc = rs.front().train_accuracy;
      for (const auto& r : rs)
        if (r.samples_used <= samples) acc = r.train_accuracy;
      return acc;
    };
    if (accuracy_at(recs[0], budget) > accuracy_at(recs[1], budget)) ++final_wins;
    bool dominated = true;
    for (int pct = 20; pct <= 100; pct += 5) {
      const long ckpt = budget * pct / 100;
      if (accuracy_at(recs[0], ckpt) < accuracy_at(recs[1], ckpt)) {
        dominated = false;
        break;
      }
    }
    if (dominated) ++dominance_wins;
  }
  const int need = depth == Depth::fast ? 1 : 4;
  return {make_check("9-ordering-final-accuracy", 9, final_wins, need, 0, final_wins >= need,
                     "seeds where QSGD's final training accuracy exceeds PSR's"),
          make_check("9-ordering-curve-dominance", 9, dominance_wins, need, 0,
                     dominance_wins >= need,
                     "seeds where the QSGD curve dominates PSR beyond 20% of the budget")};
}

// ---- Criterion 10: bound constants and sample accounting --------------------

std::vector<CheckResult> check_bounds_and_accounting(Depth, Exec exec) {
  using optimize::Method;
  double worst = 0.0;
  {
    const auto rep = optimize::convergence_bound(Method::qsgd, 48, 2, 1.0, 57600, 0.1, 1.0);
    worst = std::max(worst, std::abs(rep.c_theorem - 2.0 * std::pow(48.0, 1.5) * 9.0));
    worst = std::max(worst, std::abs(rep.c_summary - std::pow(48.0, 1.5) * 9.0));
    worst = std::max(worst, std::abs(rep.c_appendix - std::pow(48.0, 1.5) * 81.0));
    if (rep.k_star != 4) worst = std::max(worst, 1.0);  // 3^4 = 81 <= 96 < 3^5
  }
  {
    const auto rep = optimize::convergence_bound(Method::psr, 48, 2, 1.0, 57600, 0.1, 1.0, 3);
    worst = std::max(worst, std::abs(rep.c_theorem - 4.0 * std::pow(48.0, 2.5)));
    if (rep.t_iterations != 57600 / (3 * 48)) worst = std::max(worst, 1.0);
  }
  {
    const auto rep = optimize::convergence_bound(Method::qsgd, 1, 0, 1.0, 100, 0.5, 1.0);
    worst = std::max(worst, std::abs(rep.c_theorem - 2.0));
    const auto rq = optimize::convergence_bound(Method::rqsgd, 48, 2, 1.0, 57600, 0.1, 1.0);
    worst = std::max(worst, std::abs(rq.c_theorem - std::pow(48.0, 2.5)));
  }

  // Accounting on a tiny instance: 1 qubit, 2 parameters.
  AnsatzSpec spec;
  spec.num_qubits = 1;
  spec.layers.push_back(
      {{PauliString::from_text("X"), PauliString::from_text("Z")}, CMatrix()});
  Povm povm;
  CMatrix m0(2);
  m0(0, 0) = 1.0;
  povm.outcomes = {-1, +1};
  povm.ops = {m0, CMatrix::identity(2) - m0};
  RngStream data_rng(909);
  auto stream = [&]() {
    Ket k(2);
    const double t = data_rng.uniform(0.0, std::numbers::pi);
    k.amp[0] = std::cos(t);
    k.amp[1] = std::sin(t);
    return LabeledSample::pure(std::move(k), data_rng.uniform_int(2) == 0 ? -1 : 1);
  };
  const auto eval = std::vector<LabeledSample>{stream()};
  bool accounting_ok = true;
  for (const auto method : {Method::qsgd, Method::rqsgd, Method::psr, Method::exact}) {
    optimize::TrainConfig tc;
    tc.method = method;
    tc.eta = 0.05;
    tc.sample_budget = 50;
    tc.m_shots = 2;
    tc.seed = 3;
    tc.exec = exec;
    const auto result = optimize::train(spec, povm, LossFn::zero_one(), stream, eval, tc);
    long expected;
    if (method == Method::psr) {
      const long per_iter = 2L * tc.m_shots * 2;
      expected = (tc.sample_budget / per_iter) * per_iter;  // 48
    } else {
      expected = tc.sample_budget;
    }
    if (result.samples_used != expected) accounting_ok = false;
    if (result.records.back().samples_used != expected) accounting_ok = false;
  }
  return {make_check("10-bound-constants", 10, worst, 0.0, 1e-9, worst <= 1e-9),
          make_check("10-sample-accounting", 10, accounting_ok ? 1.0 : 0.0, 1.0, 0.0,
                     accounting_ok)};
}

// ---- Criterion 11: determinism ----------------------------------------------

std::vector<CheckResult> check_determinism(Depth, Exec) {
  RunConfig cfg;
  cfg.experiment = "exp1";
  cfg.seed = 5;
  cfg.samples = 2000;
  cfg.eval_every = 500;
  cfg.eval_batch = 100;

  const auto run_csv = [&cfg]() {
    return format_records_csv(run_train(cfg, optimize::Method::qsgd).records);
  };
  const std::string first = run_csv();
  const std::string second = run_csv();
  const bool reruns_equal = first == second;

  const int saved = max_threads();
  set_threads(1);
  cfg.exec = "serial";
  const std::string serial_csv = run_csv();
  set_threads(saved);
  cfg.exec = "parallel";
  const std::string parallel_csv = run_csv();
  const bool threads_equal = serial_csv == first && parallel_csv == first;

  return {make_check("11-determinism-reruns", 11, reruns_equal ? 1.0 : 0.0, 1.0, 0.0,
                     reruns_equal, "byte-identical CSV across two identical runs"),
          make_check("11-determinism-threads", 11, threads_equal ? 1.0 : 0.0, 1.0, 0.0,
                     threads_equal,
                     "byte-identical CSV across serial and parallel execution")};
}

}  // namespace

std::vector<int> expected_criteria() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}; }

std::vector<CheckResult> run_checks(Depth depth, Exec exec) {
  std::vector<CheckResult> out;
  auto append = [&out](std::vector<CheckResult> rs) {
    for (auto& r : rs) out.push_back(std::move(r));
  };
  out.push_back(check_shadow_unbiasedness(depth, exec));
  append(check_estimator(depth, exec));
  append(check_gradient_vs_fd(depth, exec));
  append(check_hadamard_and_psr(depth, exec));
  out.push_back(check_qsgd_unbiasedness(depth, exec));
  out.push_back(check_nonproduct_cubic(depth, exec));
  append(check_table1(depth, exec));
  append(check_ordering(depth, exec));
  append(check_bounds_and_accounting(depth, exec));
  append(check_determinism(depth, exec));
  return out;
}

std::string check_result_json(const CheckResult& r) {
  nlohmann::json j;
  j["check"] = r.name;
  j["criterion"] = r.criterion;
  j["status"] = r.pass ? "pass" : "fail";
  j["asserted"] = r.asserted;
  j["measured"] = r.measured;
  j["target"] = r.target;
  j["tolerance"] = r.tolerance;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump();
}

int cmd_verify(Depth depth, const std::string& out) {
  const auto results = run_checks(depth);
  std::string text;
  bool all_pass = true;
  for (const auto& r : results) {
    text += check_result_json(r);
    text += '\n';
    if (r.asserted && !r.pass) all_pass = false;
  }
  if (out.empty()) {
    std::cout << text;
  } else {
    try {
      write_file_atomic(out, text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitIo;
    }
  }
  return all_pass ? kExitOk : kExitVerify;
}

}  // namespace qsgd::cli
