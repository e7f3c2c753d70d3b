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

// Times the OpenMP kernels against the serial reference path and reports the
// speedup. The two paths are bit-identical by contract; this only measures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "qsgd/cli/runner.hpp"
#include "qsgd/datasets/datasets.hpp"
#include "qsgd/gradients/gradients.hpp"
#include "qsgd/optimize/optimize.hpp"
#include "qsgd/shadows/shadows.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto start = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto stop = Clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void report(const std::string& name, double serial_ms, double parallel_ms) {
  std::printf("%-34s serial %9.3f ms   omp %9.3f ms   speedup %5.2fx\n", name.c_str(), serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  using namespace qsgd;
  std::printf("threads available: %d\n", max_threads());

  {
    const auto exp = datasets::experiment_spec("exp3");
    CompiledAnsatz compiled(exp.ansatz);
    RngStream rng(1);
    const auto sample = datasets::sample_exp3(rng);
    ParamVector a(compiled.param_count());
    for (auto& v : a) v = rng.uniform(-0.1, 0.1);
    const LossFn loss = LossFn::zero_one();
    for (Exec exec : {Exec::serial, Exec::parallel}) {
      (void)gradients::exact_gradient(compiled, a, sample, exp.povm, loss, exec);
    }
    const double s = time_ms(
        [&] { (void)gradients::exact_gradient(compiled, a, sample, exp.povm, loss, Exec::serial); },
        5);
    const double p = time_ms(
        [&] { (void)gradients::exact_gradient(compiled, a, sample, exp.povm, loss, Exec::parallel); },
        5);
    report("exact_gradient exp3 (p=256)", s, p);

    RngStream snap_rng(2);
    const double s2 = time_ms(
        [&] {
          RngStream r = snap_rng.child(3);
          (void)gradients::qsgd_gradient(compiled, a, sample, exp.povm, loss, r, Exec::serial);
        },
        5);
    const double p2 = time_ms(
        [&] {
          RngStream r = snap_rng.child(3);
          (void)gradients::qsgd_gradient(compiled, a, sample, exp.povm, loss, r, Exec::parallel);
        },
        5);
    report("qsgd_gradient exp3 (p=256)", s2, p2);
  }

  {
    const auto exp = datasets::experiment_spec("exp1");
    CompiledAnsatz compiled(exp.ansatz);
    RngStream rng(4);
    const auto batch = datasets::make_batch("exp1", 512, rng.child(1));
    ParamVector a(compiled.param_count());
    for (auto& v : a) v = rng.uniform(-0.1, 0.1);
    const LossFn loss = LossFn::zero_one();
    const double s = time_ms(
        [&] {
          (void)optimize::evaluate_batch(compiled, a, batch, exp.povm, loss, true, Exec::serial);
        },
        3);
    const double p = time_ms(
        [&] {
          (void)optimize::evaluate_batch(compiled, a, batch, exp.povm, loss, true, Exec::parallel);
        },
        3);
    report("evaluate_batch exp1 (512 states)", s, p);
  }

  {
    RngStream rng(5);
    const CMatrix rho = datasets::ginibre_density(8, rng);
    const auto stat = [](const shadows::ShadowSnapshot& snap) {
      return shadows::shadow_matrix(snap).dense()(0, 0).real();
    };
    const double s = time_ms(
        [&] { (void)shadows::brute_force_expectation(rho, stat, Exec::serial); }, 10);
    const double p = time_ms(
        [&] { (void)shadows::brute_force_expectation(rho, stat, Exec::parallel); }, 10);
    report("brute_force_expectation d=3", s, p);
  }

  return 0;
}
