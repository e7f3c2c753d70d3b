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

#include <cstddef>
#include <span>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qsgd {

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// path; `parallel` uses OpenMP when compiled in. Results are required to be
/// bit-identical between the two: every kernel writes each output slot from
/// exactly one index and reductions over slots happen in a fixed serial order.
enum class Exec { serial, parallel };

template <typename F>
inline void for_each_index(Exec exec, int n, F&& f) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
#else
  (void)exec;
#endif
  for (int i = 0; i < n; ++i) f(i);
}

/// Fixed-order (left-to-right) sum; used after parallel fills so the result
/// does not depend on the thread schedule.
inline double sum_ordered(std::span<const double> xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc;
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace qsgd
