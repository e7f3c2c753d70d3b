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

#include <cstdint>
#include <random>
#include <span>

namespace qsgd {

/// Seeded stream with cheap labeled children. Everything is hand-rolled on
/// top of mt19937_64 raw draws (no std distributions), so sequences are
/// byte-identical across platforms and across degrees of parallelism.
/// child(salt) derives an independent stream from the *seed*, not the current
/// state; derive all labeled streams up front.
class RngStream {
 public:
  explicit RngStream(uint64_t seed);

  RngStream child(uint64_t salt) const;

  uint64_t next_u64();
  double uniform();                // [0, 1), 53-bit
  double uniform(double lo, double hi);
  double normal();                 // standard normal, Box-Muller
  int uniform_int(int n);          // [0, n), unbiased
  /// Index drawn proportionally to weights (clamped at 0, renormalized).
  int discrete(std::span<const double> weights);

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_ = 0;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

uint64_t splitmix64(uint64_t x);

}  // namespace qsgd
