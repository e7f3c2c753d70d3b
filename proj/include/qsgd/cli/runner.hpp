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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsgd/optimize/optimize.hpp"

namespace qsgd::cli {

// Exit codes: 0 success, 1 config error, 2 verification failure, 3 IO error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitVerify = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
  std::string experiment = "exp1";
  std::vector<std::string> methods = {"qsgd"};
  long samples = 0;              // 0: experiment default budget
  std::optional<double> eta;     // unset: committed grid-search default
  std::string schedule = "fixed";
  int shots = 1;                 // PSR measurement shots per shift
  uint64_t seed = 1;
  int eval_every = 0;            // 0: experiment default
  int eval_batch = 500;
  int validation_size = 2000;
  std::string out;
  std::string variant;           // exp2 dataset variant override
  int shadows_per_sample = 1;
  int threads = 0;               // 0: library default
  long dump_count = 1000;        // `dump` subcommand
  std::string exec = "parallel"; // parallel | serial (reference kernels)
};

/// key=value lines; '#' comments and blank lines ignored. Flags override file
/// values, so apply_config_file runs before flag assignment.
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_config_entries(RunConfig& cfg, const std::map<std::string, std::string>& entries);

/// Committed grid-search step sizes per (experiment, method), grid
/// {0.01, 0.02, 0.05, 0.1, 0.2, 0.5}.
double default_eta(const std::string& experiment, optimize::Method method);
long default_budget(const std::string& experiment);
int default_eval_every(const std::string& experiment);

/// Dataset id after applying the variant override (exp2 + bell -> exp2-bell).
std::string resolve_dataset_id(const std::string& experiment, const std::string& variant);

/// Writes the training curve CSV (header iter,samples_used,train_loss,
/// train_accuracy,grad_norm_sq; one row per eval point) atomically.
int cmd_train(const RunConfig& cfg);
/// Trains every requested method on identical budgets, evaluates each on a
/// shared validation set, and writes a CSV with the Helstrom ceiling column.
int cmd_compare(const RunConfig& cfg);
/// Writes a binary dataset dump.
int cmd_dump(const RunConfig& cfg);

/// In-process core of cmd_train (used by tests and determinism checks).
optimize::TrainResult run_train(const RunConfig& cfg, optimize::Method method);
std::string format_records_csv(const std::vector<optimize::TrainRecord>& records);
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace qsgd::cli
