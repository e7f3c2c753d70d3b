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

#include <string>
#include <vector>

#include "qsgd/parallel.hpp"

namespace qsgd::cli {

enum class Depth { fast, full };

struct CheckResult {
  std::string name;      // "<criterion>-<slug>"
  int criterion = 0;     // 1..11
  bool pass = false;
  bool asserted = true;  // informational lines are logged but never gate
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string note;
};

/// The verification registry: every acceptance-grade invariant, each producing
/// one report line. `fast` runs reduced training budgets with correspondingly
/// reduced smoke targets; `full` runs the real budgets and tolerances.
std::vector<CheckResult> run_checks(Depth depth, Exec exec = Exec::parallel);

/// Criterion numbers that must each appear at least once in a report.
std::vector<int> expected_criteria();

std::string check_result_json(const CheckResult& r);

/// Runs the registry, writes one JSON line per check (to stdout when `out` is
/// empty), returns kExitOk or kExitVerify.
int cmd_verify(Depth depth, const std::string& out);

}  // namespace qsgd::cli
