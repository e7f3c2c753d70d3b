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

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qsgd/cli/runner.hpp"
#include "qsgd/cli/verify.hpp"

namespace {

struct CommonOpts {
  double eta = 0.0;
  CLI::Option* eta_opt = nullptr;
};

void add_common_options(CLI::App* cmd, qsgd::cli::RunConfig& cfg, CommonOpts& extra) {
  cmd->add_option("--experiment", cfg.experiment, "exp1 | exp2 | exp2-bell | exp3");
  cmd->add_option("--samples", cfg.samples, "quantum sample budget n (0: experiment default)");
  extra.eta_opt =
      cmd->add_option("--eta", extra.eta, "step size (default: committed grid-search value)");
  cmd->add_option("--schedule", cfg.schedule, "fixed | decaying | averaged");
  cmd->add_option("--shots", cfg.shots, "PSR measurement shots per shift");
  cmd->add_option("--seed", cfg.seed, "root seed; all randomness derives from it");
  cmd->add_option("--eval-every", cfg.eval_every, "iterations between curve records");
  cmd->add_option("--eval-batch", cfg.eval_batch, "held-out evaluation batch size");
  cmd->add_option("--validation-size", cfg.validation_size, "compare validation set size");
  cmd->add_option("--out", cfg.out, "output path");
  cmd->add_option("--variant", cfg.variant, "exp2 dataset variant: as-written | bell");
  cmd->add_option("--shadows-per-sample", cfg.shadows_per_sample,
                  "QSGD shadows per sample (>1 is non-physical; ablation only)");
  cmd->add_option("--threads", cfg.threads, "OpenMP thread cap (0: library default)");
  cmd->add_option("--exec", cfg.exec, "parallel | serial reference kernels");
}

}  // namespace

int main(int argc, char** argv) {
  qsgd::cli::RunConfig cfg;

  // The config file loads before flag parsing so that flags override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        qsgd::cli::apply_config_entries(cfg, qsgd::cli::parse_config_file(argv[i + 1]));
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return qsgd::cli::kExitConfig;
      }
    }
  }

  CLI::App app{"quantum shadow gradient descent trainer and verifier"};
  app.require_subcommand(1);

  std::string config_path;
  std::string method_arg;
  std::string methods_arg;
  std::string depth_arg = "fast";
  std::string verify_out;
  CommonOpts train_extra, compare_extra, dump_extra;

  auto* train = app.add_subcommand("train", "train one method, write the curve CSV");
  train->add_option("--config", config_path, "key=value config file; flags override");
  add_common_options(train, cfg, train_extra);
  auto* train_method = train->add_option("--method", method_arg, "qsgd | rqsgd | psr | exact");

  auto* compare = app.add_subcommand("compare", "train several methods on equal budgets");
  compare->add_option("--config", config_path, "key=value config file; flags override");
  add_common_options(compare, cfg, compare_extra);
  auto* compare_methods =
      compare->add_option("--method", methods_arg, "comma-separated method list");

  auto* verify = app.add_subcommand("verify", "run the verification checks, emit JSON lines");
  verify->add_option("--depth", depth_arg, "fast | full");
  verify->add_option("--out", verify_out, "report path (default: stdout)");

  auto* dump = app.add_subcommand("dump", "write a binary dataset dump");
  dump->add_option("--config", config_path, "key=value config file; flags override");
  add_common_options(dump, cfg, dump_extra);
  dump->add_option("--count", cfg.dump_count, "number of samples");

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    if (train_extra.eta_opt->count() > 0) cfg.eta = train_extra.eta;
    if (train_method->count() > 0) cfg.methods = {method_arg};
    return qsgd::cli::cmd_train(cfg);
  }
  if (compare->parsed()) {
    if (compare_extra.eta_opt->count() > 0) cfg.eta = compare_extra.eta;
    if (compare_methods->count() > 0) {
      cfg.methods.clear();
      std::stringstream ss(methods_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.methods.push_back(tok);
    } else if (cfg.methods.size() <= 1 && cfg.methods == std::vector<std::string>{"qsgd"}) {
      cfg.methods = {"qsgd", "rqsgd", "psr"};
    }
    return qsgd::cli::cmd_compare(cfg);
  }
  if (verify->parsed()) {
    qsgd::cli::Depth depth;
    if (depth_arg == "fast") depth = qsgd::cli::Depth::fast;
    else if (depth_arg == "full") depth = qsgd::cli::Depth::full;
    else {
      std::cerr << "config error: unknown depth '" << depth_arg << "'\n";
      return qsgd::cli::kExitConfig;
    }
    return qsgd::cli::cmd_verify(depth, verify_out);
  }
  if (dump->parsed()) return qsgd::cli::cmd_dump(cfg);
  return qsgd::cli::kExitConfig;
}
