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

#include "qsgd/cli/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "qsgd/datasets/datasets.hpp"

namespace qsgd::cli {

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_config_entries(RunConfig& cfg, const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "experiment") cfg.experiment = value;
    else if (key == "method") {
      cfg.methods.clear();
      std::istringstream ss(value);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.methods.push_back(tok);
    } else if (key == "samples") cfg.samples = std::stol(value);
    else if (key == "eta") cfg.eta = std::stod(value);
    else if (key == "schedule") cfg.schedule = value;
    else if (key == "shots") cfg.shots = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "eval-every") cfg.eval_every = std::stoi(value);
    else if (key == "eval-batch") cfg.eval_batch = std::stoi(value);
    else if (key == "validation-size") cfg.validation_size = std::stoi(value);
    else if (key == "out") cfg.out = value;
    else if (key == "variant") cfg.variant = value;
    else if (key == "shadows-per-sample") cfg.shadows_per_sample = std::stoi(value);
    else if (key == "threads") cfg.threads = std::stoi(value);
    else if (key == "exec") cfg.exec = value;
    else throw std::runtime_error("unknown config key '" + key + "'");
  }
}

// Committed grid-search results over {0.01, 0.02, 0.05, 0.1, 0.2, 0.5}
// (fixed-step schedule, the budgets below, seed-averaged validation accuracy).
double default_eta(const std::string& experiment, optimize::Method method) {
  const std::string exp = experiment == "exp2-bell" ? "exp2" : experiment;
  using optimize::Method;
  if (exp == "exp1") {
    switch (method) {
      case Method::qsgd: return 0.01;
      case Method::rqsgd: return 0.05;
      case Method::psr: return 0.5;
      case Method::exact: return 0.5;
    }
  } else if (exp == "exp2") {
    switch (method) {
      case Method::qsgd: return 0.01;
      case Method::rqsgd: return 0.05;
      case Method::psr: return 0.5;
      case Method::exact: return 0.5;
    }
  } else if (exp == "exp3") {
    switch (method) {
      case Method::qsgd: return 0.01;
      case Method::rqsgd: return 0.02;
      case Method::psr: return 0.5;
      case Method::exact: return 0.2;
    }
  }
  throw std::invalid_argument("no default step size for experiment '" + experiment + "'");
}

long default_budget(const std::string& experiment) {
  if (experiment == "exp3") return 61440;
  return 57600;
}

int default_eval_every(const std::string& experiment) {
  return experiment == "exp3" ? 1024 : 576;
}

std::string resolve_dataset_id(const std::string& experiment, const std::string& variant) {
  if (experiment == "exp2" || experiment == "exp2-bell") {
    if (variant.empty()) return experiment;
    return variant == "bell" ? "exp2-bell" : "exp2";
  }
  if (!variant.empty())
    throw std::invalid_argument("variant only applies to exp2");
  return experiment;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_records_csv(const std::vector<optimize::TrainRecord>& records) {
  std::string out = "iter,samples_used,train_loss,train_accuracy,grad_norm_sq\n";
  for (const auto& r : records) {
    out += std::to_string(r.iter);
    out += ',';
    out += std::to_string(r.samples_used);
    out += ',';
    out += format_double(r.train_loss);
    out += ',';
    out += format_double(r.train_accuracy);
    out += ',';
    out += format_double(r.grad_norm_sq);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!os) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

optimize::TrainResult run_train(const RunConfig& cfg, optimize::Method method) {
  const std::string dataset_id = resolve_dataset_id(cfg.experiment, cfg.variant);
  const auto exp = datasets::experiment_spec(dataset_id);

  optimize::TrainConfig tc;
  tc.method = method;
  tc.eta = cfg.eta.value_or(default_eta(cfg.experiment, method));
  if (cfg.schedule == "fixed") tc.schedule = optimize::Schedule::fixed;
  else if (cfg.schedule == "decaying") tc.schedule = optimize::Schedule::decaying;
  else if (cfg.schedule == "averaged") tc.schedule = optimize::Schedule::averaged;
  else throw std::invalid_argument("unknown schedule '" + cfg.schedule + "'");
  tc.m_shots = cfg.shots;
  tc.sample_budget = cfg.samples > 0 ? cfg.samples : default_budget(cfg.experiment);
  tc.eval_every = cfg.eval_every > 0 ? cfg.eval_every : default_eval_every(cfg.experiment);
  tc.shadows_per_sample = cfg.shadows_per_sample;
  if (cfg.exec == "serial") tc.exec = Exec::serial;
  else if (cfg.exec == "parallel") tc.exec = Exec::parallel;
  else throw std::invalid_argument("unknown exec policy '" + cfg.exec + "'");

  RngStream root(cfg.seed);
  // Methods get decorrelated sub-seeds so cmd_compare rows are independent.
  const uint64_t method_salt = 100 + static_cast<uint64_t>(method);
  tc.seed = root.child(method_salt).seed();

  auto stream = datasets::make_stream(dataset_id, root.child(method_salt ^ 0xD5));
  const auto eval_batch = datasets::make_batch(dataset_id, cfg.eval_batch, root.child(2));
  return optimize::train(exp.ansatz, exp.povm, LossFn::zero_one(), stream, eval_batch, tc);
}

int cmd_train(const RunConfig& cfg) {
  try {
    if (cfg.methods.size() != 1)
      throw std::invalid_argument("train takes exactly one --method");
    if (cfg.out.empty()) throw std::invalid_argument("train requires --out");
    set_threads(cfg.threads);
    const auto result = run_train(cfg, optimize::method_from_name(cfg.methods[0]));
    write_file_atomic(cfg.out, format_records_csv(result.records));
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

int cmd_compare(const RunConfig& cfg) {
  try {
    if (cfg.out.empty()) throw std::invalid_argument("compare requires --out");
    if (cfg.methods.empty()) throw std::invalid_argument("compare requires at least one method");
    set_threads(cfg.threads);

    const std::string dataset_id = resolve_dataset_id(cfg.experiment, cfg.variant);
    const auto exp = datasets::experiment_spec(dataset_id);
    RngStream root(cfg.seed);
    const auto validation =
        datasets::make_batch(dataset_id, cfg.validation_size, root.child(3));
    const auto ceiling = optimize::helstrom_ceiling(validation);

    std::string out =
        "method,validation_accuracy,validation_born_accuracy,samples_used,helstrom_ceiling\n";
    CompiledAnsatz compiled(exp.ansatz);
    const LossFn loss_fn = LossFn::zero_one();
    for (const auto& name : cfg.methods) {
      const auto method = optimize::method_from_name(name);
      const auto result = run_train(cfg, method);
      const auto ev = optimize::evaluate_batch(compiled, result.final_params, validation, exp.povm,
                                               loss_fn, false, Exec::parallel);
      out += name;
      out += ',';
      out += format_double(ev.accuracy);
      out += ',';
      out += format_double(ev.born_accuracy);
      out += ',';
      out += std::to_string(result.samples_used);
      out += ',';
      out += format_double(ceiling.max_accuracy);
      out += '\n';
    }
    write_file_atomic(cfg.out, out);
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

int cmd_dump(const RunConfig& cfg) {
  try {
    if (cfg.out.empty()) throw std::invalid_argument("dump requires --out");
    const std::string dataset_id = resolve_dataset_id(cfg.experiment, cfg.variant);
    RngStream root(cfg.seed);
    const auto samples =
        datasets::make_batch(dataset_id, static_cast<int>(cfg.dump_count), root.child(4));
    datasets::dump_samples(cfg.out, samples);
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace qsgd::cli
