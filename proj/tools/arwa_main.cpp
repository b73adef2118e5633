// Copyright 2026 The ARWA Authors
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


#include <cstdlib>
#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "arwa/cli.hpp"
#include "arwa/errors.hpp"

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("arwa");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("ARWA_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honour names it actually knows.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Adaptive rotating-wave steady states of driven open quantum systems"};
  app.require_subcommand(1);
  arwa::cli::CliOptions opts;
  std::string format;
  int workers = 0;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", opts.model_path, "Model JSON file");
    sub->add_option("--config", opts.config_path, "Run configuration JSON file");
    sub->add_option("--out", opts.out_path, "Output file (default: stdout)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json", "dot"}));
    sub->add_option("--workers", workers, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Seed for randomized models");
    sub->add_flag("--compare-oracle", opts.compare_oracle, "Add time-averaged oracle values");
    sub->add_option("--trajectory", opts.trajectory_path, "Trajectory CSV path (oracle)");
  };

  auto* solve = app.add_subcommand("solve", "Adaptive steady state and observables");
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
  auto* graph = app.add_subcommand("graph", "Frame graph as DOT and JSON");
  auto* oracle = app.add_subcommand("oracle", "Lab-frame time integration and long-time average");
  auto* bench = app.add_subcommand("bench", "Adaptive solve versus extrapolated time integration");
  for (auto* sub : {solve, sweep, graph, oracle, bench}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : arwa::cli::kError;
  }

  for (auto* sub : {solve, sweep, graph, oracle, bench}) {
    if (!sub->parsed()) continue;
    if (sub->count("--format") > 0) opts.format = format;
    if (sub->count("--workers") > 0) opts.workers = workers;
    if (sub->count("--seed") > 0) opts.seed = seed;
  }

  arwa::cli::RunConfig config;
  try {
    config = arwa::cli::make_run_config(opts);
  } catch (const arwa::ConfigError& e) {
    std::cerr << "error: invalid configuration: " << e.what() << '\n';
    return arwa::cli::kError;
  }

  if (solve->parsed()) return arwa::cli::cmd_solve(config, std::cout, std::cerr);
  if (sweep->parsed()) return arwa::cli::cmd_sweep(config, std::cout, std::cerr);
  if (graph->parsed()) return arwa::cli::cmd_graph(config, std::cout, std::cerr);
  if (oracle->parsed()) return arwa::cli::cmd_oracle(config, std::cout, std::cerr);
  return arwa::cli::cmd_bench(config, std::cout, std::cerr);
}
