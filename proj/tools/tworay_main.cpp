// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tworay/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tworay: boundary-coupled two-ray differential operator laboratory"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  const auto add_scenario_command = [&](const std::string& name, const std::string& desc) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--config", config_path, "scenario config (JSON)")->required();
    cmd->add_option("--out", out_dir, "output directory for report.json and tables");
    cmd->add_option("--seed", seed, "override the config seed");
    return cmd;
  };

  add_scenario_command("verify-green", "boundary map and Green identity suite");
  add_scenario_command("check-normality", "norm equality and interface condition suite");
  add_scenario_command("probe-point-spectrum", "eigenfunction scan over a spectral grid");
  add_scenario_command("resolvent-sweep", "randomized resolvent norm estimates off the axis");
  add_scenario_command("counterexample", "on-axis divergence of the explicit counterexample");
  add_scenario_command("heat-demo", "cosine-mode heat model bundle");
  CLI::App* list = app.add_subcommand("list", "catalog of scenario commands");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    std::cout << tworay::list_commands();
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return 0;
  }

  tworay::RunOptions options;
  options.output_dir = out_dir;
  options.seed = seed;
  const tworay::ScenarioOutcome outcome = tworay::run_scenario_file(config_path, options);
  if (!outcome.message.empty()) {
    std::cerr << outcome.message << '\n';
  }
  if (!outcome.report_path.empty()) {
    std::cout << "report: " << outcome.report_path << '\n';
  }
  return outcome.exit_code;
}
