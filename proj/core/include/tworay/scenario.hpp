// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef TWORAY_SCENARIO_HPP
#define TWORAY_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace tworay {

struct RunOptions {
  std::string output_dir;             // overrides the config's output_dir when nonempty
  std::optional<std::uint64_t> seed;  // overrides the config's seed
};

struct ScenarioOutcome {
  int exit_code = 0;  // 0: all assertions pass, 1: assertion failure, 2: config error
  std::string report_path;
  std::string message;
};

/// Runs one scenario config (JSON document) and writes report.json plus the
/// per-table CSV files into the output directory.
ScenarioOutcome run_scenario_file(const std::string& config_path, const RunOptions& options);
ScenarioOutcome run_scenario_text(const std::string& config_json, const RunOptions& options);

/// Stable catalog of the six scenario commands and what each one verifies.
std::string list_commands();

}  // namespace tworay

namespace tworay {

class ExtensionSpec;

/// Serializes an extension to the scenario model block: a JSON object with
/// dim, a, b and the entries of A1, A2, W as row-major interleaved re/im
/// arrays, exactly the shape run_scenario parses back.
std::string extension_to_config(const ExtensionSpec& spec);

}  // namespace tworay

#endif  // TWORAY_SCENARIO_HPP
