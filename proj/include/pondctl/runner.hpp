#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pondctl/scenario.hpp"
#include "pondctl/temporal.hpp"

namespace pondctl {

struct RunOverrides {
  std::optional<std::string> out_dir;  // replaces config.output.dir
  bool disable_control = false;
  bool ode_only = false;  // integrate the temporal system instead of the field
};

struct RunResult {
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> files;
};

/** Runs a scenario and writes its outputs.
 *
 * A field run writes field.csv (t, x, one density and one control column
 * per species), diagnostics.csv (per-step convergence record), levels.txt,
 * levels.csv, and plot.gp when the plot-script format is enabled. An
 * ode-only run writes trajectory.csv instead of field.csv. CSV numbers
 * carry 6 significant digits; levels.txt rounds to 4 decimals and
 * levels.csv keeps full precision. Outputs of a failed run are removed
 * before the error propagates.
 */
RunResult run_scenario(const ScenarioConfig& config, const RunOverrides& overrides = {});

std::string format_levels_text(const ModelSpec& spec, const ControlLevels& levels);
std::string format_levels_csv(const ModelSpec& spec, const ControlLevels& levels);

}  // namespace pondctl
