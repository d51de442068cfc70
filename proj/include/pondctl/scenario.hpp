#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pondctl/model.hpp"
#include "pondctl/spatial.hpp"

namespace pondctl {

/// Per-species initial density profile. `constant` holds value everywhere,
/// `linear` is value * x, `nodes` lists one density per grid node.
struct InitialCondition {
  enum class Kind { constant, linear, nodes };
  Kind kind = Kind::constant;
  double value = 0.0;
  std::vector<double> node_values;

  bool operator==(const InitialCondition&) const = default;
};

struct OutputOptions {
  std::string dir = "out";
  bool csv = true;
  bool plot_script = false;

  bool operator==(const OutputOptions&) const = default;
};

struct ScenarioConfig {
  ModelSpec model;
  Discretization disc;
  std::vector<InitialCondition> initial;  // one per species
  bool control_enabled = true;
  SwitchRule rule = SwitchRule::cross_species;
  int output_stride = 10;
  OutputOptions output;

  bool operator==(const ScenarioConfig&) const = default;
};

/** Parses the line-oriented scenario format.
 *
 * Each line is `key = value`; `#` starts a comment and blank lines are
 * skipped. Species fields use `species.<j>.<field>` with 1-based j, the
 * interaction row as `species.<j>.b.<k>`. Initial conditions read
 * `const <v>`, `linear <slope>` or `nodes <v1> <v2> ...`. Syntax errors
 * carry the 1-based line number; the assembled model and grid are
 * validated before the config is returned.
 */
ScenarioConfig parse_config(std::string_view text);

/// Canonical text form. parse_config(render_config(c)) == c.
std::string render_config(const ScenarioConfig& config);

/// Expands the per-species initial conditions onto the grid.
StateField build_initial_field(const ScenarioConfig& config);

/// Initial state for a purely temporal run. Every species must use a
/// `const` profile, else Error(validation_error).
std::vector<double> build_initial_state(const ScenarioConfig& config);

struct PresetInfo {
  std::string name;
  std::string description;
};

/// Bundled ready-to-run scenarios.
const std::vector<PresetInfo>& list_presets();

bool is_preset(std::string_view name);

/// Config text of a bundled preset. Throws Error(validation_error) for
/// unknown names.
std::string preset_config_text(std::string_view name);

}  // namespace pondctl
