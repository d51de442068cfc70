#include "pondctl/scenario.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>

namespace pondctl {

namespace {

struct RawEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

[[noreturn]] void fail_at(Errc code, int line, const std::string& message) {
  throw Error(code, "line " + std::to_string(line) + ": " + message);
}

std::string_view trim(std::string_view text) {
  const char* ws = " \t\r";
  const auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

double to_double(std::string_view text, int line, const std::string& key) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    fail_at(Errc::syntax_error, line, key + ": '" + std::string(text) + "' is not a number");
  }
  return value;
}

int to_int(std::string_view text, int line, const std::string& key) {
  int value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    fail_at(Errc::syntax_error, line, key + ": '" + std::string(text) + "' is not an integer");
  }
  return value;
}

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> tokens;
  std::istringstream stream{std::string(text)};
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

std::vector<std::string> split_on(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(trim(text.substr(start)));
      break;
    }
    parts.emplace_back(trim(text.substr(start, pos - start)));
    start = pos + 1;
  }
  return parts;
}

class EntryMap {
 public:
  void insert(std::string key, std::string value, int line) {
    const auto [it, fresh] = entries_.emplace(std::move(key), RawEntry{std::move(value), line});
    if (!fresh) {
      fail_at(Errc::validation_error, line,
              "duplicate key '" + it->first + "' (first set on line " + std::to_string(it->second.line) + ")");
    }
  }

  const RawEntry* take(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  const RawEntry& require(const std::string& key) {
    const RawEntry* entry = take(key);
    if (entry == nullptr) {
      throw Error(Errc::missing_required_key, "'" + key + "'");
    }
    return *entry;
  }

  void reject_unused() const {
    const std::string* key = nullptr;
    int line = 0;
    for (const auto& [name, entry] : entries_) {
      if (!entry.used && (key == nullptr || entry.line < line)) {
        key = &name;
        line = entry.line;
      }
    }
    if (key != nullptr) {
      fail_at(Errc::unknown_key, line, "'" + *key + "'");
    }
  }

 private:
  std::map<std::string, RawEntry> entries_;
};

InitialCondition parse_initial(const RawEntry& entry, const std::string& key, int n_space) {
  const std::vector<std::string> tokens = split_ws(entry.value);
  if (tokens.empty()) {
    fail_at(Errc::syntax_error, entry.line, key + ": empty initial condition");
  }
  InitialCondition init;
  if (tokens[0] == "const" || tokens[0] == "linear") {
    if (tokens.size() != 2) {
      fail_at(Errc::syntax_error, entry.line, key + ": expected '" + tokens[0] + " <value>'");
    }
    init.kind = tokens[0] == "const" ? InitialCondition::Kind::constant : InitialCondition::Kind::linear;
    init.value = to_double(tokens[1], entry.line, key);
    if (!(init.value >= 0.0)) {
      fail_at(Errc::validation_error, entry.line, key + ": initial densities must be non-negative");
    }
  } else if (tokens[0] == "nodes") {
    init.kind = InitialCondition::Kind::nodes;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const double v = to_double(tokens[i], entry.line, key);
      if (!(v >= 0.0)) {
        fail_at(Errc::validation_error, entry.line, key + ": initial densities must be non-negative");
      }
      init.node_values.push_back(v);
    }
    if (init.node_values.size() != static_cast<std::size_t>(n_space)) {
      fail_at(Errc::validation_error, entry.line,
              key + ": " + std::to_string(init.node_values.size()) + " node values for " +
                  std::to_string(n_space) + " grid nodes");
    }
  } else {
    fail_at(Errc::syntax_error, entry.line,
            key + ": initial condition must start with const, linear or nodes");
  }
  return init;
}

std::string fmt_full(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  EntryMap entries;
  int line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto newline = text.find('\n', start);
    std::string_view line = newline == std::string_view::npos
                                ? text.substr(start)
                                : text.substr(start, newline - start);
    ++line_number;
    start = newline == std::string_view::npos ? text.size() + 1 : newline + 1;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail_at(Errc::syntax_error, line_number, "expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      fail_at(Errc::syntax_error, line_number, "empty key");
    }
    if (value.empty()) {
      fail_at(Errc::syntax_error, line_number, "missing value for '" + std::string(key) + "'");
    }
    entries.insert(std::string(key), std::string(value), line_number);
  }

  ScenarioConfig config;

  const RawEntry& species_entry = entries.require("n_species");
  const int n_species = to_int(species_entry.value, species_entry.line, "n_species");
  if (n_species < 1) {
    fail_at(Errc::validation_error, species_entry.line, "n_species must be at least 1");
  }

  const RawEntry& length = entries.require("length");
  config.disc.length = to_double(length.value, length.line, "length");
  const RawEntry& nodes = entries.require("nodes");
  config.disc.n_space = to_int(nodes.value, nodes.line, "nodes");
  const RawEntry& horizon = entries.require("horizon");
  config.disc.horizon = to_double(horizon.value, horizon.line, "horizon");
  const RawEntry& steps = entries.require("steps");
  config.disc.n_time = to_int(steps.value, steps.line, "steps");

  if (const RawEntry* stride = entries.take("output_stride")) {
    config.output_stride = to_int(stride->value, stride->line, "output_stride");
    if (config.output_stride < 1) {
      fail_at(Errc::validation_error, stride->line, "output_stride must be at least 1");
    }
  }
  if (const RawEntry* control = entries.take("control")) {
    if (control->value == "on") {
      config.control_enabled = true;
    } else if (control->value == "off") {
      config.control_enabled = false;
    } else {
      fail_at(Errc::validation_error, control->line, "control must be 'on' or 'off'");
    }
  }
  if (const RawEntry* rule = entries.take("switch_rule")) {
    if (rule->value == "cross-species") {
      config.rule = SwitchRule::cross_species;
    } else if (rule->value == "self-density") {
      config.rule = SwitchRule::self_density;
    } else {
      fail_at(Errc::validation_error, rule->line,
              "switch_rule must be 'cross-species' or 'self-density'");
    }
  }
  if (const RawEntry* dir = entries.take("output.dir")) {
    config.output.dir = dir->value;
  }
  if (const RawEntry* formats = entries.take("output.formats")) {
    config.output.csv = false;
    config.output.plot_script = false;
    for (const std::string& token : split_on(formats->value, ',')) {
      if (token == "csv") {
        config.output.csv = true;
      } else if (token == "plot-script") {
        config.output.plot_script = true;
      } else {
        fail_at(Errc::validation_error, formats->line, "unknown output format '" + token + "'");
      }
    }
    if (!config.output.csv && !config.output.plot_script) {
      fail_at(Errc::validation_error, formats->line, "output.formats lists no formats");
    }
  }

  config.model.n_species = n_species;
  const auto n = static_cast<std::size_t>(n_species);
  config.model.a.resize(n);
  config.model.tau.resize(n);
  config.model.diffusion.resize(n);
  config.model.b.resize(n * n);
  config.initial.resize(n);
  for (int j = 0; j < n_species; ++j) {
    const std::string prefix = "species." + std::to_string(j + 1) + ".";
    const RawEntry& a = entries.require(prefix + "a");
    config.model.a[j] = to_double(a.value, a.line, prefix + "a");
    const RawEntry& tau = entries.require(prefix + "tau");
    config.model.tau[j] = to_double(tau.value, tau.line, prefix + "tau");
    const RawEntry& diffusion = entries.require(prefix + "diffusion");
    config.model.diffusion[j] = to_double(diffusion.value, diffusion.line, prefix + "diffusion");
    for (int k = 0; k < n_species; ++k) {
      const std::string key = prefix + "b." + std::to_string(k + 1);
      const RawEntry& b = entries.require(key);
      config.model.b[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(k)] =
          to_double(b.value, b.line, key);
    }
    const std::string init_key = prefix + "initial";
    config.initial[j] = parse_initial(entries.require(init_key), init_key, config.disc.n_space);
  }

  entries.reject_unused();

  config.model = validate_model(std::move(config.model));
  config.disc = validate_grid(config.disc);
  return config;
}

std::string render_config(const ScenarioConfig& config) {
  std::string out;
  const auto add = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };

  add("n_species", std::to_string(config.model.n_species));
  add("length", fmt_full(config.disc.length));
  add("nodes", std::to_string(config.disc.n_space));
  add("horizon", fmt_full(config.disc.horizon));
  add("steps", std::to_string(config.disc.n_time));
  add("output_stride", std::to_string(config.output_stride));
  add("control", config.control_enabled ? "on" : "off");
  add("switch_rule", config.rule == SwitchRule::cross_species ? "cross-species" : "self-density");
  add("output.dir", config.output.dir);
  std::string formats;
  if (config.output.csv) formats = "csv";
  if (config.output.plot_script) formats += formats.empty() ? "plot-script" : ",plot-script";
  add("output.formats", formats);

  for (int j = 0; j < config.model.n_species; ++j) {
    const std::string prefix = "species." + std::to_string(j + 1) + ".";
    add(prefix + "a", fmt_full(config.model.a[j]));
    add(prefix + "tau", fmt_full(config.model.tau[j]));
    add(prefix + "diffusion", fmt_full(config.model.diffusion[j]));
    for (int k = 0; k < config.model.n_species; ++k) {
      add(prefix + "b." + std::to_string(k + 1), fmt_full(config.model.interaction(j, k)));
    }
    const InitialCondition& init = config.initial[j];
    std::string value;
    switch (init.kind) {
      case InitialCondition::Kind::constant:
        value = "const " + fmt_full(init.value);
        break;
      case InitialCondition::Kind::linear:
        value = "linear " + fmt_full(init.value);
        break;
      case InitialCondition::Kind::nodes:
        value = "nodes";
        for (const double v : init.node_values) {
          value += ' ';
          value += fmt_full(v);
        }
        break;
    }
    add(prefix + "initial", value);
  }
  return out;
}

StateField build_initial_field(const ScenarioConfig& config) {
  StateField field;
  field.n_species = config.model.n_species;
  field.n_space = config.disc.n_space;
  field.time = 0.0;
  field.values.resize(static_cast<std::size_t>(field.n_species) * static_cast<std::size_t>(field.n_space));
  const double dx = config.disc.dx();
  for (int j = 0; j < field.n_species; ++j) {
    const InitialCondition& init = config.initial[j];
    for (int s = 0; s < field.n_space; ++s) {
      switch (init.kind) {
        case InitialCondition::Kind::constant:
          field.at(j, s) = init.value;
          break;
        case InitialCondition::Kind::linear:
          field.at(j, s) = init.value * (static_cast<double>(s) * dx);
          break;
        case InitialCondition::Kind::nodes:
          field.at(j, s) = init.node_values[s];
          break;
      }
    }
  }
  return field;
}

std::vector<double> build_initial_state(const ScenarioConfig& config) {
  std::vector<double> w0(static_cast<std::size_t>(config.model.n_species));
  for (int j = 0; j < config.model.n_species; ++j) {
    if (config.initial[j].kind != InitialCondition::Kind::constant) {
      throw Error(Errc::validation_error,
                  "species " + std::to_string(j + 1) +
                      ": a temporal run needs a 'const' initial condition");
    }
    w0[j] = config.initial[j].value;
  }
  return w0;
}

namespace {

struct Preset {
  const char* name;
  const char* description;
  const char* text;
};

constexpr const char* kEichhorniaConst140 = R"(# Single water hyacinth stand in a 10 m channel, harvesting on.
# Uniform start at 140 g/m^2 dry mass.
n_species = 1
length = 10
nodes = 100
horizon = 30
steps = 5000
output_stride = 10
control = on
switch_rule = cross-species
output.dir = out/eichhornia-const140
output.formats = csv,plot-script

species.1.a = 0.103
species.1.tau = 1
species.1.diffusion = 1.33
species.1.b.1 = 0.000147
species.1.initial = const 140
)";

constexpr const char* kEichhorniaLinear80x = R"(# Single water hyacinth stand in a 10 m channel, harvesting on.
# Ramp start w(x,0) = 80x, from bare to 800 g/m^2 across the channel.
n_species = 1
length = 10
nodes = 100
horizon = 30
steps = 5000
output_stride = 10
control = on
switch_rule = cross-species
output.dir = out/eichhornia-linear80x
output.formats = csv,plot-script

species.1.a = 0.103
species.1.tau = 1
species.1.diffusion = 1.33
species.1.b.1 = 0.000147
species.1.initial = linear 80
)";

constexpr const char* kTwoPlantLow = R"(# Water hyacinth (species 1) competing with water lettuce (species 2),
# harvesting on. Start below the harvested equilibria: (280, 80) g/m^2.
n_species = 2
length = 10
nodes = 100
horizon = 30
steps = 5000
output_stride = 10
control = on
switch_rule = cross-species
output.dir = out/two-plant-low-280-80
output.formats = csv,plot-script

species.1.a = 0.061
species.1.tau = 1
species.1.diffusion = 1.33
species.1.b.1 = 0.0000614
species.1.b.2 = 0.00001
species.1.initial = const 280

species.2.a = 0.087
species.2.tau = 1
species.2.diffusion = 1.3
species.2.b.1 = 0.0001
species.2.b.2 = 0.0001992
species.2.initial = const 80
)";

constexpr const char* kTwoPlantHigh = R"(# Water hyacinth (species 1) competing with water lettuce (species 2),
# harvesting on. Start above the harvested equilibria: (700, 350) g/m^2.
n_species = 2
length = 10
nodes = 100
horizon = 30
steps = 5000
output_stride = 10
control = on
switch_rule = cross-species
output.dir = out/two-plant-high-700-350
output.formats = csv,plot-script

species.1.a = 0.061
species.1.tau = 1
species.1.diffusion = 1.33
species.1.b.1 = 0.0000614
species.1.b.2 = 0.00001
species.1.initial = const 700

species.2.a = 0.087
species.2.tau = 1
species.2.diffusion = 1.3
species.2.b.1 = 0.0001
species.2.b.2 = 0.0001992
species.2.initial = const 350
)";

constexpr const char* kEichhorniaUncontrolled = R"(# Single water hyacinth stand left unharvested for 120 days; the stand
# grows logistically to its carrying capacity.
n_species = 1
length = 10
nodes = 100
horizon = 120
steps = 20000
output_stride = 10
control = off
switch_rule = cross-species
output.dir = out/eichhornia-uncontrolled
output.formats = csv,plot-script

species.1.a = 0.103
species.1.tau = 1
species.1.diffusion = 1.33
species.1.b.1 = 0.000147
species.1.initial = const 140
)";

constexpr const char* kTwoPlantUncontrolled = R"(# Water hyacinth and water lettuce left unharvested for 120 days; the
# hyacinth crowds the lettuce out.
n_species = 2
length = 10
nodes = 100
horizon = 120
steps = 20000
output_stride = 10
control = off
switch_rule = cross-species
output.dir = out/two-plant-uncontrolled
output.formats = csv,plot-script

species.1.a = 0.061
species.1.tau = 1
species.1.diffusion = 1.33
species.1.b.1 = 0.0000614
species.1.b.2 = 0.00001
species.1.initial = const 280

species.2.a = 0.087
species.2.tau = 1
species.2.diffusion = 1.3
species.2.b.1 = 0.0001
species.2.b.2 = 0.0001992
species.2.initial = const 80
)";

const Preset kPresets[] = {
    {"eichhornia-const140",
     "single water hyacinth stand, harvesting on, uniform start 140 g/m^2",
     kEichhorniaConst140},
    {"eichhornia-linear80x",
     "single water hyacinth stand, harvesting on, ramp start w(x,0) = 80x",
     kEichhorniaLinear80x},
    {"two-plant-low-280-80",
     "water hyacinth and water lettuce, harvesting on, start (280, 80) g/m^2",
     kTwoPlantLow},
    {"two-plant-high-700-350",
     "water hyacinth and water lettuce, harvesting on, start (700, 350) g/m^2",
     kTwoPlantHigh},
    {"eichhornia-uncontrolled",
     "single stand unharvested for 120 days, grows to carrying capacity",
     kEichhorniaUncontrolled},
    {"two-plant-uncontrolled",
     "both species unharvested for 120 days, the weaker competitor dies out",
     kTwoPlantUncontrolled},
};

}  // namespace

const std::vector<PresetInfo>& list_presets() {
  static const std::vector<PresetInfo> infos = [] {
    std::vector<PresetInfo> out;
    for (const Preset& preset : kPresets) {
      out.push_back({preset.name, preset.description});
    }
    return out;
  }();
  return infos;
}

bool is_preset(std::string_view name) {
  for (const Preset& preset : kPresets) {
    if (name == preset.name) return true;
  }
  return false;
}

std::string preset_config_text(std::string_view name) {
  for (const Preset& preset : kPresets) {
    if (name == preset.name) return preset.text;
  }
  throw Error(Errc::validation_error, "unknown preset '" + std::string(name) + "'");
}

}  // namespace pondctl
