#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pondctl/runner.hpp"

namespace {

using pondctl::Errc;
using pondctl::Error;

struct ResolvedConfig {
  std::string label;  // preset name or file stem, used for batch output dirs
  pondctl::ScenarioConfig config;
};

ResolvedConfig resolve_config(const std::string& arg) {
  if (pondctl::is_preset(arg)) {
    return {arg, pondctl::parse_config(pondctl::preset_config_text(arg))};
  }
  std::ifstream in(arg, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_error, "cannot read config '" + arg + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return {std::filesystem::path(arg).stem().string(), pondctl::parse_config(text.str())};
  } catch (const Error& err) {
    throw Error(err.code(), arg + ": " + err.detail());
  }
}

int exit_code_for(const Error& err) { return pondctl::is_config_error(err.code()) ? 1 : 2; }

int run_simulate(const std::vector<std::string>& config_args, const std::optional<std::string>& out_dir,
                 bool no_control, bool ode_only, int jobs) {
  std::vector<ResolvedConfig> resolved;
  resolved.reserve(config_args.size());
  for (const std::string& arg : config_args) {
    resolved.push_back(resolve_config(arg));
  }

  if (resolved.size() > 1) {
    std::set<std::string> labels;
    for (const ResolvedConfig& item : resolved) {
      if (!labels.insert(item.label).second) {
        throw Error(Errc::validation_error,
                    "two scenarios share the output name '" + item.label + "'");
      }
    }
  }

  std::vector<pondctl::RunOverrides> overrides(resolved.size());
  for (std::size_t i = 0; i < resolved.size(); ++i) {
    overrides[i].disable_control = no_control;
    overrides[i].ode_only = ode_only;
    if (out_dir) {
      overrides[i].out_dir = resolved.size() == 1
                                 ? *out_dir
                                 : (std::filesystem::path(*out_dir) / resolved[i].label).string();
    }
  }

  std::atomic<std::size_t> cursor{0};
  std::mutex io_mutex;
  std::vector<int> codes(resolved.size(), 0);

  const auto worker = [&] {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= resolved.size()) break;
      try {
        const pondctl::RunResult result = pondctl::run_scenario(resolved[i].config, overrides[i]);
        const std::scoped_lock lock(io_mutex);
        std::cout << resolved[i].label << ": ok -> " << result.out_dir.string() << '\n';
      } catch (const Error& err) {
        codes[i] = exit_code_for(err);
        const std::scoped_lock lock(io_mutex);
        std::cerr << resolved[i].label << ": " << err.what() << '\n';
      } catch (const std::exception& err) {
        codes[i] = 2;
        const std::scoped_lock lock(io_mutex);
        std::cerr << resolved[i].label << ": " << err.what() << '\n';
      }
    }
  };

  const int thread_count = std::clamp<int>(jobs, 1, static_cast<int>(resolved.size()));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(thread_count) - 1);
  for (int t = 1; t < thread_count; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (std::thread& thread : pool) {
    thread.join();
  }

  return *std::max_element(codes.begin(), codes.end());
}

int run_levels(const std::string& config_arg) {
  const ResolvedConfig resolved = resolve_config(config_arg);
  const pondctl::ModelSpec spec = resolved.config.model;
  const pondctl::ControlLevels levels = pondctl::equilibrium_levels(spec);
  std::cout << pondctl::format_levels_text(spec, levels);
  return 0;
}

int run_presets(const std::string& dump_name) {
  if (!dump_name.empty()) {
    std::cout << pondctl::preset_config_text(dump_name);
    return 0;
  }
  std::size_t width = 0;
  for (const pondctl::PresetInfo& info : pondctl::list_presets()) {
    width = std::max(width, info.name.size());
  }
  for (const pondctl::PresetInfo& info : pondctl::list_presets()) {
    std::cout << info.name << std::string(width - info.name.size() + 2, ' ') << info.description
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold-harvest management simulator for interacting aquatic plant stands"};
  app.require_subcommand(1);

  std::vector<std::string> config_args;
  std::optional<std::string> out_dir;
  bool no_control = false;
  bool ode_only = false;
  int jobs = 1;

  CLI::App* simulate = app.add_subcommand("simulate", "Run scenarios and write CSV outputs");
  simulate->add_option("config", config_args, "Config file path or preset name")->required();
  simulate
      ->add_option("--out", out_dir,
                   "Output directory; with several scenarios each gets a subdirectory")
      ->expected(1);
  simulate->add_flag("--no-control", no_control, "Disable harvesting");
  simulate->add_flag("--ode-only", ode_only,
                     "Integrate the space-free system instead of the field");
  simulate->add_option("--jobs", jobs, "Run up to N scenarios concurrently")
      ->check(CLI::PositiveNumber);

  std::string levels_arg;
  CLI::App* levels = app.add_subcommand("levels", "Print the management levels of a scenario");
  levels->add_option("config", levels_arg, "Config file path or preset name")->required();

  std::string dump_name;
  CLI::App* presets = app.add_subcommand("presets", "List the bundled scenario presets");
  presets->add_option("--dump", dump_name, "Print the config text of one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) {
      return run_simulate(config_args, out_dir, no_control, ode_only, jobs);
    }
    if (levels->parsed()) {
      return run_levels(levels_arg);
    }
    return run_presets(dump_name);
  } catch (const Error& err) {
    std::cerr << "pondctl: " << err.what() << '\n';
    return exit_code_for(err);
  } catch (const std::exception& err) {
    std::cerr << "pondctl: " << err.what() << '\n';
    return 2;
  }
}
