#include "pondctl/runner.hpp"

#include <cstdio>
#include <fstream>
#include <string>
#include <system_error>

#include "pondctl/spatial.hpp"

namespace pondctl {

namespace {

std::string fmt6(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

std::string fmt_full(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  }
  out << content;
  out.flush();
  if (!out) {
    throw Error(Errc::io_error, "short write to " + path.string());
  }
}

std::string field_csv(const SimulationRun& run) {
  const int n = run.fields.empty() ? 0 : run.fields.front().n_species;
  std::string out = "t,x";
  for (int j = 1; j <= n; ++j) out += ",w_" + std::to_string(j);
  for (int j = 1; j <= n; ++j) out += ",u_" + std::to_string(j);
  out += '\n';

  const double dx = run.disc.dx();
  for (std::size_t i = 0; i < run.fields.size(); ++i) {
    const StateField& field = run.fields[i];
    const StateField& control = run.controls[i];
    for (int s = 0; s < field.n_space; ++s) {
      out += fmt6(run.snapshot_times[i]);
      out += ',';
      out += fmt6(static_cast<double>(s) * dx);
      for (int j = 0; j < n; ++j) {
        out += ',';
        out += fmt6(field.at(j, s));
      }
      for (int j = 0; j < n; ++j) {
        out += ',';
        out += fmt6(control.at(j, s));
      }
      out += '\n';
    }
  }
  return out;
}

std::string diagnostics_csv(const SimulationRun& run) {
  const std::size_t n = run.diagnostics.empty() ? 0 : run.diagnostics.front().controlled_node_count.size();
  std::string out = "t,inner_iterations,residual";
  for (std::size_t j = 1; j <= n; ++j) out += ",controlled_nodes_" + std::to_string(j);
  out += '\n';
  for (std::size_t i = 0; i < run.diagnostics.size(); ++i) {
    const StepDiagnostics& diag = run.diagnostics[i];
    out += fmt6(run.step_times[i]);
    out += ',';
    out += std::to_string(diag.inner_iterations);
    out += ',';
    out += fmt6(diag.final_residual);
    for (const int count : diag.controlled_node_count) {
      out += ',';
      out += std::to_string(count);
    }
    out += '\n';
  }
  return out;
}

std::string trajectory_csv(const OdeTrajectory& trajectory, int stride) {
  const int n = trajectory.n_species;
  std::string out = "t";
  for (int j = 1; j <= n; ++j) out += ",w_" + std::to_string(j);
  for (int j = 1; j <= n; ++j) out += ",u_" + std::to_string(j);
  out += '\n';
  const std::size_t m = trajectory.samples();
  for (std::size_t i = 0; i < m; ++i) {
    if (i % static_cast<std::size_t>(stride) != 0 && i + 1 != m) continue;
    out += fmt6(trajectory.times[i]);
    for (int j = 0; j < n; ++j) {
      out += ',';
      out += fmt6(trajectory.state(j, i));
    }
    for (int j = 0; j < n; ++j) {
      out += ',';
      out += fmt6(trajectory.control_at(j, i));
    }
    out += '\n';
  }
  return out;
}

std::string field_plot_script(const SimulationRun& run) {
  const int n = run.fields.empty() ? 0 : run.fields.front().n_species;
  std::string out;
  out += "# Surface plots of the recorded density and harvest fields.\n";
  out += "# Run from the output directory: gnuplot plot.gp\n";
  out += "set datafile separator ','\n";
  out += "set xlabel 'x (m)'\n";
  out += "set ylabel 't (days)'\n";
  out += "set hidden3d\n";
  out += "set dgrid3d " + std::to_string(run.snapshot_times.size()) + "," +
         std::to_string(run.disc.n_space) + "\n";
  out += "set terminal pngcairo size 960,720\n";
  for (int j = 1; j <= n; ++j) {
    out += "set zlabel 'w_" + std::to_string(j) + " (g/m^2)'\n";
    out += "set output 'w_" + std::to_string(j) + ".png'\n";
    out += "splot 'field.csv' every ::1 using 2:1:" + std::to_string(2 + j) +
           " with lines notitle\n";
  }
  for (int j = 1; j <= n; ++j) {
    out += "set zlabel 'u_" + std::to_string(j) + " (g/(m^2 day))'\n";
    out += "set output 'u_" + std::to_string(j) + ".png'\n";
    out += "splot 'field.csv' every ::1 using 2:1:" + std::to_string(2 + n + j) +
           " with lines notitle\n";
  }
  return out;
}

std::string trajectory_plot_script(int n_species) {
  std::string out;
  out += "# Density and harvest-rate curves of the recorded run.\n";
  out += "# Run from the output directory: gnuplot plot.gp\n";
  out += "set datafile separator ','\n";
  out += "set xlabel 't (days)'\n";
  out += "set ylabel 'density (g/m^2)'\n";
  out += "set key top right\n";
  out += "set terminal pngcairo size 960,600\n";
  out += "set output 'trajectory.png'\n";
  out += "plot ";
  for (int j = 1; j <= n_species; ++j) {
    if (j > 1) out += ", ";
    out += "'trajectory.csv' every ::1 using 1:" + std::to_string(1 + j) +
           " with lines title 'w_" + std::to_string(j) + "'";
  }
  for (int j = 1; j <= n_species; ++j) {
    out += ", 'trajectory.csv' every ::1 using 1:" + std::to_string(1 + n_species + j) +
           " with lines dashtype 2 title 'u_" + std::to_string(j) + "'";
  }
  out += "\n";
  return out;
}

}  // namespace

std::string format_levels_text(const ModelSpec& spec, const ControlLevels& levels) {
  std::string out = "species            xi             P        w_star        u_star\n";
  char buffer[160];
  for (int j = 0; j < spec.n_species; ++j) {
    std::snprintf(buffer, sizeof buffer, "%7d  %12.4f  %12.4f  %12.4f  %12.4f\n", j + 1,
                  levels.xi[j], levels.p[j], levels.w_star[j], levels.u_star[j]);
    out += buffer;
  }
  return out;
}

std::string format_levels_csv(const ModelSpec& spec, const ControlLevels& levels) {
  std::string out = "species,xi,p,w_star,u_star\n";
  for (int j = 0; j < spec.n_species; ++j) {
    out += std::to_string(j + 1);
    out += ',';
    out += fmt_full(levels.xi[j]);
    out += ',';
    out += fmt_full(levels.p[j]);
    out += ',';
    out += fmt_full(levels.w_star[j]);
    out += ',';
    out += fmt_full(levels.u_star[j]);
    out += '\n';
  }
  return out;
}

RunResult run_scenario(const ScenarioConfig& config, const RunOverrides& overrides) {
  ScenarioConfig cfg = config;
  if (overrides.disable_control) cfg.control_enabled = false;
  if (overrides.out_dir) cfg.output.dir = *overrides.out_dir;

  const ModelSpec spec = validate_model(cfg.model);
  const Discretization disc = validate_grid(cfg.disc);
  const ControlLevels levels = equilibrium_levels(spec);

  const std::filesystem::path dir(cfg.output.dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(Errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
  }

  RunResult result;
  result.out_dir = dir;

  std::vector<std::filesystem::path> written;
  const auto emit = [&](const char* name, const std::string& content) {
    const std::filesystem::path path = dir / name;
    write_text_file(path, content);
    written.push_back(path);
  };

  try {
    emit("levels.txt", format_levels_text(spec, levels));
    emit("levels.csv", format_levels_csv(spec, levels));
    if (overrides.ode_only) {
      const std::vector<double> w0 = build_initial_state(cfg);
      const OdeTrajectory trajectory =
          integrate_temporal(spec, levels, w0, disc.horizon, disc.dt(), cfg.control_enabled);
      if (cfg.output.csv) {
        emit("trajectory.csv", trajectory_csv(trajectory, cfg.output_stride));
      }
      if (cfg.output.plot_script) {
        emit("plot.gp", trajectory_plot_script(spec.n_species));
      }
    } else {
      const StateField initial = build_initial_field(cfg);
      PdeOptions options;
      options.control_enabled = cfg.control_enabled;
      options.rule = cfg.rule;
      options.output_stride = cfg.output_stride;
      const SimulationRun run = run_pde(spec, levels, disc, initial, options);
      if (cfg.output.csv) {
        emit("field.csv", field_csv(run));
        emit("diagnostics.csv", diagnostics_csv(run));
      }
      if (cfg.output.plot_script) {
        emit("plot.gp", field_plot_script(run));
      }
    }
  } catch (...) {
    for (const std::filesystem::path& path : written) {
      std::error_code ignore;
      std::filesystem::remove(path, ignore);
    }
    throw;
  }

  result.files = std::move(written);
  return result;
}

}  // namespace pondctl
