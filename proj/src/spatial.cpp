#include "pondctl/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>

#include "pondctl/linalg.hpp"

namespace pondctl {

void DiffusionOperator::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != static_cast<std::size_t>(n) || out.size() != static_cast<std::size_t>(n)) {
    throw Error(Errc::dimension_mismatch, "operator expects length-" + std::to_string(n) + " fields");
  }
  if (n == 1) {
    out[0] = 0.0;
    return;
  }
  out[0] = (in[1] - in[0]) * inv_dx2;
  for (int s = 1; s < n - 1; ++s) {
    out[s] = (in[s - 1] - 2.0 * in[s] + in[s + 1]) * inv_dx2;
  }
  out[n - 1] = (in[n - 2] - in[n - 1]) * inv_dx2;
}

DiffusionOperator assemble_dxx(int n, double dx) {
  if (n < 2) {
    throw Error(Errc::invalid_grid, "second-difference operator needs at least 2 nodes");
  }
  if (!(dx > 0.0)) {
    throw Error(Errc::invalid_grid, "node spacing must be positive");
  }
  return DiffusionOperator{n, 1.0 / (dx * dx)};
}

std::vector<double> spatial_switch(const ModelSpec& spec, const StateField& field,
                                   SwitchRule rule) {
  if (field.n_species != spec.n_species) {
    throw Error(Errc::dimension_mismatch, "field species count does not match the model");
  }
  const int n = spec.n_species;
  const int nodes = field.n_space;
  std::vector<double> indicator(static_cast<std::size_t>(n) * static_cast<std::size_t>(nodes));
  for (int j = 0; j < n; ++j) {
    for (int s = 0; s < nodes; ++s) {
      double sum = -spec.a[j];
      for (int k = 0; k < n; ++k) {
        const double density = rule == SwitchRule::cross_species ? field.at(k, s) : field.at(j, s);
        sum += spec.symmetrized(j, k) * density;
      }
      indicator[static_cast<std::size_t>(j) * nodes + s] = sum;
    }
  }
  return indicator;
}

namespace detail {

void clamp_small_negatives(std::span<double> values, double threshold) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v)) {
      throw Error(Errc::non_finite_state, "field value is not finite");
    }
    if (v < 0.0) {
      if (v < -threshold) {
        char text[64];
        std::snprintf(text, sizeof text, "field value %g fell below -%g", v, threshold);
        throw Error(Errc::non_finite_state, text);
      }
      values[i] = 0.0;
    }
  }
}

}  // namespace detail

std::pair<StateField, StepDiagnostics> semi_implicit_step(const ModelSpec& spec,
                                                          const ControlLevels& levels,
                                                          const DiffusionOperator& op,
                                                          const StateField& w_prev, double dt,
                                                          const StepOptions& options) {
  const int n = spec.n_species;
  const int nodes = w_prev.n_space;
  if (w_prev.n_species != n) {
    throw Error(Errc::dimension_mismatch, "field species count does not match the model");
  }
  if (op.n != nodes) {
    throw Error(Errc::dimension_mismatch, "operator size does not match the field");
  }
  if (!(dt > 0.0)) {
    throw Error(Errc::invalid_grid, "dt must be positive");
  }

  const auto total = static_cast<std::size_t>(n) * static_cast<std::size_t>(nodes);
  const double inv_dt = 1.0 / dt;

  StepDiagnostics diag;
  diag.controlled_node_count.assign(static_cast<std::size_t>(n), 0);
  diag.controlled_mask.assign(total, 0);

  // Inner fixed-point sweep: linearize the reaction about the iterate,
  // solve one tridiagonal system per species, repeat until the update is
  // below tolerance. The accepted field then satisfies the backward Euler
  // equations of the piecewise dynamics.
  StateField iterate = w_prev;  // w^p; starts at the previous field
  StateField next = w_prev;     // receives each sweep's solution
  next.time = w_prev.time + dt;

  std::vector<double> lower(static_cast<std::size_t>(nodes));
  std::vector<double> diagonal(static_cast<std::size_t>(nodes));
  std::vector<double> upper(static_cast<std::size_t>(nodes));
  std::vector<double> rhs(static_cast<std::size_t>(nodes));

  double residual = 1.0;
  int sweeps = 0;
  while (residual > options.inner_tolerance && sweeps + 1 < options.max_inner) {
    const std::vector<double> indicator = options.control_enabled
                                              ? spatial_switch(spec, iterate, options.rule)
                                              : std::vector<double>(total, -1.0);
    std::fill(diag.controlled_node_count.begin(), diag.controlled_node_count.end(), 0);
    for (std::size_t i = 0; i < total; ++i) {
      diag.controlled_mask[i] = indicator[i] > 0.0 ? 1 : 0;
    }
    for (int j = 0; j < n; ++j) {
      for (int s = 0; s < nodes; ++s) {
        diag.controlled_node_count[j] += diag.controlled_mask[static_cast<std::size_t>(j) * nodes + s];
      }
    }

    // The per-species systems below only couple through the iterate, so
    // they are independent within one sweep.
    for (int j = 0; j < n; ++j) {
      const double d = spec.diffusion[j];
      for (int s = 0; s < nodes; ++s) {
        lower[s] = s > 0 ? -d * op.offdiag() : 0.0;
        upper[s] = s < nodes - 1 ? -d * op.offdiag() : 0.0;
        double diag_entry = inv_dt - d * op.diag(s);
        double rhs_entry = w_prev.at(j, s) * inv_dt;
        if (diag.controlled_mask[static_cast<std::size_t>(j) * nodes + s] != 0) {
          // Harvested node: the reaction is the constant P_j - tau_j w_j^p
          // with the removal rate frozen at the iterate.
          double raw_u = iterate.at(j, s) - levels.xi[j];
          const double u = std::clamp(raw_u, 0.0, iterate.at(j, s));
          if (u != raw_u) {
            ++diag.clamped_controls;
          }
          rhs_entry += levels.p[j] - spec.tau[j] * levels.xi[j] - spec.tau[j] * u;
        } else {
          // Free node: a_j w - 2 sum_k b_jk w_k^p w + sum_k b_jk w_j^p w_k^p,
          // the w-linear part folded into the matrix diagonal.
          double pressure = 0.0;
          for (int k = 0; k < n; ++k) {
            pressure += spec.interaction(j, k) * iterate.at(k, s);
          }
          diag_entry += -spec.a[j] + 2.0 * pressure;
          rhs_entry += pressure * iterate.at(j, s);
        }
        diagonal[s] = diag_entry;
        rhs[s] = rhs_entry;
      }
      std::vector<double> solution = solve_tridiagonal(lower, diagonal, upper, rhs);
      for (int s = 0; s < nodes; ++s) {
        next.at(j, s) = solution[s];
      }
    }

    residual = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      residual = std::max(residual, std::abs(next.values[i] - iterate.values[i]));
    }
    iterate.values = next.values;
    ++sweeps;
  }

  diag.inner_iterations = sweeps;
  diag.final_residual = residual;
  if (residual > options.inner_tolerance) {
    throw Error(Errc::inner_iteration_diverged,
                "residual " + std::to_string(residual) + " after " + std::to_string(sweeps) +
                    " sweeps (tolerance " + std::to_string(options.inner_tolerance) + ")");
  }

  detail::clamp_small_negatives(next.values, 1e-9);
  return {std::move(next), std::move(diag)};
}

namespace {

StateField control_field(const ModelSpec& spec, const ControlLevels& levels,
                         const StateField& field, bool control_enabled, SwitchRule rule) {
  StateField u;
  u.n_species = field.n_species;
  u.n_space = field.n_space;
  u.time = field.time;
  u.values.assign(field.values.size(), 0.0);
  if (!control_enabled) {
    return u;
  }
  const std::vector<double> indicator = spatial_switch(spec, field, rule);
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    if (indicator[i] > 0.0) {
      const int j = static_cast<int>(i / static_cast<std::size_t>(field.n_space));
      u.values[i] = std::clamp(field.values[i] - levels.xi[j], 0.0, field.values[i]);
    }
  }
  return u;
}

}  // namespace

SimulationRun run_pde(const ModelSpec& spec, const ControlLevels& levels,
                      const Discretization& disc, const StateField& initial,
                      const PdeOptions& options) {
  validate_grid(disc);
  if (initial.n_species != spec.n_species || initial.n_space != disc.n_space) {
    throw Error(Errc::dimension_mismatch, "initial field does not match the model and grid");
  }
  for (const double v : initial.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(Errc::validation_error, "initial field must be finite and non-negative");
    }
  }
  const int stride = std::max(1, options.output_stride);

  const DiffusionOperator op = assemble_dxx(disc.n_space, disc.dx());
  StepOptions step_options;
  step_options.control_enabled = options.control_enabled;
  step_options.rule = options.rule;

  SimulationRun run;
  run.disc = disc;
  run.diagnostics.reserve(static_cast<std::size_t>(disc.n_time));
  run.step_times.reserve(static_cast<std::size_t>(disc.n_time));

  StateField field = initial;
  field.time = 0.0;

  const auto snapshot = [&](const StateField& f) {
    run.snapshot_times.push_back(f.time);
    run.fields.push_back(f);
    run.controls.push_back(control_field(spec, levels, f, options.control_enabled, options.rule));
  };
  snapshot(field);

  const double dt = disc.dt();
  for (int step = 1; step <= disc.n_time; ++step) {
    try {
      auto [next, diag] = semi_implicit_step(spec, levels, op, field, dt, step_options);
      field = std::move(next);
      field.time = static_cast<double>(step) * dt;
      run.step_times.push_back(field.time);
      run.diagnostics.push_back(std::move(diag));
    } catch (const Error& err) {
      throw Error(err.code(), "time step " + std::to_string(step) + ": " + err.detail());
    }
    if (step % stride == 0 || step == disc.n_time) {
      snapshot(field);
    }
  }
  return run;
}

}  // namespace pondctl
