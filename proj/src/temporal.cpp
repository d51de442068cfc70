#include "pondctl/temporal.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace pondctl {

StateVector OdeTrajectory::state_at(std::size_t i) const {
  StateVector state;
  state.time = times[i];
  state.values.resize(static_cast<std::size_t>(n_species));
  for (int j = 0; j < n_species; ++j) {
    state.values[j] = this->state(j, i);
  }
  return state;
}

std::vector<double> rhs_uncontrolled(const ModelSpec& spec, std::span<const double> w) {
  std::vector<double> dw(static_cast<std::size_t>(spec.n_species));
  for (int j = 0; j < spec.n_species; ++j) {
    double pressure = 0.0;
    for (int k = 0; k < spec.n_species; ++k) {
      pressure += spec.interaction(j, k) * w[k];
    }
    dw[j] = (spec.a[j] - pressure) * w[j];
  }
  return dw;
}

std::vector<double> rhs_controlled(const ModelSpec& spec, const ControlLevels& levels,
                                   std::span<const double> w) {
  const std::vector<double> indicator = switch_indicator(spec, w);
  std::vector<double> dw(static_cast<std::size_t>(spec.n_species));
  for (int j = 0; j < spec.n_species; ++j) {
    if (indicator[j] > 0.0) {
      dw[j] = levels.p[j] - spec.tau[j] * levels.xi[j] - spec.tau[j] * (w[j] - levels.xi[j]);
    } else {
      double pressure = 0.0;
      for (int k = 0; k < spec.n_species; ++k) {
        pressure += spec.interaction(j, k) * w[k];
      }
      dw[j] = (spec.a[j] - pressure) * w[j];
    }
  }
  return dw;
}

std::vector<double> controlled_regime_closed_form(const ModelSpec& spec,
                                                  const ControlLevels& levels,
                                                  std::span<const double> w0, double t) {
  std::vector<double> w(static_cast<std::size_t>(spec.n_species));
  for (int j = 0; j < spec.n_species; ++j) {
    const double rest = levels.p[j] / spec.tau[j];
    w[j] = rest + (w0[j] - rest) * std::exp(-spec.tau[j] * t);
  }
  return w;
}

namespace {

std::vector<double> piecewise_rhs(const ModelSpec& spec, const ControlLevels& levels,
                                  std::span<const double> w, bool control_enabled) {
  return control_enabled ? rhs_controlled(spec, levels, w) : rhs_uncontrolled(spec, w);
}

}  // namespace

OdeTrajectory integrate_temporal(const ModelSpec& spec, const ControlLevels& levels,
                                 std::span<const double> w0, double horizon, double dt,
                                 bool control_enabled) {
  if (w0.size() != static_cast<std::size_t>(spec.n_species)) {
    throw Error(Errc::dimension_mismatch, "initial state needs one entry per species");
  }
  if (!(horizon > 0.0) || !(dt > 0.0)) {
    throw Error(Errc::invalid_grid, "horizon and dt must be positive");
  }

  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  const std::size_t m = steps + 1;
  const auto n = static_cast<std::size_t>(spec.n_species);

  OdeTrajectory out;
  out.n_species = spec.n_species;
  out.times.resize(m);
  out.states.resize(n * m);
  out.controls.resize(n * m);
  out.regime.resize(n * m);

  ClampDiagnostics clamp;
  std::vector<double> w(w0.begin(), w0.end());

  const auto record = [&](std::size_t i, double t) {
    for (std::size_t j = 0; j < n; ++j) {
      const double value = w[j];
      if (!std::isfinite(value) || value < -1e-9) {
        throw Error(Errc::non_finite_state, "species " + std::to_string(j + 1) + " reached " +
                                                std::to_string(value) + " at t = " + std::to_string(t));
      }
      if (value < 0.0) w[j] = 0.0;
    }
    const std::vector<double> indicator = switch_indicator(spec, w);
    std::vector<double> u(n, 0.0);
    if (control_enabled) {
      u = control(spec, levels, w, &clamp);
    }
    out.times[i] = t;
    for (std::size_t j = 0; j < n; ++j) {
      out.states[j * m + i] = w[j];
      out.controls[j * m + i] = u[j];
      out.regime[j * m + i] = control_enabled && indicator[j] > 0.0 ? 1 : 0;
    }
  };

  record(0, 0.0);

  std::vector<double> stage(n);
  for (std::size_t step = 1; step <= steps; ++step) {
    const double h = dt;
    const std::vector<double> k1 = piecewise_rhs(spec, levels, w, control_enabled);
    for (std::size_t j = 0; j < n; ++j) stage[j] = w[j] + 0.5 * h * k1[j];
    const std::vector<double> k2 = piecewise_rhs(spec, levels, stage, control_enabled);
    for (std::size_t j = 0; j < n; ++j) stage[j] = w[j] + 0.5 * h * k2[j];
    const std::vector<double> k3 = piecewise_rhs(spec, levels, stage, control_enabled);
    for (std::size_t j = 0; j < n; ++j) stage[j] = w[j] + h * k3[j];
    const std::vector<double> k4 = piecewise_rhs(spec, levels, stage, control_enabled);
    for (std::size_t j = 0; j < n; ++j) {
      w[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    record(step, static_cast<double>(step) * dt);
  }

  out.clamped_controls = clamp.clamped;
  return out;
}

double evaluate_objective(const ModelSpec& spec, const OdeTrajectory& trajectory) {
  return evaluate_objective(spec, trajectory.times, trajectory.states, trajectory.controls);
}

}  // namespace pondctl
