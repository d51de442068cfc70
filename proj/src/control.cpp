#include "pondctl/control.hpp"

#include <algorithm>
#include <cstddef>
#include <string>

#include "pondctl/linalg.hpp"

namespace pondctl {

namespace {

void require_state_length(std::span<const double> w, int n_species) {
  if (w.size() != static_cast<std::size_t>(n_species)) {
    throw Error(Errc::dimension_mismatch, "state has " + std::to_string(w.size()) +
                                              " entries, expected " + std::to_string(n_species));
  }
}

}  // namespace

std::vector<double> compute_xi(const ModelSpec& spec) {
  const int n = spec.n_species;
  std::vector<double> s(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      s[static_cast<std::size_t>(j) * n + k] = spec.symmetrized(j, k);
    }
  }
  const double cond = condition_inf(s, n);
  if (!(cond <= 1e12)) {
    throw Error(Errc::singular_symmetrized_matrix,
                "condition estimate " + std::to_string(cond) + " exceeds 1e12");
  }
  return solve_dense(s, spec.a, n);
}

std::vector<double> switch_indicator(const ModelSpec& spec, std::span<const double> w) {
  require_state_length(w, spec.n_species);
  std::vector<double> indicator(static_cast<std::size_t>(spec.n_species));
  for (int j = 0; j < spec.n_species; ++j) {
    double sum = -spec.a[j];
    for (int k = 0; k < spec.n_species; ++k) {
      sum += spec.symmetrized(j, k) * w[k];
    }
    indicator[j] = sum;
  }
  return indicator;
}

std::vector<double> control(const ModelSpec& spec, const ControlLevels& levels,
                            std::span<const double> w, ClampDiagnostics* diag) {
  require_state_length(w, spec.n_species);
  const std::vector<double> indicator = switch_indicator(spec, w);
  std::vector<double> u(static_cast<std::size_t>(spec.n_species), 0.0);
  for (int j = 0; j < spec.n_species; ++j) {
    if (indicator[j] > 0.0) {
      const double raw = w[j] - levels.xi[j];
      const double clamped = std::clamp(raw, 0.0, w[j]);
      if (clamped != raw && diag != nullptr) {
        ++diag->clamped;
      }
      u[j] = clamped;
    }
  }
  return u;
}

ControlLevels equilibrium_levels(const ModelSpec& spec) {
  ControlLevels levels;
  levels.xi = compute_xi(spec);
  const auto n = static_cast<std::size_t>(spec.n_species);
  levels.p.resize(n);
  levels.w_star.resize(n);
  levels.u_star.resize(n);
  for (int j = 0; j < spec.n_species; ++j) {
    double p = spec.a[j] * levels.xi[j] + spec.tau[j] * levels.xi[j];
    for (int k = 0; k < spec.n_species; ++k) {
      p -= spec.interaction(j, k) * levels.xi[j] * levels.xi[k];
    }
    levels.p[j] = p;
    levels.w_star[j] = p / spec.tau[j];
    levels.u_star[j] = levels.w_star[j] - levels.xi[j];
  }
  return levels;
}

double evaluate_objective(const ModelSpec& spec, std::span<const double> times,
                          std::span<const double> states, std::span<const double> controls) {
  const std::size_t m = times.size();
  if (m == 0) {
    throw Error(Errc::empty_trajectory, "objective needs at least one sample");
  }
  const auto n = static_cast<std::size_t>(spec.n_species);
  if (states.size() != n * m || controls.size() != n * m) {
    throw Error(Errc::dimension_mismatch, "states and controls must be n_species * samples long");
  }

  double terminal = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    terminal += states[j * m + (m - 1)];
  }

  double effort = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      integral += 0.5 * (controls[j * m + i] + controls[j * m + i + 1]) * (times[i + 1] - times[i]);
    }
    effort += spec.tau[j] * integral;
  }
  return -terminal - effort;
}

}  // namespace pondctl
