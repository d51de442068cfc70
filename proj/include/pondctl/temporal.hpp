#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pondctl/control.hpp"

namespace pondctl {

/// Sampled solution of the temporal system. states, controls and regime
/// are row major [species][sample]; regime is 1 where the species was in
/// the harvested branch when the sample was taken.
struct OdeTrajectory {
  std::vector<double> times;
  int n_species = 0;
  std::vector<double> states;
  std::vector<double> controls;
  std::vector<std::uint8_t> regime;
  long clamped_controls = 0;

  std::size_t samples() const { return times.size(); }
  double state(int j, std::size_t i) const {
    return states[static_cast<std::size_t>(j) * times.size() + i];
  }
  double control_at(int j, std::size_t i) const {
    return controls[static_cast<std::size_t>(j) * times.size() + i];
  }
  bool harvested(int j, std::size_t i) const {
    return regime[static_cast<std::size_t>(j) * times.size() + i] != 0;
  }
  StateVector state_at(std::size_t i) const;
};

/// dw_j/dt = a_j w_j - sum_k b_jk w_j w_k.
std::vector<double> rhs_uncontrolled(const ModelSpec& spec, std::span<const double> w);

/// Piecewise right-hand side with harvesting. A species with A_j(w) > 0
/// follows the linear branch a_j xi_j - sum_k b_jk xi_j xi_k - tau_j (w_j - xi_j);
/// the others grow freely. Cross terms of unharvested species use the raw
/// densities w_k whatever regime species k is in.
std::vector<double> rhs_controlled(const ModelSpec& spec, const ControlLevels& levels,
                                   std::span<const double> w);

/// Exact solution of the harvested branch, valid while every species
/// stays harvested: w_j(t) = P_j/tau_j + (w0_j - P_j/tau_j) exp(-tau_j t).
std::vector<double> controlled_regime_closed_form(const ModelSpec& spec,
                                                  const ControlLevels& levels,
                                                  std::span<const double> w0, double t);

/// Classical fourth-order Runge-Kutta on the piecewise system. The regime
/// is re-evaluated at every stage, so switches resolve at step
/// granularity; the right-hand side is continuous across the switch.
/// Records every step. Throws Error(non_finite_state) if the state leaves
/// [0, inf) or stops being finite.
OdeTrajectory integrate_temporal(const ModelSpec& spec, const ControlLevels& levels,
                                 std::span<const double> w0, double horizon, double dt,
                                 bool control_enabled = true);

double evaluate_objective(const ModelSpec& spec, const OdeTrajectory& trajectory);

}  // namespace pondctl
