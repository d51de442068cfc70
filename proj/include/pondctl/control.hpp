#pragma once

#include <span>
#include <vector>

#include "pondctl/model.hpp"

namespace pondctl {

/** Management quantities derived from a model spec.
 *
 * The level vector xi solves (b_jk + b_kj) xi = a. Harvesting switches on
 * for species k wherever its density exceeds xi_k, and holding the system
 * at the harvested equilibrium w* = P/tau removes u* = w* - xi of dry
 * mass per day and per species.
 */
struct ControlLevels {
  std::vector<double> xi;      // management levels, g/m^2
  std::vector<double> p;       // source constants of the harvested dynamics, g/(m^2 day)
  std::vector<double> w_star;  // harvested equilibria P/tau, g/m^2
  std::vector<double> u_star;  // steady removal rates w* - xi, g/(m^2 day)
};

/// Counts how often a computed control had to be clamped into [0, w].
/// Clamping only triggers outside the intended parameter regime (some
/// xi_k < 0, or a harvested species below its level).
struct ClampDiagnostics {
  long clamped = 0;
};

/// Solves the symmetrized interaction system for the management levels.
std::vector<double> compute_xi(const ModelSpec& spec);

/// A_j(w) = -a_j + sum_k (b_jk + b_kj) w_k. Species j is harvested where
/// A_j > 0; A_j = 0 belongs to the unharvested branch.
std::vector<double> switch_indicator(const ModelSpec& spec, std::span<const double> w);

/// Pointwise harvest rate: u_k = w_k - xi_k where A_k(w) > 0, else 0,
/// clamped into [0, w_k].
std::vector<double> control(const ModelSpec& spec, const ControlLevels& levels,
                            std::span<const double> w, ClampDiagnostics* diag = nullptr);

/// xi together with the derived P, w* and u*.
ControlLevels equilibrium_levels(const ModelSpec& spec);

/// J = -sum_j w_j(T) - sum_j tau_j * integral of u_j over [0, T], the
/// integral taken by the trapezoidal rule on the sample grid. states and
/// controls are row major [species][sample]. Throws
/// Error(empty_trajectory) when times is empty.
double evaluate_objective(const ModelSpec& spec, std::span<const double> times,
                          std::span<const double> states, std::span<const double> controls);

}  // namespace pondctl
