#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pondctl/control.hpp"

namespace pondctl {

/// Which densities enter the nodewise switch indicator sum. cross_species
/// is the defining rule, sum_k (b_jk + b_kj) w_k(x); self_density replaces
/// every w_k(x) in the sum by the species' own density w_j(x). The two
/// coincide for a single species.
enum class SwitchRule {
  cross_species,
  self_density,
};

/** Second-difference operator with zero-flux ends on a uniform grid.
 *
 * Interior rows are (1, -2, 1)/dx^2; the boundary rows are (-1, 1)/dx^2
 * and (1, -1)/dx^2, the one-sided forms that encode a zero-gradient wall.
 * Every row and every column sums to zero, so a pure-diffusion implicit
 * step conserves the sum of node values exactly.
 */
struct DiffusionOperator {
  int n = 0;
  double inv_dx2 = 0.0;

  double diag(int s) const { return (s == 0 || s == n - 1) ? -inv_dx2 : -2.0 * inv_dx2; }
  double offdiag() const { return inv_dx2; }

  /// out = D_xx * in. Both spans must have length n.
  void apply(std::span<const double> in, std::span<double> out) const;
};

/// Requires n >= 2 and dx > 0, else throws Error(invalid_grid).
DiffusionOperator assemble_dxx(int n, double dx);

/// Convergence record of one semi-implicit time step.
struct StepDiagnostics {
  int inner_iterations = 0;                   // linear-solve sweeps performed
  double final_residual = 0.0;                // max_j |w_hat_j - w_j^p|_inf at exit
  std::vector<int> controlled_node_count;     // per species, from the flagging iterate
  std::vector<std::uint8_t> controlled_mask;  // row major [species][node], flagging iterate
  long clamped_controls = 0;
};

struct StepOptions {
  bool control_enabled = true;
  SwitchRule rule = SwitchRule::cross_species;
  double inner_tolerance = 1e-4;  // infinity-norm fixed-point tolerance
  int max_inner = 100;            // sweep budget before the step is declared diverged
};

/// Nodewise switch indicator, row major [species][node].
std::vector<double> spatial_switch(const ModelSpec& spec, const StateField& field,
                                   SwitchRule rule = SwitchRule::cross_species);

/** One semi-implicit step of the reaction-diffusion system.
 *
 * Diffusion is treated implicitly. The reaction is linearized about the
 * current inner iterate w^p: unharvested nodes carry
 * a_j w - 2 sum_k b_jk w_k^p w + sum_k b_jk w_j^p w_k^p, harvested nodes
 * carry the constant a_j xi_j - sum_k b_jk xi_j xi_k - tau_j u with
 * u = w_j^p - xi_j. Each sweep solves one tridiagonal system per species
 * (the species systems are independent of each other within a sweep) and
 * iterates until the update falls below inner_tolerance, so the accepted
 * step solves the backward Euler equations. Node values in [-1e-9, 0)
 * are rounded to zero after convergence; anything lower throws
 * Error(non_finite_state). Throws Error(inner_iteration_diverged) when
 * the sweep budget is exhausted.
 */
std::pair<StateField, StepDiagnostics> semi_implicit_step(const ModelSpec& spec,
                                                          const ControlLevels& levels,
                                                          const DiffusionOperator& op,
                                                          const StateField& w_prev, double dt,
                                                          const StepOptions& options = {});

struct PdeOptions {
  bool control_enabled = true;
  SwitchRule rule = SwitchRule::cross_species;
  int output_stride = 10;  // keep every k-th field; the initial field is always kept
};

/// Recorded spatiotemporal run: density and applied-control snapshots at
/// the output stride, plus one StepDiagnostics entry per time step.
struct SimulationRun {
  Discretization disc;
  std::vector<double> snapshot_times;
  std::vector<StateField> fields;
  std::vector<StateField> controls;
  std::vector<double> step_times;
  std::vector<StepDiagnostics> diagnostics;
};

/// Marches the initial field over the full grid. The initial field must
/// match the grid shape and be non-negative. Step failures are rethrown
/// with the failing step index prepended.
SimulationRun run_pde(const ModelSpec& spec, const ControlLevels& levels,
                      const Discretization& disc, const StateField& initial,
                      const PdeOptions& options = {});

namespace detail {

/// Rounds values in [-threshold, 0) up to zero. A value below -threshold
/// means the scheme produced a genuinely negative density; that throws
/// Error(non_finite_state), as does any non-finite value.
void clamp_small_negatives(std::span<double> values, double threshold);

}  // namespace detail

}  // namespace pondctl
