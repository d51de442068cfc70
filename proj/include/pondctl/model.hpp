#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pondctl/errors.hpp"

namespace pondctl {

/** Parameters of a system of N interacting plant populations.
 *
 * Unharvested growth follows dw_j/dt = a_j w_j - sum_k b_jk w_j w_k, with
 * w_j the dry-mass density of species j. Harvesting removes species j at
 * capacity coefficient tau_j once it crosses its management level, and in
 * the spatial model each species spreads with diffusion coefficient D_j.
 *
 * The interaction matrix is dense, row major; interaction(j, k) is the
 * pressure of species k on species j. symmetrized() is the matrix whose
 * linear solve yields the management levels.
 */
struct ModelSpec {
  int n_species = 0;
  std::vector<double> a;          // growth rates, 1/day
  std::vector<double> b;          // interaction coefficients, m^2/(g day), row major
  std::vector<double> tau;        // harvest capacity coefficients, 1/day
  std::vector<double> diffusion;  // diffusion coefficients, m^2/day

  double interaction(int j, int k) const {
    return b[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_species) + static_cast<std::size_t>(k)];
  }
  double symmetrized(int j, int k) const { return interaction(j, k) + interaction(k, j); }

  bool operator==(const ModelSpec&) const = default;
};

/// Checks every model invariant and returns the spec unchanged. Throws
/// Error naming the first violated invariant: growth rates and harvest
/// capacities must be positive, diffusion non-negative, self-limitation
/// b_jj positive, cross terms non-negative, and the symmetrized matrix
/// must be well conditioned (infinity-norm condition estimate <= 1e12).
ModelSpec validate_model(ModelSpec spec);

/// a_j / b_jj per species: the density a lone species settles at.
std::vector<double> carrying_capacity(const ModelSpec& spec);

/** Spatial and temporal grids for the reaction-diffusion model.
 *
 * Both channel endpoints carry a node, so dx = length / (n_space - 1).
 * The time step is dt = horizon / n_time.
 */
struct Discretization {
  double length = 10.0;   // channel length, m
  int n_space = 100;      // spatial node count
  double horizon = 30.0;  // final time, days
  int n_time = 5000;      // time step count

  double dx() const { return length / (n_space - 1); }
  double dt() const { return horizon / n_time; }

  bool operator==(const Discretization&) const = default;
};

/// Requires length > 0, horizon > 0, n_space >= 2, n_time >= 1.
Discretization validate_grid(Discretization disc);

/// Densities of all species at one instant of the temporal model.
struct StateVector {
  std::vector<double> values;  // g/m^2, one entry per species
  double time = 0.0;           // days

  bool operator==(const StateVector&) const = default;
};

/// Densities of all species over the spatial grid at one instant.
/// values is row major: values[j * n_space + s] is species j at node s.
struct StateField {
  int n_species = 0;
  int n_space = 0;
  double time = 0.0;  // days
  std::vector<double> values;

  static StateField uniform(int n_species, int n_space, std::span<const double> per_species,
                            double time = 0.0);

  double at(int j, int s) const {
    return values[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_space) + static_cast<std::size_t>(s)];
  }
  double& at(int j, int s) {
    return values[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_space) + static_cast<std::size_t>(s)];
  }
  std::span<const double> species(int j) const {
    return std::span<const double>(values).subspan(
        static_cast<std::size_t>(j) * static_cast<std::size_t>(n_space), static_cast<std::size_t>(n_space));
  }

  bool operator==(const StateField&) const = default;
};

}  // namespace pondctl
