#include "pondctl/model.hpp"

#include <cmath>
#include <string>

#include "pondctl/linalg.hpp"

namespace pondctl {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::non_positive_growth: return "non-positive growth rate";
    case Errc::non_positive_harvest_capacity: return "non-positive harvest capacity";
    case Errc::negative_diffusion: return "negative diffusion coefficient";
    case Errc::invalid_interaction: return "invalid interaction coefficient";
    case Errc::singular_symmetrized_matrix: return "singular symmetrized interaction matrix";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::invalid_grid: return "invalid grid";
    case Errc::linear_solve_failure: return "linear solve failure";
    case Errc::non_finite_state: return "non-finite state";
    case Errc::inner_iteration_diverged: return "inner iteration diverged";
    case Errc::empty_trajectory: return "empty trajectory";
    case Errc::syntax_error: return "syntax error";
    case Errc::unknown_key: return "unknown key";
    case Errc::missing_required_key: return "missing required key";
    case Errc::validation_error: return "validation error";
    case Errc::io_error: return "io error";
  }
  return "unknown error";
}

bool is_config_error(Errc code) {
  switch (code) {
    case Errc::linear_solve_failure:
    case Errc::non_finite_state:
    case Errc::inner_iteration_diverged:
    case Errc::empty_trajectory:
      return false;
    default:
      return true;
  }
}

namespace {

void require_length(const std::vector<double>& v, std::size_t expected, const char* name) {
  if (v.size() != expected) {
    throw Error(Errc::dimension_mismatch, std::string(name) + " has " + std::to_string(v.size()) +
                                              " entries, expected " + std::to_string(expected));
  }
}

}  // namespace

ModelSpec validate_model(ModelSpec spec) {
  if (spec.n_species < 1) {
    throw Error(Errc::validation_error, "n_species must be at least 1");
  }
  const auto n = static_cast<std::size_t>(spec.n_species);
  require_length(spec.a, n, "a");
  require_length(spec.tau, n, "tau");
  require_length(spec.diffusion, n, "diffusion");
  require_length(spec.b, n * n, "b");
  for (int j = 0; j < spec.n_species; ++j) {
    const std::string who = "species " + std::to_string(j + 1);
    if (!(spec.a[j] > 0.0)) {
      throw Error(Errc::non_positive_growth, who + ": a = " + std::to_string(spec.a[j]));
    }
    if (!(spec.tau[j] > 0.0)) {
      throw Error(Errc::non_positive_harvest_capacity, who + ": tau = " + std::to_string(spec.tau[j]));
    }
    if (spec.diffusion[j] < 0.0) {
      throw Error(Errc::negative_diffusion, who + ": D = " + std::to_string(spec.diffusion[j]));
    }
    for (int k = 0; k < spec.n_species; ++k) {
      const double bjk = spec.interaction(j, k);
      if (!std::isfinite(bjk)) {
        throw Error(Errc::invalid_interaction, who + ": b is not finite");
      }
      if (j == k && !(bjk > 0.0)) {
        throw Error(Errc::invalid_interaction, who + ": self-limitation b_jj must be positive");
      }
      if (j != k && bjk < 0.0) {
        throw Error(Errc::invalid_interaction,
                    who + ": cross coefficient b(" + std::to_string(j + 1) + "," +
                        std::to_string(k + 1) + ") must be non-negative");
      }
    }
  }

  std::vector<double> s(n * n);
  for (int j = 0; j < spec.n_species; ++j) {
    for (int k = 0; k < spec.n_species; ++k) {
      s[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(k)] = spec.symmetrized(j, k);
    }
  }
  const double cond = condition_inf(s, spec.n_species);
  if (!(cond <= 1e12)) {
    throw Error(Errc::singular_symmetrized_matrix,
                "condition estimate " + std::to_string(cond) + " exceeds 1e12");
  }
  return spec;
}

std::vector<double> carrying_capacity(const ModelSpec& spec) {
  std::vector<double> k(static_cast<std::size_t>(spec.n_species));
  for (int j = 0; j < spec.n_species; ++j) {
    k[j] = spec.a[j] / spec.interaction(j, j);
  }
  return k;
}

Discretization validate_grid(Discretization disc) {
  if (!(disc.length > 0.0)) {
    throw Error(Errc::invalid_grid, "length must be positive");
  }
  if (!(disc.horizon > 0.0)) {
    throw Error(Errc::invalid_grid, "horizon must be positive");
  }
  if (disc.n_space < 2) {
    throw Error(Errc::invalid_grid, "need at least 2 spatial nodes");
  }
  if (disc.n_time < 1) {
    throw Error(Errc::invalid_grid, "need at least 1 time step");
  }
  return disc;
}

StateField StateField::uniform(int n_species, int n_space, std::span<const double> per_species,
                               double time) {
  if (per_species.size() != static_cast<std::size_t>(n_species)) {
    throw Error(Errc::dimension_mismatch, "uniform field needs one value per species");
  }
  StateField field;
  field.n_species = n_species;
  field.n_space = n_space;
  field.time = time;
  field.values.resize(static_cast<std::size_t>(n_species) * static_cast<std::size_t>(n_space));
  for (int j = 0; j < n_species; ++j) {
    for (int s = 0; s < n_space; ++s) {
      field.at(j, s) = per_species[j];
    }
  }
  return field;
}

}  // namespace pondctl
