#pragma once

#include <stdexcept>
#include <string>

namespace pondctl {

/// Failure categories used across the library. The CLI maps these to exit
/// codes: configuration problems exit with 1, numerical failures with 2.
enum class Errc {
  non_positive_growth,
  non_positive_harvest_capacity,
  negative_diffusion,
  invalid_interaction,
  singular_symmetrized_matrix,
  dimension_mismatch,
  invalid_grid,
  linear_solve_failure,
  non_finite_state,
  inner_iteration_diverged,
  empty_trajectory,
  syntax_error,
  unknown_key,
  missing_required_key,
  validation_error,
  io_error,
};

const char* errc_name(Errc code);

/// True for errors caused by bad input (config text or model parameters)
/// rather than a failure of the numerical scheme at run time.
bool is_config_error(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  Errc code() const noexcept { return code_; }
  /// The message without the category prefix, for rewrapping.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace pondctl
