#pragma once

#include <span>
#include <vector>

namespace pondctl {

/// Thomas algorithm for a tridiagonal system. lower[s] multiplies x[s-1]
/// in row s and upper[s] multiplies x[s+1]; lower[0] and upper[n-1] are
/// ignored. All four spans must have equal length n >= 1. Throws
/// Error(linear_solve_failure) when elimination hits a vanishing pivot.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/// Dense n-by-n solve by LU with partial pivoting; a is row major and is
/// not modified. Throws Error(linear_solve_failure) on a singular matrix.
std::vector<double> solve_dense(std::span<const double> a, std::span<const double> rhs, int n);

/// Infinity-norm condition estimate of a dense row-major matrix, computed
/// from the explicit inverse. Returns +inf when the matrix is singular.
double condition_inf(std::span<const double> a, int n);

}  // namespace pondctl
