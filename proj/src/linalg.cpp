#include "pondctl/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "pondctl/errors.hpp"

namespace pondctl {

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw Error(Errc::dimension_mismatch, "tridiagonal bands and rhs must share one length >= 1");
  }

  // Forward elimination with scratch copies; the inputs stay untouched.
  std::vector<double> c(n, 0.0);
  std::vector<double> x(n, 0.0);
  double pivot = diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) {
    throw Error(Errc::linear_solve_failure, "zero pivot in row 0");
  }
  c[0] = upper[0] / pivot;
  x[0] = rhs[0] / pivot;
  for (std::size_t s = 1; s < n; ++s) {
    pivot = diag[s] - lower[s] * c[s - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw Error(Errc::linear_solve_failure, "zero pivot in row " + std::to_string(s));
    }
    c[s] = upper[s] / pivot;
    x[s] = (rhs[s] - lower[s] * x[s - 1]) / pivot;
  }
  for (std::size_t s = n - 1; s-- > 0;) {
    x[s] -= c[s] * x[s + 1];
  }
  return x;
}

namespace {

// LU with partial pivoting, in place on lu; perm records row swaps.
// Returns false when a pivot column is entirely zero.
bool lu_factor(std::vector<double>& lu, std::vector<int>& perm, int n) {
  perm.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int best = col;
    double best_mag = std::abs(lu[static_cast<std::size_t>(col) * n + col]);
    for (int row = col + 1; row < n; ++row) {
      const double mag = std::abs(lu[static_cast<std::size_t>(row) * n + col]);
      if (mag > best_mag) {
        best = row;
        best_mag = mag;
      }
    }
    if (best_mag == 0.0 || !std::isfinite(best_mag)) {
      return false;
    }
    if (best != col) {
      for (int k = 0; k < n; ++k) {
        std::swap(lu[static_cast<std::size_t>(col) * n + k], lu[static_cast<std::size_t>(best) * n + k]);
      }
      std::swap(perm[col], perm[best]);
    }
    const double pivot = lu[static_cast<std::size_t>(col) * n + col];
    for (int row = col + 1; row < n; ++row) {
      const double factor = lu[static_cast<std::size_t>(row) * n + col] / pivot;
      lu[static_cast<std::size_t>(row) * n + col] = factor;
      for (int k = col + 1; k < n; ++k) {
        lu[static_cast<std::size_t>(row) * n + k] -= factor * lu[static_cast<std::size_t>(col) * n + k];
      }
    }
  }
  return true;
}

std::vector<double> lu_solve(const std::vector<double>& lu, const std::vector<int>& perm,
                             std::span<const double> rhs, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = rhs[perm[i]];
  for (int i = 1; i < n; ++i) {
    for (int k = 0; k < i; ++k) x[i] -= lu[static_cast<std::size_t>(i) * n + k] * x[k];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) x[i] -= lu[static_cast<std::size_t>(i) * n + k] * x[k];
    x[i] /= lu[static_cast<std::size_t>(i) * n + i];
  }
  return x;
}

}  // namespace

std::vector<double> solve_dense(std::span<const double> a, std::span<const double> rhs, int n) {
  if (n < 1 || a.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n) ||
      rhs.size() != static_cast<std::size_t>(n)) {
    throw Error(Errc::dimension_mismatch, "dense solve needs an n*n matrix and length-n rhs");
  }
  std::vector<double> lu(a.begin(), a.end());
  std::vector<int> perm;
  if (!lu_factor(lu, perm, n)) {
    throw Error(Errc::linear_solve_failure, "singular dense matrix");
  }
  return lu_solve(lu, perm, rhs, n);
}

double condition_inf(std::span<const double> a, int n) {
  if (n < 1 || a.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw Error(Errc::dimension_mismatch, "condition estimate needs an n*n matrix");
  }
  std::vector<double> lu(a.begin(), a.end());
  std::vector<int> perm;
  if (!lu_factor(lu, perm, n)) {
    return std::numeric_limits<double>::infinity();
  }

  double norm_a = 0.0;
  for (int row = 0; row < n; ++row) {
    double sum = 0.0;
    for (int col = 0; col < n; ++col) sum += std::abs(a[static_cast<std::size_t>(row) * n + col]);
    norm_a = std::max(norm_a, sum);
  }

  // Row sums of |A^-1| accumulated column by column.
  std::vector<double> inv_row_sum(static_cast<std::size_t>(n), 0.0);
  std::vector<double> unit(static_cast<std::size_t>(n), 0.0);
  for (int col = 0; col < n; ++col) {
    unit[col] = 1.0;
    const std::vector<double> x = lu_solve(lu, perm, unit, n);
    unit[col] = 0.0;
    for (int row = 0; row < n; ++row) {
      if (!std::isfinite(x[row])) return std::numeric_limits<double>::infinity();
      inv_row_sum[row] += std::abs(x[row]);
    }
  }
  double norm_inv = 0.0;
  for (int row = 0; row < n; ++row) norm_inv = std::max(norm_inv, inv_row_sum[row]);
  return norm_a * norm_inv;
}

}  // namespace pondctl
