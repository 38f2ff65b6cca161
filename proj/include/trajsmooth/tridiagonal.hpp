#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "trajsmooth/errors.hpp"
#include "trajsmooth/vec2.hpp"

namespace trajsmooth {

/// Tridiagonal system with a two-component right-hand side (both coordinates
/// share the same matrix). Row r corresponds to interior grid point r+1.
struct TridiagonalSystem {
  std::vector<double> sub;    // coefficient of x_{i-1}, sub[0] unused (folded)
  std::vector<double> diag;
  std::vector<double> super;  // coefficient of x_{i+1}, super[n-1] unused (folded)
  std::vector<Vec2> rhs;

  std::size_t rows() const { return diag.size(); }

  /// Strict diagonal dominance margin of a row, diag - |sub| - |super|.
  double dominance_margin(std::size_t r) const {
    return diag[r] - std::abs(sub[r]) - std::abs(super[r]);
  }
};

/// Classical Thomas algorithm, O(n). Valid without pivoting for the strictly
/// diagonally dominant systems assembled here; the pivot check is a
/// last-resort guard only.
inline std::vector<Vec2> thomas_solve(const TridiagonalSystem& s) {
  const std::size_t n = s.rows();
  if (n == 0) return {};
  std::vector<double> cp(n, 0.0);
  std::vector<Vec2> dp(n);

  double den = s.diag[0];
  if (std::abs(den) < 1e-14) throw NumericalError("Thomas pivot underflow at row 0");
  if (n > 1) cp[0] = s.super[0] / den;
  dp[0] = s.rhs[0] / den;
  for (std::size_t r = 1; r < n; ++r) {
    den = s.diag[r] - s.sub[r] * cp[r - 1];
    if (std::abs(den) < 1e-14)
      throw NumericalError("Thomas pivot underflow at row " + std::to_string(r));
    if (r + 1 < n) cp[r] = s.super[r] / den;
    dp[r] = (s.rhs[r] - s.sub[r] * dp[r - 1]) / den;
  }

  std::vector<Vec2> x(n);
  x[n - 1] = dp[n - 1];
  for (std::size_t r = n - 1; r-- > 0;) x[r] = dp[r] - cp[r] * x[r + 1];
  return x;
}

}  // namespace trajsmooth
