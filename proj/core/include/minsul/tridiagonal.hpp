#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace minsul {

/// Solves a tridiagonal system by Gaussian elimination with partial pivoting
/// (the dgtsv scheme). `sub[i]` couples row i+1 to column i, `sup[i]` couples row i to
/// column i+1. All inputs are taken by value and overwritten internally; the solution
/// replaces `rhs`. Returns false on an exactly singular pivot.
inline bool solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                              std::vector<double> sup, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return true;
  if (n == 1) {
    if (diag[0] == 0.0) return false;
    rhs[0] /= diag[0];
    return true;
  }
  // Second superdiagonal created by row interchanges.
  std::vector<double> sup2(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(diag[i]) >= std::abs(sub[i])) {
      if (diag[i] == 0.0) return false;
      const double m = sub[i] / diag[i];
      diag[i + 1] -= m * sup[i];
      rhs[i + 1] -= m * rhs[i];
      sub[i] = 0.0;
    } else {
      // Swap rows i and i+1.
      const double m = diag[i] / sub[i];
      diag[i] = sub[i];
      const double t = diag[i + 1];
      diag[i + 1] = sup[i] - m * t;
      if (i + 2 < n) {
        sup2[i] = sup[i + 1];
        sup[i + 1] = -m * sup2[i];
      }
      sup[i] = t;
      const double r = rhs[i];
      rhs[i] = rhs[i + 1];
      rhs[i + 1] = r - m * rhs[i + 1];
    }
  }
  if (diag[n - 1] == 0.0) return false;
  rhs[n - 1] /= diag[n - 1];
  rhs[n - 2] = (rhs[n - 2] - sup[n - 2] * rhs[n - 1]) / diag[n - 2];
  for (std::size_t k = n - 2; k-- > 0;) {
    rhs[k] = (rhs[k] - sup[k] * rhs[k + 1] - sup2[k] * rhs[k + 2]) / diag[k];
  }
  return true;
}

}  // namespace minsul
