#pragma once

#include <cmath>
#include <cstddef>

#include "minsul/minsul.hpp"

namespace minsul::testing {

inline DiodeParams params(double phi_L, double j_x, double a_L) {
  DiodeParams p;
  p.phi_L = phi_L;
  p.j_x = j_x;
  p.a_L = a_L;
  p.j_x_max = std::max(current_ceiling(phi_L), j_x);
  return p;
}

// Least-squares slope of log(u) against log(x) over interior nodes with x < x_max.
inline double loglog_slope(const FieldProfile& u, double x_max) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double n = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double x = u.mesh->x(i);
    if (x >= x_max) break;
    const double lx = std::log(x);
    const double ly = std::log(u.values[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    n += 1.0;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double max_abs_diff_linear(const FieldProfile& u, double slope) {
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    e = std::max(e, std::abs(u.values[i] - slope * u.mesh->x(i)));
  }
  return e;
}

}  // namespace minsul::testing
