#pragma once

#include <string_view>

#include "minsul/mesh.hpp"

namespace minsul {

/// Dimensionless parameters of the noninsulated diode problem
///
///   phi'' = j_x (1+phi) / sqrt(|(1+phi)^2 - 1 - a^2|),   phi(0) = 0, phi(1) = phi_L
///   a''   = j_x a       / sqrt(|(1+phi)^2 - 1 - a^2|),   a(0)   = 0, a(1)   = a_L
///
/// plus the numerical knobs shared by all solvers.
struct DiodeParams {
  double j_x = 0.1;
  /// Admissible current ceiling; the Child-Langmuir barrier coefficient is derived from it.
  double j_x_max = 0.1;
  double phi_L = 1.0;
  double a_L = 0.0;
  /// Regularization shift phi -> phi + epsilon.
  double epsilon = 0.0;
  double tol_residual = 1e-8;
  double tol_iter = 1e-10;

  /// Throws InvalidParameter. j_x = 0 is accepted as the degenerate linear case.
  void validate() const;
};

enum class DiscriminantSign { positive, zero, negative };

std::string_view to_string(DiscriminantSign s);

/// The radicand (1+phi)^2 - 1 - a^2 and its sign under the zero threshold.
struct Discriminant {
  double value = 0.0;
  DiscriminantSign sign = DiscriminantSign::zero;
};

/// |radicand| below this is treated as the singular set: 1e-14 * max(1, (1+phi)^2).
double zero_threshold(double phi) noexcept;

/// Evaluated as phi (2+phi) - a^2, which equals (1+phi)^2 - 1 - a^2 without the
/// cancellation that would otherwise destroy small potentials near the cathode.
Discriminant discriminant(double phi, double a) noexcept;

/// Right-hand side value with partial derivatives, computed with the modulus
/// convention. `singular` is set (and value/derivatives are +inf/NaN) when the
/// radicand is inside the zero threshold.
struct RhsPoint {
  double value = 0.0;
  double d_phi = 0.0;
  double d_a = 0.0;
  Discriminant disc;
  bool singular = false;
};

/// F with the potential shifted by eps (eps = 0 gives the unregularized F).
RhsPoint rhs_F(double j_x, double phi, double a, double eps = 0.0) noexcept;
RhsPoint rhs_G(double j_x, double phi, double a, double eps = 0.0) noexcept;

/// Throw SingularPoint on the singular set.
double eval_F(double phi, double a, const DiodeParams& p);
double eval_G(double phi, double a, const DiodeParams& p);
/// Regularized forms using p.epsilon.
double eval_F_eps(double phi, double a, const DiodeParams& p);
double eval_G_eps(double phi, double a, const DiodeParams& p);

/// u = -phi pointwise; an involution.
FieldProfile to_transformed(const FieldProfile& phi_profile);

}  // namespace minsul
