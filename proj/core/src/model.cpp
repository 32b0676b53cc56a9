#include "minsul/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "minsul/errors.hpp"

namespace minsul {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

std::string describe_point(double phi, double a) {
  std::ostringstream os;
  os.precision(17);
  os << "singular set reached at phi=" << phi << ", a=" << a;
  return os.str();
}

}  // namespace

void DiodeParams::validate() const {
  if (!finite_nonneg(j_x)) fail(ErrorCode::InvalidParameter, "j_x must be finite and >= 0");
  if (!(std::isfinite(j_x_max) && j_x_max > 0.0)) {
    fail(ErrorCode::InvalidParameter, "j_x_max must be finite and > 0");
  }
  if (j_x > j_x_max) fail(ErrorCode::InvalidParameter, "j_x must not exceed j_x_max");
  if (!finite_nonneg(phi_L)) {
    fail(ErrorCode::InvalidParameter, "phi_L must be finite and >= 0 (positive branch only)");
  }
  if (!std::isfinite(a_L)) fail(ErrorCode::InvalidParameter, "a_L must be finite");
  if (!finite_nonneg(epsilon)) fail(ErrorCode::InvalidParameter, "epsilon must be >= 0");
  if (!(tol_residual > 0.0) || !(tol_iter > 0.0)) {
    fail(ErrorCode::InvalidParameter, "tolerances must be > 0");
  }
}

std::string_view to_string(DiscriminantSign s) {
  switch (s) {
    case DiscriminantSign::positive: return "positive";
    case DiscriminantSign::zero: return "zero";
    case DiscriminantSign::negative: return "negative";
  }
  return "zero";
}

double zero_threshold(double phi) noexcept {
  const double w = 1.0 + phi;
  return 1e-14 * std::max(1.0, w * w);
}

Discriminant discriminant(double phi, double a) noexcept {
  Discriminant d;
  d.value = phi * (2.0 + phi) - a * a;
  if (std::abs(d.value) < zero_threshold(phi)) {
    d.sign = DiscriminantSign::zero;
  } else {
    d.sign = d.value > 0.0 ? DiscriminantSign::positive : DiscriminantSign::negative;
  }
  return d;
}

// With D the radicand, s = sign(D) and w = 1 + phi:
//   F = j w / sqrt|D|,   dF/dphi = j (|D| - s w^2) / |D|^{3/2},  dF/da = j s w a / |D|^{3/2}
//   G = j a / sqrt|D|,   dG/da   = j (|D| + s a^2) / |D|^{3/2},  dG/dphi = -j s w a / |D|^{3/2}
RhsPoint rhs_F(double j_x, double phi, double a, double eps) noexcept {
  RhsPoint r;
  const double shifted = phi + eps;
  r.disc = discriminant(shifted, a);
  if (r.disc.sign == DiscriminantSign::zero) {
    r.singular = true;
    r.value = kInf;
    r.d_phi = r.d_a = kNaN;
    return r;
  }
  const double w = 1.0 + shifted;
  const double s = r.disc.value > 0.0 ? 1.0 : -1.0;
  const double mag = std::abs(r.disc.value);
  const double root = std::sqrt(mag);
  const double cube = mag * root;
  r.value = j_x * w / root;
  r.d_phi = j_x * (mag - s * w * w) / cube;
  r.d_a = j_x * s * w * a / cube;
  return r;
}

RhsPoint rhs_G(double j_x, double phi, double a, double eps) noexcept {
  RhsPoint r;
  const double shifted = phi + eps;
  r.disc = discriminant(shifted, a);
  if (r.disc.sign == DiscriminantSign::zero) {
    r.singular = true;
    r.value = a == 0.0 ? kNaN : std::copysign(kInf, a);
    r.d_phi = r.d_a = kNaN;
    return r;
  }
  const double w = 1.0 + shifted;
  const double s = r.disc.value > 0.0 ? 1.0 : -1.0;
  const double mag = std::abs(r.disc.value);
  const double root = std::sqrt(mag);
  const double cube = mag * root;
  r.value = j_x * a / root;
  r.d_a = j_x * (mag + s * a * a) / cube;
  r.d_phi = -j_x * s * w * a / cube;
  return r;
}

double eval_F(double phi, double a, const DiodeParams& p) {
  const RhsPoint r = rhs_F(p.j_x, phi, a);
  if (r.singular) fail(ErrorCode::SingularPoint, describe_point(phi, a));
  return r.value;
}

double eval_G(double phi, double a, const DiodeParams& p) {
  const RhsPoint r = rhs_G(p.j_x, phi, a);
  if (r.singular) fail(ErrorCode::SingularPoint, describe_point(phi, a));
  return r.value;
}

double eval_F_eps(double phi, double a, const DiodeParams& p) {
  const RhsPoint r = rhs_F(p.j_x, phi, a, p.epsilon);
  if (r.singular) fail(ErrorCode::SingularPoint, describe_point(phi + p.epsilon, a));
  return r.value;
}

double eval_G_eps(double phi, double a, const DiodeParams& p) {
  const RhsPoint r = rhs_G(p.j_x, phi, a, p.epsilon);
  if (r.singular) fail(ErrorCode::SingularPoint, describe_point(phi + p.epsilon, a));
  return r.value;
}

FieldProfile to_transformed(const FieldProfile& phi_profile) {
  FieldProfile u = phi_profile;
  for (double& v : u.values) v = -v;
  return u;
}

}  // namespace minsul
