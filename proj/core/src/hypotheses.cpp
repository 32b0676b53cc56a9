#include "minsul/hypotheses.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "minsul/errors.hpp"

namespace minsul {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussX = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                           0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussW = {0.2369268850561891, 0.4786286704993665,
                                           0.5688888888888889, 0.4786286704993665,
                                           0.2369268850561891};

constexpr int kMaxDoublings = 16;

// s = t^3 turns the s^{1/3}-type behaviour at the cathode into a smooth integrand.
double integrate_panels(const BarrierBox& box, const DiodeParams& p, std::size_t panels,
                        bool& finite) {
  const double h = 1.0 / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double mid = (static_cast<double>(k) + 0.5) * h;
    for (std::size_t g = 0; g < kGaussX.size(); ++g) {
      const double t = mid + 0.5 * h * kGaussX[g];
      const double s = t * t * t;
      const RhsPoint f = rhs_F(p.j_x, box.phi_lower.value(s), box.a_lower.value(s));
      if (f.singular || !std::isfinite(f.value)) {
        finite = false;
        return std::numeric_limits<double>::infinity();
      }
      sum += 0.5 * h * kGaussW[g] * 3.0 * t * t * s * (1.0 - s) * f.value;
    }
  }
  return sum;
}

double gamma_at(const HypothesisCheckConfig& cfg, std::size_t k) {
  return cfg.gamma_samples.size() == 1 ? cfg.gamma_samples.front() : cfg.gamma_samples[k];
}

}  // namespace

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
    case Monotonicity::mixed: return "mixed";
    case Monotonicity::flat: return "flat";
  }
  return "flat";
}

double dF_dphi_numeric(double phi, const DiodeParams& p) {
  const double h = 1e-6 * std::max(1.0, std::abs(phi));
  return (eval_F(phi + h, 0.0, p) - eval_F(phi - h, 0.0, p)) / (2.0 * h);
}

HypothesisReport check_hypotheses(const HypothesisCheckConfig& cfg, const DiodeParams& p,
                                  const BarrierBox& box) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    fail(ErrorCode::InvalidParameter, "majorant exponent alpha must lie in (0, 1)");
  }
  if (cfg.quad_nodes == 0) fail(ErrorCode::InvalidParameter, "quad_nodes must be positive");
  if (cfg.gamma_samples.size() != 1 && cfg.gamma_samples.size() != cfg.quad_nodes) {
    fail(ErrorCode::InvalidParameter, "gamma_samples must have 1 or quad_nodes entries");
  }

  HypothesisReport r;

  bool finite = true;
  std::size_t panels = cfg.quad_nodes;
  double previous = integrate_panels(box, p, panels, finite);
  if (finite) {
    bool converged = false;
    for (int d = 1; d <= kMaxDoublings; ++d) {
      panels *= 2;
      const double current = integrate_panels(box, p, panels, finite);
      r.quadrature_doublings = d;
      if (!finite) break;
      const bool small =
          std::abs(current - previous) < 1e-6 * std::max(std::abs(current), 1e-300);
      previous = current;
      if (small) {
        converged = true;
        break;
      }
    }
    if (finite && !converged) {
      fail(ErrorCode::QuadratureFailure,
           "integral of s(1-s)F along the lower barrier did not stabilize under doubling");
    }
  }
  r.quadrature_panels = panels;
  r.integral = finite ? previous : std::numeric_limits<double>::infinity();
  r.integral_finite = finite;

  for (std::size_t k = 0; k < cfg.quad_nodes; ++k) {
    const double x = static_cast<double>(k + 1) / static_cast<double>(cfg.quad_nodes);
    const double lo = box.phi_lower.value(x);
    const double hi = box.phi_upper.value(x);
    const double a = box.a_lower.value(x);
    const double gamma = gamma_at(cfg, k);
    for (int m = 0; m <= 8; ++m) {
      const double s = lo + (hi - lo) * m / 8.0;
      if (!(s > 0.0)) continue;
      const RhsPoint f = rhs_F(p.j_x, s, a);
      if (f.singular) continue;
      ++r.majorant_samples;
      const double bound = gamma * (1.0 + std::pow(std::abs(s), -cfg.alpha));
      const double ratio = std::abs(f.value) / bound;
      r.majorant_worst_ratio = std::max(r.majorant_worst_ratio, ratio);
      if (ratio > 1.0) ++r.majorant_violations;
    }
  }
  r.majorant_holds = r.majorant_violations == 0;

  std::vector<double> points = cfg.monotonicity_points;
  if (points.empty()) {
    const double lo = std::max(box.phi_lower.value(0.5), 1e-3);
    const double hi = std::max(box.phi_upper.value(1.0), lo * 2.0);
    for (int m = 0; m < 8; ++m) points.push_back(lo + (hi - lo) * m / 7.0);
  }
  int neg = 0;
  int pos = 0;
  for (double phi : points) {
    const double d = dF_dphi_numeric(phi, p);
    r.monotonicity.push_back({phi, d});
    if (d < 0.0) ++neg;
    if (d > 0.0) ++pos;
  }
  if (pos > 0 && neg > 0) {
    r.observed = Monotonicity::mixed;
  } else if (neg > 0) {
    r.observed = Monotonicity::decreasing;
  } else if (pos > 0) {
    r.observed = Monotonicity::increasing;
  }
  r.increasing_as_assumed = !points.empty() && pos == static_cast<int>(points.size());
  return r;
}

}  // namespace minsul
