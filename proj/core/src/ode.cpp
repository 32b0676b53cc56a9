#include "minsul/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "minsul/errors.hpp"

namespace minsul {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Fifth minus fourth order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

class Stepper {
 public:
  Stepper(const OdeRhs& f, std::size_t n) : f_(f), n_(n) {
    for (auto& k : k_) k.resize(n);
    tmp_.resize(n);
  }

  // One step of size h from (x, y) with k1 = f(x, y) given. Fills y_new and the error
  // estimate; returns false if a stage was undefined.
  bool step(double x, std::span<const double> y, std::span<const double> k1, double h,
            std::vector<double>& y_new, std::vector<double>& err) {
    std::copy(k1.begin(), k1.end(), k_[0].begin());
    auto stage = [&](std::size_t s, double cx, auto&& combine) {
      for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h * combine(i);
      return f_(x + cx * h, tmp_, k_[s]);
    };
    if (!stage(1, c2, [&](std::size_t i) { return a21 * k_[0][i]; })) return false;
    if (!stage(2, c3, [&](std::size_t i) { return a31 * k_[0][i] + a32 * k_[1][i]; })) {
      return false;
    }
    if (!stage(3, c4, [&](std::size_t i) {
          return a41 * k_[0][i] + a42 * k_[1][i] + a43 * k_[2][i];
        })) {
      return false;
    }
    if (!stage(4, c5, [&](std::size_t i) {
          return a51 * k_[0][i] + a52 * k_[1][i] + a53 * k_[2][i] + a54 * k_[3][i];
        })) {
      return false;
    }
    if (!stage(5, 1.0, [&](std::size_t i) {
          return a61 * k_[0][i] + a62 * k_[1][i] + a63 * k_[2][i] + a64 * k_[3][i] +
                 a65 * k_[4][i];
        })) {
      return false;
    }
    y_new.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      y_new[i] = y[i] + h * (b1 * k_[0][i] + b3 * k_[2][i] + b4 * k_[3][i] + b5 * k_[4][i] +
                             b6 * k_[5][i]);
    }
    // FSAL stage doubles as the derivative at the new point.
    if (!f_(x + h, y_new, k_[6])) return false;
    err.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      err[i] = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] +
                    e6 * k_[5][i] + e7 * k_[6][i]);
    }
    return true;
  }

  const std::vector<double>& derivative_at_end() const { return k_[6]; }

 private:
  const OdeRhs& f_;
  std::size_t n_;
  std::array<std::vector<double>, 7> k_;
  std::vector<double> tmp_;
};

double error_norm(std::span<const double> err, std::span<const double> y,
                  std::span<const double> y_new, const OdeOptions& o) {
  double s = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sc = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    const double r = err[i] / sc;
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(err.size()));
}

double initial_step(std::span<const double> y, std::span<const double> dy, double span,
                    const OdeOptions& o) {
  if (o.initial_step > 0.0) return std::min(o.initial_step, span);
  double d0 = 0.0;
  double d1 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double sc = o.atol + o.rtol * std::abs(y[i]);
    d0 += (y[i] / sc) * (y[i] / sc);
    d1 += (dy[i] / sc) * (dy[i] / sc);
  }
  d0 = std::sqrt(d0 / y.size());
  d1 = std::sqrt(d1 / y.size());
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h = std::min(h, 1e-2 * span);
  return std::max(h, 1e-12);
}

}  // namespace

std::string_view to_string(OdeTermination t) {
  switch (t) {
    case OdeTermination::reached_end: return "reached_1";
    case OdeTermination::event: return "discriminant_zero";
    case OdeTermination::step_underflow: return "step_underflow";
  }
  return "reached_1";
}

OdeResult integrate_dopri(const OdeRhs& f, double x0, std::span<const double> y0, double x1,
                          const OdeOptions& o, const OdeEvent& event) {
  if (!(x1 > x0)) fail(ErrorCode::InvalidParameter, "integration interval must be increasing");
  const std::size_t n = y0.size();
  OdeResult res;
  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> dy(n);
  if (!f(x0, y, dy)) {
    fail(ErrorCode::SingularPoint, "right-hand side undefined at the initial state");
  }
  double x = x0;
  const double span = x1 - x0;
  double h = initial_step(y, dy, span, o);
  const double max_step = o.max_step > 0.0 ? o.max_step : span;
  Stepper stepper(f, n);
  std::vector<double> y_new;
  std::vector<double> err;
  std::size_t next_out = 0;
  while (next_out < o.output_points.size() && o.output_points[next_out] <= x0) ++next_out;
  double g_prev = event ? event(x, y) : 1.0;

  auto finish = [&](OdeTermination reason) {
    res.reason = reason;
    res.last = OdeSample{x, y};
    return res;
  };

  for (long steps = 0; steps < o.max_steps; ++steps) {
    if (x >= x1) return finish(OdeTermination::reached_end);
    // Clamp the step so that output points and the end point are hit exactly.
    double target = x1;
    if (next_out < o.output_points.size()) target = std::min(target, o.output_points[next_out]);
    h = std::min(h, max_step);
    double hs = h;
    bool lands = false;
    if (x + hs >= target || target - (x + hs) < 1e-14 * std::max(1.0, std::abs(target))) {
      hs = target - x;
      lands = true;
    }
    if (hs < o.min_step && !lands) return finish(OdeTermination::step_underflow);

    const bool ok = stepper.step(x, y, dy, hs, y_new, err);
    const double en = ok ? error_norm(err, y, y_new, o) : std::numeric_limits<double>::infinity();
    if (!(en <= 1.0)) {
      ++res.rejected_steps;
      const double fac = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.25;
      h = hs * fac;
      if (h < o.min_step) return finish(OdeTermination::step_underflow);
      continue;
    }

    if (event) {
      const double g_new = event(x + hs, y_new);
      if (g_prev > 0.0 && !(g_new > 0.0)) {
        // Bisection on the step length, re-integrating one step from (x, y) each time.
        double lo = 0.0;
        double hi = hs;
        std::vector<double> y_hi = y_new;
        std::vector<double> y_mid;
        std::vector<double> e_mid;
        while (hi - lo > o.event_tolerance) {
          const double mid = 0.5 * (lo + hi);
          if (!stepper.step(x, y, dy, mid, y_mid, e_mid)) {
            hi = mid;
            continue;
          }
          if (event(x + mid, y_mid) > 0.0) {
            lo = mid;
          } else {
            hi = mid;
            y_hi = y_mid;
          }
        }
        ++res.accepted_steps;
        x += hi;
        y = y_hi;
        return finish(OdeTermination::event);
      }
      g_prev = g_new;
    }

    ++res.accepted_steps;
    x = lands ? target : x + hs;
    y = y_new;
    const auto& d_end = stepper.derivative_at_end();
    std::copy(d_end.begin(), d_end.end(), dy.begin());
    if (lands && next_out < o.output_points.size() && target == o.output_points[next_out]) {
      res.outputs.push_back(OdeSample{x, y});
      ++next_out;
    }
    const double fac = en > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2))) : 5.0;
    // A step shortened to land on a point does not shrink the controller's step.
    h = lands ? std::max(h, hs * fac) : hs * fac;
  }
  return finish(OdeTermination::step_underflow);
}

}  // namespace minsul
