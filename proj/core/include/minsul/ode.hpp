#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace minsul {

/// dy/dx = f(x, y). Returns false when the right-hand side is undefined at (x, y);
/// the integrator then shrinks the step.
using OdeRhs = std::function<bool(double x, std::span<const double> y, std::span<double> dy)>;

/// Scalar event function; integration stops where it changes sign from positive
/// to non-positive.
using OdeEvent = std::function<double(double x, std::span<const double> y)>;

struct OdeOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
  /// Initial step; 0 picks one from the local derivative scale.
  double initial_step = 0.0;
  double min_step = 1e-14;
  double max_step = 0.0;
  long max_steps = 2'000'000;
  /// Event root located to this width in x.
  double event_tolerance = 1e-12;
  /// Abscissae (ascending, inside (x0, x1]) that steps land on exactly.
  std::vector<double> output_points;
};

enum class OdeTermination { reached_end, event, step_underflow };

std::string_view to_string(OdeTermination t);

struct OdeSample {
  double x = 0.0;
  std::vector<double> y;
};

struct OdeResult {
  OdeTermination reason = OdeTermination::reached_end;
  /// Samples at the requested output points that were reached.
  std::vector<OdeSample> outputs;
  /// Final state (the end point, the located event, or the last accepted state).
  OdeSample last;
  long accepted_steps = 0;
  long rejected_steps = 0;
};

/// Dormand-Prince 5(4) with PI-free standard step control (safety 0.9, factors in
/// [0.2, 5]) and the error measured in the RMS norm of err / (atol + rtol |y|).
OdeResult integrate_dopri(const OdeRhs& f, double x0, std::span<const double> y0, double x1,
                          const OdeOptions& options = {}, const OdeEvent& event = {});

}  // namespace minsul
