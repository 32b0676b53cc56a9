#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minsul/barriers.hpp"
#include "minsul/mesh.hpp"
#include "minsul/model.hpp"
#include "minsul/ode.hpp"
#include "minsul/system_solver.hpp"

namespace minsul {

enum class Regime { noninsulated, insulation_suspected, outside_theory };

std::string_view to_string(Regime r);

struct RegimeReport {
  /// j_x against the current ceiling F(phi_L).
  BoundCheck bound_17;
  /// |a_L| against sqrt(phi^0(1) (2 + phi^0(1))).
  BoundCheck bound_18;
  /// |a_L| against j_x / 2.
  BoundCheck bound_23;
  /// phi_L against delta^2.
  BoundCheck bound_16;
  Regime classification = Regime::outside_theory;

  // Provenance.
  double delta = 0.0;
  double phi_upper_at_1 = 0.0;
  std::string phi_lower;
  std::string phi_upper;
  bool probe_run = false;
  std::optional<OdeTermination> probe_reason;
  std::string probe_error;
};

struct ClassifyOptions {
  /// A bound within this relative distance of equality triggers a shooting probe.
  double borderline = 0.05;
  bool allow_probe = true;
};

/// Evaluates the anode bounds for the box and classifies the regime.
RegimeReport classify(const DiodeParams& p, const BarrierBox& box,
                      const ClassifyOptions& options = {});

struct SweepRow {
  double j_x = 0.0;
  bool converged = false;
  double phi_half = 0.0;
  double a_half = 0.0;
  double residual_phi = 0.0;
  double residual_a = 0.0;
  int iterations = 0;
  Regime classification = Regime::outside_theory;
  /// Error code name and message when the solve failed.
  std::string error;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::optional<double> last_converged_jx;
};

struct SweepOptions {
  std::optional<double> alpha;
  std::optional<double> beta;
  ClassifyOptions classify;
  bool warm_start = true;
};

/// Solves the system at `steps` equally spaced currents in [j_lo, j_hi], ascending,
/// warm-starting each solve from the previous converged one. Per-step failures are
/// recorded in the row and the sweep continues.
SweepTable sweep_jx(const DiodeParams& tmpl, double j_lo, double j_hi, int steps,
                    const MeshPtr& mesh, const SweepOptions& options = {});

}  // namespace minsul
