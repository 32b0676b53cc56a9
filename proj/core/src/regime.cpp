#include "minsul/regime.hpp"

#include <cmath>
#include <variant>

#include "minsul/errors.hpp"
#include "minsul/shooting.hpp"

namespace minsul {

namespace {

// Relative distance of a bound from equality.
bool borderline(const BoundCheck& b, double rel) {
  const double scale = std::max(std::abs(b.limit), 1e-300);
  return std::abs(b.limit - b.value) <= rel * scale;
}

double box_delta(const BarrierBox& box) {
  if (const auto* pl = std::get_if<PowerLaw>(&box.phi_lower.form())) return pl->delta;
  // A non power-law lower barrier carries its anode floor as phi_lower(1).
  return std::sqrt(std::max(0.0, box.phi_lower.value(1.0)));
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::noninsulated: return "Noninsulated";
    case Regime::insulation_suspected: return "InsulationSuspected";
    case Regime::outside_theory: return "OutsideTheory";
  }
  return "OutsideTheory";
}

RegimeReport classify(const DiodeParams& p, const BarrierBox& box, const ClassifyOptions& options) {
  RegimeReport r;
  r.delta = box_delta(box);
  r.phi_upper_at_1 = box.phi_upper.value(1.0);
  r.phi_lower = box.phi_lower.describe();
  r.phi_upper = box.phi_upper.describe();
  const AnodeBounds b = anode_bounds(p, r.phi_upper_at_1, r.delta);
  r.bound_17 = b.current;
  r.bound_18 = b.magnetic_upper;
  r.bound_23 = b.magnetic_current;
  r.bound_16 = b.anode_potential;

  if (!r.bound_16.satisfied || !r.bound_17.satisfied) {
    r.classification = Regime::outside_theory;
    return r;
  }
  bool event = false;
  const double rel = options.borderline;
  if (options.allow_probe && (borderline(r.bound_17, rel) || borderline(r.bound_18, rel) ||
                              borderline(r.bound_23, rel))) {
    r.probe_run = true;
    SystemShootOptions so;
    so.richardson = false;
    so.max_iterations = 50;
    try {
      const SystemShootResult shot = shoot_system(p, p.a_L, std::max(p.phi_L, 1e-3), nullptr, so);
      r.probe_reason = shot.trajectory.reason;
      event = shot.trajectory.reason == OdeTermination::event;
    } catch (const Error& e) {
      r.probe_error = std::string(to_string(e.code())) + ": " + e.what();
      if (e.code() == ErrorCode::EventAbort) {
        r.probe_reason = OdeTermination::event;
        event = true;
      }
    }
  }
  if (!r.bound_23.satisfied || event) {
    r.classification = Regime::insulation_suspected;
  } else if (!r.bound_18.satisfied) {
    r.classification = Regime::outside_theory;
  } else {
    r.classification = Regime::noninsulated;
  }
  return r;
}

SweepTable sweep_jx(const DiodeParams& tmpl, double j_lo, double j_hi, int steps,
                    const MeshPtr& mesh, const SweepOptions& options) {
  if (steps < 1) fail(ErrorCode::InvalidParameter, "sweep needs at least one step");
  if (!(j_lo >= 0.0) || !(j_hi >= j_lo)) {
    fail(ErrorCode::InvalidParameter, "sweep range must satisfy 0 <= j_lo <= j_hi");
  }
  SweepTable table;
  std::optional<SolutionPair> previous;
  for (int k = 0; k < steps; ++k) {
    const double j = steps == 1 ? j_lo : j_lo + (j_hi - j_lo) * k / (steps - 1);
    SweepRow row;
    row.j_x = j;
    DiodeParams p = tmpl;
    p.j_x = j;
    p.j_x_max = std::max(tmpl.j_x_max, j);
    try {
      const BarrierBox box = make_system_box(p, options.alpha, options.beta);
      row.classification = classify(p, box, options.classify).classification;
      SystemSolveOptions so;
      if (options.warm_start && previous) so.initial = previous;
      try {
        SolutionPair sol = solve_system(p, box, mesh, so);
        row.converged = true;
        row.phi_half = sol.phi.interpolate(0.5);
        row.a_half = sol.a.interpolate(0.5);
        row.residual_phi = sol.residual_phi;
        row.residual_a = sol.residual_a;
        row.iterations = sol.iterations;
        previous = std::move(sol);
        table.last_converged_jx = j;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::InadmissibleBox) row.classification = Regime::outside_theory;
        row.error = std::string(to_string(e.code())) + ": " + e.what();
      }
    } catch (const Error& e) {
      row.classification = Regime::outside_theory;
      row.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace minsul
