#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "minsul/barriers.hpp"
#include "minsul/mesh.hpp"
#include "minsul/model.hpp"

namespace minsul {

/// A (phi, a) pair on one mesh with the residuals of the discretized coupled system.
struct SolutionPair {
  FieldProfile phi;
  FieldProfile a;
  double residual_phi = std::numeric_limits<double>::quiet_NaN();
  double residual_a = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool phi_contained = false;
  bool a_contained = false;
  /// Sup-norm change of the last sweep.
  double last_change = std::numeric_limits<double>::quiet_NaN();
  /// Nodes clipped into the box across all scalar solves, and the largest escape.
  std::size_t clipped_nodes = 0;
  double max_escape = 0.0;

  bool contained() const noexcept { return phi_contained && a_contained; }
};

struct CoupledResidual {
  double phi = 0.0;
  double a = 0.0;
  /// Interior nodes on the singular set, excluded from both sup-norms.
  std::size_t singular_nodes = 0;
};

/// Central-difference residuals of both equations at interior nodes.
CoupledResidual coupled_residual(const SolutionPair& sol, const DiodeParams& p);

struct SystemSolveOptions {
  /// Warm start; must live on the solve mesh.
  std::optional<SolutionPair> initial;
  int max_sweeps = 200;
  /// Clipping beyond this distance means the parameters do not fit the box.
  double box_violation = 1e-6;
};

/// Alternating sweeps: phi from the phi-equation with a frozen at the previous sweep,
/// then a from the a-equation with the new phi frozen. Each half-step is a scalar
/// solve clipped into the box.
SolutionPair solve_system(const DiodeParams& p, const BarrierBox& box, const MeshPtr& mesh,
                          const SystemSolveOptions& options = {});

/// Pointwise box containment with relative slack 1e-10.
bool profile_within(const FieldProfile& profile, const Barrier& lower, const Barrier& upper);

}  // namespace minsul
