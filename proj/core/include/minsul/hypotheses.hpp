#pragma once

#include <string_view>
#include <vector>

#include "minsul/barriers.hpp"
#include "minsul/model.hpp"

namespace minsul {

struct HypothesisCheckConfig {
  /// Singularity exponent of the majorant, 0 < alpha < 1.
  double alpha = 0.5;
  /// Majorant gamma sampled on the quadrature grid x_k = k / quad_nodes, k = 1..quad_nodes.
  /// A single value is broadcast to every node.
  std::vector<double> gamma_samples{1.0};
  /// Grid resolution for the majorant check and the starting panel count of the quadrature.
  std::size_t quad_nodes = 64;
  /// Potentials where dF/dphi is sampled along a = 0; empty means sample the phi box.
  std::vector<double> monotonicity_points;
};

enum class Monotonicity { increasing, decreasing, mixed, flat };

std::string_view to_string(Monotonicity m);

struct MonotonicitySample {
  double phi = 0.0;
  double derivative = 0.0;
};

struct HypothesisReport {
  // Integrability of s (1 - s) F along the lower phi barrier.
  double integral = 0.0;
  bool integral_finite = false;
  int quadrature_doublings = 0;
  std::size_t quadrature_panels = 0;

  // Majorant |F(x, s)| <= gamma(x) (1 + |s|^-alpha) on sampled (x, s) pairs.
  bool majorant_holds = true;
  std::size_t majorant_samples = 0;
  std::size_t majorant_violations = 0;
  double majorant_worst_ratio = 0.0;

  // Observed sign of dF/dphi on the a = 0 branch.
  std::vector<MonotonicitySample> monotonicity;
  Monotonicity observed = Monotonicity::flat;
  /// Whether "F increasing in phi" held at every sample.
  bool increasing_as_assumed = false;
};

/// Numeric checks of the integrability, majorant and monotonicity hypotheses on the
/// given box. Throws QuadratureFailure when the integral does not stabilize under
/// panel doubling.
HypothesisReport check_hypotheses(const HypothesisCheckConfig& cfg, const DiodeParams& p,
                                  const BarrierBox& box);

/// Central difference of F(., 0) with h = 1e-6 max(1, |phi|).
double dF_dphi_numeric(double phi, const DiodeParams& p);

}  // namespace minsul
