#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "minsul/mesh.hpp"
#include "minsul/model.hpp"
#include "minsul/ode.hpp"
#include "minsul/scalar_solver.hpp"
#include "minsul/system_solver.hpp"

namespace minsul {

/// State (phi, phi', a, a') at abscissa x.
struct IvpState {
  double x = 0.0;
  std::array<double, 4> y{};
  double step = 0.0;
  DiscriminantSign disc_sign = DiscriminantSign::positive;
};

struct ShootingParams {
  /// a'(0).
  double beta = 0.0;
  /// Scalar shooting slope a'(0) for the a-equation with phi frozen.
  double c = 0.0;
  double j_x = 0.0;
  /// phi'(0); zero is the space-charge-limited start.
  double slope = 0.0;
  /// Launch abscissa, in (0, 0.1].
  double eta = 1e-4;

  void validate() const;
};

struct AsymptoticStart {
  double phi = 0.0;
  double dphi = 0.0;
};

/// Launch values at x = eta on the a = 0 branch. With phi'(0) = 0 this is
/// phi = k eta^{4/3}, phi' = (4/3) k eta^{1/3}, k = (9 j_x / (4 sqrt 2))^{2/3}.
/// A positive slope uses the exact solution of phi'' = j_x / sqrt(2 phi) through
/// (0, 0) with phi'(0) = slope.
AsymptoticStart asymptotic_start(const DiodeParams& p, double eta, double slope = 0.0);

/// Full launch state: asymptotic phi plus a = beta eta, a' = beta.
IvpState launch_state(const DiodeParams& p, const ShootingParams& s);

struct IvpOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  /// Abscissae to record (values at or before the launch point are ignored).
  std::vector<double> output_points;
};

/// Samples of an integrated trajectory; the first entry is the launch state and the
/// last is the final state.
struct Trajectory {
  std::vector<double> x;
  std::vector<double> phi;
  std::vector<double> dphi;
  std::vector<double> a;
  std::vector<double> da;
  std::vector<double> disc;
  OdeTermination reason = OdeTermination::reached_end;
  long steps = 0;

  bool reached_end() const noexcept { return reason == OdeTermination::reached_end; }
  double x_end() const { return x.back(); }
  double phi_end() const { return phi.back(); }
  double a_end() const { return a.back(); }
};

/// Integrates the coupled system from `start` to x = 1, stopping at a discriminant zero.
Trajectory integrate_ivp(const IvpState& start, const DiodeParams& p,
                         const IvpOptions& options = {});

struct ScalarShot {
  double c = 0.0;
  /// a(1) - a_L when the trajectory reached x = 1.
  double residual = 0.0;
  Trajectory trajectory;
  /// Profile on the requested mesh when the shot reached x = 1.
  std::optional<FieldProfile> profile;

  bool reached_end() const noexcept { return trajectory.reached_end(); }
};

/// One shot of the a-equation (case A4 or A5) with the potential frozen, from
/// a(0) = 0, a'(0) = c. Starts at x = 0 when the frozen potential is positive there,
/// otherwise at eta with the linear start.
ScalarShot shoot_scalar_a(const ScalarProblem& prob, double c, const MeshPtr& mesh = nullptr,
                          const IvpOptions& options = {}, double eta = 1e-4);

struct ScalarShootingResult {
  double c = 0.0;
  FieldProfile profile;
  int shots = 0;
  /// Audit of the shooting map over the bracket samples.
  bool monotone = true;
};

/// Bisection on c with an expanding bracket. Throws NoBracket when every slope either
/// undershoots a_L or hits the discriminant zero.
ScalarShootingResult solve_shoot_scalar_a(const ScalarProblem& prob, const MeshPtr& mesh,
                                          double tol = 1e-11);

enum class ShootingMode {
  /// Unknowns a'(0) and j_x; phi'(0) = 0.
  space_charge_limited,
  /// Unknowns a'(0) and phi'(0); j_x fixed.
  fixed_current,
};

std::string_view to_string(ShootingMode m);

struct SystemShootOptions {
  ShootingMode mode = ShootingMode::fixed_current;
  double eta = 1e-4;
  double tol = 1e-11;
  int max_iterations = 100;
  /// Re-solve at eta / 2 and require the change in phi(0.1) below this.
  double richardson_tol = 1e-8;
  bool richardson = true;
  IvpOptions ivp;
};

struct SystemShootResult {
  double beta = 0.0;
  double j_x = 0.0;
  double slope = 0.0;
  double eta = 0.0;
  int iterations = 0;
  bool used_bisection = false;
  double richardson_change = 0.0;
  Trajectory trajectory;
  /// Present when a mesh was given.
  std::optional<SolutionPair> solution;
};

/// Solves (phi(1) - phi_L, a(1) - a_L) = 0 for the two unknowns of the mode by damped
/// Newton with a forward-difference Jacobian, falling back to nested bisection.
/// `second_guess` is j_x or phi'(0) depending on the mode.
SystemShootResult shoot_system(const DiodeParams& p, double beta_guess, double second_guess,
                               const MeshPtr& mesh = nullptr,
                               const SystemShootOptions& options = {});

/// Forward run used to manufacture targets: integrates from the given launch parameters.
Trajectory forward_shot(const DiodeParams& p, const ShootingParams& s,
                        const IvpOptions& options = {});

}  // namespace minsul
