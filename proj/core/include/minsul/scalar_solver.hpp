#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "minsul/barriers.hpp"
#include "minsul/errors.hpp"
#include "minsul/hypotheses.hpp"
#include "minsul/mesh.hpp"
#include "minsul/model.hpp"

namespace minsul {

/// Semitrivial scalar problems. A1-A3 solve the phi-equation with a frozen at
/// 0, a^0 and a_0; A4/A5 solve the a-equation with phi frozen at phi^0 and phi_0.
enum class ScalarCase { A1, A2, A3, A4, A5 };

std::string_view to_string(ScalarCase c);
Field solved_field(ScalarCase c);

using FrozenField = std::variant<Barrier, FieldProfile>;

/// Smallest mesh accepted by the solvers (32 intervals).
inline constexpr std::size_t kMinMeshNodes = 33;

struct ScalarProblem {
  ScalarCase scalar_case = ScalarCase::A1;
  /// Opposing field; must be a zero a-barrier for A1.
  FrozenField frozen = Barrier(Field::a, BarrierKind::lower, Zero{});
  DiodeParams params;
  /// Optional clipping box for the solved field.
  std::optional<Barrier> lower;
  std::optional<Barrier> upper;

  Field field() const noexcept { return solved_field(scalar_case); }
  double anode_value() const noexcept {
    return field() == Field::phi ? params.phi_L : params.a_L;
  }
  std::vector<double> frozen_values(const Mesh& mesh) const;
  /// Throws InvalidParameter when the case tag and frozen field disagree.
  void validate() const;
};

ScalarProblem make_a1_problem(const DiodeParams& p, std::optional<Barrier> lower = std::nullopt,
                              std::optional<Barrier> upper = std::nullopt);
ScalarProblem make_scalar_problem(ScalarCase c, FrozenField frozen, const DiodeParams& p,
                                  std::optional<Barrier> lower = std::nullopt,
                                  std::optional<Barrier> upper = std::nullopt);

/// Right-hand side of the scalar case at one node (solved value u, frozen value z).
RhsPoint scalar_rhs(ScalarCase c, double j_x, double u, double z, double eps) noexcept;

/// Three-point second difference on a nonuniform mesh at interior node i.
double second_difference(const Mesh& mesh, std::span<const double> u, std::size_t i) noexcept;

/// Discrete residual D2 u - RHS at every interior node (entries 0 and N are zero).
std::vector<double> scalar_residual_vector(const ScalarProblem& prob, const Mesh& mesh,
                                           std::span<const double> u, double eps);

/// Sup-norm of the discrete residual; +inf if any node is singular.
double scalar_residual(const ScalarProblem& prob, const FieldProfile& profile, double eps = 0.0);

struct EpsilonLevel {
  double epsilon = 0.0;
  int newton_iterations = 0;
  double residual = 0.0;
  /// Sup-norm change from the previous level's profile.
  double change = 0.0;
  bool converged = false;
};

struct ScalarSolveOptions {
  /// Warm start (values at every node). Boundary entries are overwritten.
  std::optional<std::vector<double>> initial;
  /// Run the full epsilon ladder even when warm-started.
  bool full_ladder = false;
  int max_newton_per_level = 60;
};

struct ScalarSolveResult {
  FieldProfile profile;
  double final_epsilon = 0.0;
  std::vector<EpsilonLevel> ladder;
  int newton_iterations = 0;
  /// Nodes clipped back into the box over the whole solve, and the largest escape.
  std::size_t clipped_nodes = 0;
  double max_escape = 0.0;
};

/// Carries the last Newton iterate and the epsilon level at which damping underflowed.
class NewtonDivergenceError : public Error {
 public:
  NewtonDivergenceError(const std::string& message, std::vector<double> last_iterate,
                        double epsilon)
      : Error(ErrorCode::NewtonDivergence, message),
        last_iterate_(std::move(last_iterate)),
        epsilon_(epsilon) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  std::vector<double> last_iterate_;
  double epsilon_;
};

/// Central differences with damped Newton and epsilon-continuation
/// (1e-1, 1e-2, ..., down to p.epsilon, or to 1e-10 and then exactly 0 when p.epsilon = 0).
ScalarSolveResult solve_scalar_fd(const ScalarProblem& prob, const MeshPtr& mesh,
                                  const ScalarSolveOptions& options = {});

struct MonotoneOptions {
  int max_iterations = 500;
  bool record_iterates = true;
};

struct MonotoneResult {
  std::vector<FieldProfile> iterates;
  FieldProfile limit;
  int iterations = 0;
  /// Per-node shift K making u -> RHS(u) - K u non-increasing on the box.
  std::vector<double> shift;
  Monotonicity rhs_monotonicity = Monotonicity::flat;
  bool contained = false;
};

/// Iterates (D2 - K) u_{n+1} = RHS(u_n) - K u_n from the upper barrier. With K chosen
/// from the box, each step is order-preserving, so the sequence decreases to the maximal
/// solution below `upper`. K = 0 (plain frozen-RHS iteration) whenever the RHS is
/// non-increasing in the solved field.
MonotoneResult monotone_iterate(const ScalarProblem& prob, const Barrier& lower,
                                const Barrier& upper, const MeshPtr& mesh,
                                const MonotoneOptions& options = {});

enum class ComparisonStatus { confirmed, ordering_violated, premise_failure };

std::string_view to_string(ComparisonStatus s);

struct ComparisonVerdict {
  ComparisonStatus status = ComparisonStatus::premise_failure;
  /// Most negative value of the premise slack (>= 0 means the premise held everywhere).
  double premise_slack = 0.0;
  std::optional<double> premise_failure_x;
  std::optional<double> ordering_violation_x;
};

/// Evaluates v'' - f(v) >= w'' - f(w) (sign-flipped for decreasing f) at interior nodes
/// plus v <= w at both ends; when the premises hold, tests v <= w pointwise.
ComparisonVerdict comparison_check(const FieldProfile& v, const FieldProfile& w,
                                   const ScalarProblem& prob, bool rhs_increasing);

}  // namespace minsul
