#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "minsul/mesh.hpp"
#include "minsul/model.hpp"

namespace minsul {

enum class BarrierKind { lower, upper };

std::string_view to_string(BarrierKind k);

/// delta^2 x^{4/3}
struct PowerLaw {
  double delta = 1.0;
};
/// alpha + beta x
struct Affine {
  double alpha = 0.0;
  double beta = 0.0;
};
struct Zero {};
struct Const {
  double value = 0.0;
};

using BarrierForm = std::variant<PowerLaw, Affine, Zero, Const>;

/// Interval of anode values a barrier is compatible with (e.g. phi_L >= delta^2).
struct AnodeRange {
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();

  bool contains(double v, double rel_slack = 1e-12) const noexcept;
};

/// Closed-form lower or upper solution with an analytic second derivative.
class Barrier {
 public:
  Barrier(Field field, BarrierKind kind, BarrierForm form, AnodeRange anode = {});

  Field field() const noexcept { return field_; }
  BarrierKind kind() const noexcept { return kind_; }
  const BarrierForm& form() const noexcept { return form_; }
  const AnodeRange& anode_range() const noexcept { return anode_; }

  double value(double x) const noexcept;
  /// +inf for the power law at x = 0.
  double second_derivative(double x) const noexcept;
  std::string describe() const;

  FieldProfile sample(const MeshPtr& mesh) const;

 private:
  Field field_;
  BarrierKind kind_;
  BarrierForm form_;
  AnodeRange anode_;
};

/// Ordered quadruple (phi_0, a_0, phi^0, a^0) bounding the solution.
struct BarrierBox {
  Barrier phi_lower;
  Barrier phi_upper;
  Barrier a_lower;
  Barrier a_upper;
};

struct BoxCheck {
  bool ordered = true;
  bool boundary_ok = true;
  std::optional<double> first_unordered_x;
  std::vector<std::string> messages;

  bool valid() const noexcept { return ordered && boundary_ok; }
};

/// Pointwise ordering on the mesh plus the boundary inequalities at x = 0 and x = 1.
BoxCheck check_box(const BarrierBox& box, const DiodeParams& p, const Mesh& mesh);

/// Smallest delta > 0 with 4 delta^3 sqrt(2+delta^2) = 9 j_max (1+delta^2).
/// Throws BracketFailure if [1e-8, 1e8] does not bracket the root.
double solve_delta(double j_x_max);

/// 4 delta^3 sqrt(2+delta^2) - 9 j_max (1+delta^2).
double delta_gap(double delta, double j_x_max) noexcept;

/// Largest current the Child-Langmuir barrier admits for the anode potential:
/// 4 d^3 sqrt(2+d^2) / (9 (1+d^2)) at d^2 = phi_L.
double current_ceiling(double phi_L);

Barrier make_lower_phi(double delta);
Barrier make_upper_phi(double alpha, double beta);
Barrier make_lower_a();
/// a^0 = u^0: the affine phi upper barrier reused for the magnetic field.
Barrier make_upper_a(const Barrier& phi_upper);

/// The box used for the coupled solver: phi_0 = delta^2 x^{4/3} with delta from
/// j_x_max (or `delta_override`), phi^0 = alpha + beta x, and the a-field bracketed by
/// 0 and its chord a_L x (sign-aware).
BarrierBox make_system_box(const DiodeParams& p, std::optional<double> alpha = std::nullopt,
                           std::optional<double> beta = std::nullopt,
                           std::optional<double> delta_override = std::nullopt);

/// Default affine coefficient: max(1, delta^2, phi_L / 2).
double default_affine_coefficient(double delta, double phi_L);

enum class NodeStatus { ok, violated, indeterminate };

std::string_view to_string(NodeStatus s);

struct NodeMargin {
  double x = 0.0;
  double barrier_value = 0.0;
  double second_derivative = 0.0;
  /// Opposing field value used (the box extreme that makes the inequality hardest).
  double frozen = 0.0;
  double rhs = 0.0;
  /// rhs - barrier''. Lower barriers need margin <= 0, upper barriers margin >= 0.
  double margin = 0.0;
  Discriminant disc;
  NodeStatus status = NodeStatus::ok;
};

struct BarrierVerification {
  Field field = Field::phi;
  BarrierKind kind = BarrierKind::lower;
  std::string description;
  std::vector<NodeMargin> nodes;
  std::size_t violations = 0;
  std::size_t indeterminate = 0;
  double max_margin = -std::numeric_limits<double>::infinity();
  double min_margin = std::numeric_limits<double>::infinity();

  bool passed() const noexcept { return violations == 0 && indeterminate == 0; }
};

/// Checks the barrier's differential inequality at every interior mesh node with the
/// opposing field frozen at the box value that maximizes (lower) or minimizes (upper)
/// the right-hand side.
BarrierVerification verify_barrier(const Barrier& b, const BarrierBox& box, const DiodeParams& p,
                                   const Mesh& mesh);

/// Checks the barrier against an explicitly frozen opposing field (values at mesh nodes).
BarrierVerification verify_barrier_frozen(const Barrier& b, std::span<const double> frozen,
                                          const DiodeParams& p, const Mesh& mesh);

struct BoxVerification {
  BarrierVerification phi_lower;
  BarrierVerification phi_upper;
  BarrierVerification a_lower;
  BarrierVerification a_upper;
  BoxCheck box;

  bool passed() const noexcept {
    return phi_lower.passed() && phi_upper.passed() && a_lower.passed() && a_upper.passed() &&
           box.valid();
  }
};

BoxVerification verify_box(const BarrierBox& box, const DiodeParams& p, const Mesh& mesh);

/// A profile tagged with its role in an ordering chain, e.g. "phi_0(x_a1)".
struct ChainMember {
  std::string label;
  FieldProfile profile;
};

struct ChainViolation {
  std::string chain;
  std::string lower_label;
  std::string upper_label;
  std::size_t node = 0;
  double x = 0.0;
  double lower_value = 0.0;
  double upper_value = 0.0;
};

struct OrderingReport {
  std::optional<ChainViolation> first_violation;
  std::size_t checked_pairs = 0;

  bool holds() const noexcept { return !first_violation.has_value(); }
};

/// Strict pointwise ordering member[k] < member[k+1] on interior nodes, with relative
/// slack 1e-12. Throws MeshMismatch when members live on different meshes.
OrderingReport verify_ordering_chain(std::string_view chain_name,
                                     std::span<const ChainMember> members);

/// phi_0(x_a1) < phi_0(x_a2) < phi_0(x_a3) < phi^0(x_a2) < phi^0(x_a1) and
/// a_0(x_phi1) < a_0(x_phi2) < a^0(x_phi2) < a^0(x_phi1).
OrderingReport verify_ordering_chains(std::span<const ChainMember> phi_chain,
                                      std::span<const ChainMember> a_chain);

struct BoundCheck {
  double value = 0.0;
  double limit = 0.0;
  bool satisfied = false;
};

struct AnodeBounds {
  /// j_x <= F(phi_L)
  BoundCheck current;
  /// |a_L| <= sqrt(phi^0(1) (2 + phi^0(1)))
  BoundCheck magnetic_upper;
  /// |a_L| <= j_x / 2 (reported unsatisfied whenever j_x > j_x_max)
  BoundCheck magnetic_current;
  /// phi_L >= delta^2
  BoundCheck anode_potential;
};

AnodeBounds anode_bounds(const DiodeParams& p, double phi_upper_at_1, double delta);

}  // namespace minsul
