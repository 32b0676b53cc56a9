#include "minsul/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "minsul/errors.hpp"

namespace minsul {

namespace {

constexpr double kRelSlack = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool leq(double lhs, double rhs) {
  return lhs <= rhs + kRelSlack * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::string_view to_string(BarrierKind k) { return k == BarrierKind::lower ? "lower" : "upper"; }

std::string_view to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::ok: return "ok";
    case NodeStatus::violated: return "violated";
    case NodeStatus::indeterminate: return "indeterminate";
  }
  return "ok";
}

bool AnodeRange::contains(double v, double rel_slack) const noexcept {
  const double slack = rel_slack * std::max(1.0, std::abs(v));
  return v >= min - slack && v <= max + slack;
}

Barrier::Barrier(Field field, BarrierKind kind, BarrierForm form, AnodeRange anode)
    : field_(field), kind_(kind), form_(form), anode_(anode) {}

double Barrier::value(double x) const noexcept {
  return std::visit(
      overloaded{
          [x](const PowerLaw& f) { return f.delta * f.delta * std::pow(x, 4.0 / 3.0); },
          [x](const Affine& f) { return f.alpha + f.beta * x; },
          [](const Zero&) { return 0.0; },
          [](const Const& f) { return f.value; },
      },
      form_);
}

double Barrier::second_derivative(double x) const noexcept {
  return std::visit(overloaded{
                        [x](const PowerLaw& f) {
                          if (x <= 0.0) return std::numeric_limits<double>::infinity();
                          return (4.0 / 9.0) * f.delta * f.delta * std::pow(x, -2.0 / 3.0);
                        },
                        [](const Affine&) { return 0.0; },
                        [](const Zero&) { return 0.0; },
                        [](const Const&) { return 0.0; },
                    },
                    form_);
}

std::string Barrier::describe() const {
  std::string body = std::visit(
      overloaded{
          [](const PowerLaw& f) { return fmt(f.delta * f.delta) + " x^(4/3)"; },
          [](const Affine& f) { return fmt(f.alpha) + " + " + fmt(f.beta) + " x"; },
          [](const Zero&) { return std::string("0"); },
          [](const Const& f) { return fmt(f.value); },
      },
      form_);
  return std::string(to_string(kind_)) + " " + std::string(to_string(field_)) + " = " + body;
}

FieldProfile Barrier::sample(const MeshPtr& mesh) const {
  std::vector<double> v(mesh->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = value(mesh->x(i));
  return make_profile(mesh, field_, std::move(v));
}

BoxCheck check_box(const BarrierBox& box, const DiodeParams& p, const Mesh& mesh) {
  BoxCheck out;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double x = mesh.x(i);
    if (!leq(box.phi_lower.value(x), box.phi_upper.value(x)) ||
        !leq(box.a_lower.value(x), box.a_upper.value(x))) {
      out.ordered = false;
      out.first_unordered_x = x;
      out.messages.push_back("barriers out of order at x=" + fmt(x));
      break;
    }
  }
  auto boundary = [&](const Barrier& lo, const Barrier& hi, double target, const char* name) {
    if (!leq(lo.value(0.0), 0.0) || !leq(0.0, hi.value(0.0))) {
      out.boundary_ok = false;
      out.messages.push_back(std::string(name) + " barriers do not bracket 0 at the cathode");
    }
    if (!leq(lo.value(1.0), target) || !leq(target, hi.value(1.0))) {
      out.boundary_ok = false;
      out.messages.push_back(std::string(name) + " barriers do not bracket the anode value " +
                             fmt(target));
    }
    for (const Barrier* b : {&lo, &hi}) {
      if (!b->anode_range().contains(target)) {
        out.boundary_ok = false;
        out.messages.push_back(b->describe() + " is not admissible for anode value " +
                               fmt(target));
      }
    }
  };
  boundary(box.phi_lower, box.phi_upper, p.phi_L, "phi");
  boundary(box.a_lower, box.a_upper, p.a_L, "a");
  return out;
}

double delta_gap(double delta, double j_x_max) noexcept {
  const double d2 = delta * delta;
  return 4.0 * d2 * delta * std::sqrt(2.0 + d2) - 9.0 * j_x_max * (1.0 + d2);
}

double solve_delta(double j_x_max) {
  if (!(j_x_max > 0.0) || !std::isfinite(j_x_max)) {
    fail(ErrorCode::InvalidParameter, "solve_delta needs j_x_max > 0");
  }
  double lo = 1e-8;
  double hi = 1e8;
  if (!(delta_gap(lo, j_x_max) < 0.0) || !(delta_gap(hi, j_x_max) > 0.0)) {
    fail(ErrorCode::BracketFailure,
         "no sign change of the delta equation in [1e-8, 1e8] for j_x_max=" + fmt(j_x_max));
  }
  // The gap decreases then increases on (0, inf) and starts negative, so the
  // bracketed sign change is the unique positive root.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (delta_gap(mid, j_x_max) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
  }
  return hi;  // gap(hi) >= 0
}

double current_ceiling(double phi_L) {
  if (!(phi_L > 0.0)) return 0.0;
  const double d = std::sqrt(phi_L);
  return 4.0 * phi_L * d * std::sqrt(2.0 + phi_L) / (9.0 * (1.0 + phi_L));
}

Barrier make_lower_phi(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    fail(ErrorCode::InvalidParameter, "lower phi barrier needs delta > 0");
  }
  AnodeRange r;
  r.min = delta * delta;
  return Barrier(Field::phi, BarrierKind::lower, PowerLaw{delta}, r);
}

Barrier make_upper_phi(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    fail(ErrorCode::InvalidParameter, "upper phi barrier needs alpha, beta > 0");
  }
  AnodeRange r;
  r.max = alpha + beta;
  return Barrier(Field::phi, BarrierKind::upper, Affine{alpha, beta}, r);
}

Barrier make_lower_a() { return Barrier(Field::a, BarrierKind::lower, Zero{}); }

Barrier make_upper_a(const Barrier& phi_upper) {
  if (phi_upper.field() != Field::phi || phi_upper.kind() != BarrierKind::upper) {
    fail(ErrorCode::InvalidParameter, "make_upper_a expects the upper phi barrier");
  }
  return Barrier(Field::a, BarrierKind::upper, phi_upper.form());
}

double default_affine_coefficient(double delta, double phi_L) {
  return std::max({1.0, delta * delta, 0.5 * phi_L});
}

BarrierBox make_system_box(const DiodeParams& p, std::optional<double> alpha,
                           std::optional<double> beta, std::optional<double> delta_override) {
  const double delta = delta_override ? *delta_override : solve_delta(p.j_x_max);
  const double c = default_affine_coefficient(delta, p.phi_L);
  Barrier phi_lower = make_lower_phi(delta);
  Barrier phi_upper = make_upper_phi(alpha.value_or(c), beta.value_or(c));
  Barrier chord(Field::a, p.a_L >= 0.0 ? BarrierKind::upper : BarrierKind::lower,
                Affine{0.0, p.a_L});
  if (p.a_L >= 0.0) {
    return BarrierBox{phi_lower, phi_upper, make_lower_a(), chord};
  }
  return BarrierBox{phi_lower, phi_upper, chord, Barrier(Field::a, BarrierKind::upper, Zero{})};
}

namespace {

NodeMargin evaluate_margin(const Barrier& b, double x, double frozen, const DiodeParams& p) {
  NodeMargin m;
  m.x = x;
  m.barrier_value = b.value(x);
  m.second_derivative = b.second_derivative(x);
  m.frozen = frozen;
  const RhsPoint r = b.field() == Field::phi ? rhs_F(p.j_x, m.barrier_value, frozen, p.epsilon)
                                             : rhs_G(p.j_x, frozen, m.barrier_value, p.epsilon);
  m.disc = r.disc;
  if (r.singular || r.disc.sign == DiscriminantSign::negative) {
    m.rhs = r.value;
    m.margin = std::numeric_limits<double>::quiet_NaN();
    m.status = NodeStatus::indeterminate;
    return m;
  }
  m.rhs = r.value;
  m.margin = m.rhs - m.second_derivative;
  const double tol =
      kRelSlack * std::max({1.0, std::abs(m.rhs), std::abs(m.second_derivative)});
  const bool ok = b.kind() == BarrierKind::lower ? m.margin <= tol : m.margin >= -tol;
  m.status = ok ? NodeStatus::ok : NodeStatus::violated;
  return m;
}

// Frozen opposing value that makes the barrier's inequality hardest. F grows with |a|,
// and G(phi, a) shrinks in |G| as phi grows.
double extremal_frozen(const Barrier& b, const BarrierBox& box, double x) {
  if (b.field() == Field::phi) {
    const double lo = std::min(box.a_lower.value(x), box.a_upper.value(x));
    const double hi = std::max(box.a_lower.value(x), box.a_upper.value(x));
    if (b.kind() == BarrierKind::lower) return std::abs(lo) >= std::abs(hi) ? lo : hi;
    if (lo <= 0.0 && hi >= 0.0) return 0.0;
    return std::abs(lo) <= std::abs(hi) ? lo : hi;
  }
  const double lo = std::min(box.phi_lower.value(x), box.phi_upper.value(x));
  const double hi = std::max(box.phi_lower.value(x), box.phi_upper.value(x));
  const bool nonneg = b.value(x) >= 0.0;
  if (b.kind() == BarrierKind::lower) return nonneg ? lo : hi;
  return nonneg ? hi : lo;
}

void tally(BarrierVerification& v) {
  for (const NodeMargin& m : v.nodes) {
    if (m.status == NodeStatus::violated) ++v.violations;
    if (m.status == NodeStatus::indeterminate) {
      ++v.indeterminate;
      continue;
    }
    v.max_margin = std::max(v.max_margin, m.margin);
    v.min_margin = std::min(v.min_margin, m.margin);
  }
}

BarrierVerification start_report(const Barrier& b) {
  BarrierVerification v;
  v.field = b.field();
  v.kind = b.kind();
  v.description = b.describe();
  return v;
}

}  // namespace

BarrierVerification verify_barrier(const Barrier& b, const BarrierBox& box, const DiodeParams& p,
                                   const Mesh& mesh) {
  BarrierVerification v = start_report(b);
  v.nodes.reserve(mesh.interior_count());
  for (std::size_t i = 1; i + 1 < mesh.size(); ++i) {
    const double x = mesh.x(i);
    v.nodes.push_back(evaluate_margin(b, x, extremal_frozen(b, box, x), p));
  }
  tally(v);
  return v;
}

BarrierVerification verify_barrier_frozen(const Barrier& b, std::span<const double> frozen,
                                          const DiodeParams& p, const Mesh& mesh) {
  if (frozen.size() != mesh.size()) {
    fail(ErrorCode::MeshMismatch, "frozen field does not match the mesh");
  }
  BarrierVerification v = start_report(b);
  v.nodes.reserve(mesh.interior_count());
  for (std::size_t i = 1; i + 1 < mesh.size(); ++i) {
    v.nodes.push_back(evaluate_margin(b, mesh.x(i), frozen[i], p));
  }
  tally(v);
  return v;
}

BoxVerification verify_box(const BarrierBox& box, const DiodeParams& p, const Mesh& mesh) {
  return BoxVerification{
      verify_barrier(box.phi_lower, box, p, mesh), verify_barrier(box.phi_upper, box, p, mesh),
      verify_barrier(box.a_lower, box, p, mesh), verify_barrier(box.a_upper, box, p, mesh),
      check_box(box, p, mesh)};
}

OrderingReport verify_ordering_chain(std::string_view chain_name,
                                     std::span<const ChainMember> members) {
  OrderingReport report;
  for (std::size_t k = 1; k < members.size(); ++k) {
    require_same_mesh(members[0].profile, members[k].profile);
  }
  for (std::size_t k = 0; k + 1 < members.size(); ++k) {
    const auto& lo = members[k];
    const auto& hi = members[k + 1];
    ++report.checked_pairs;
    const std::size_t n = lo.profile.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double a = lo.profile.values[i];
      const double b = hi.profile.values[i];
      const double slack = kRelSlack * std::max({1.0, std::abs(a), std::abs(b)});
      if (!(b - a > slack)) {
        report.first_violation = ChainViolation{std::string(chain_name), lo.label, hi.label, i,
                                                lo.profile.mesh->x(i), a, b};
        return report;
      }
    }
  }
  return report;
}

OrderingReport verify_ordering_chains(std::span<const ChainMember> phi_chain,
                                      std::span<const ChainMember> a_chain) {
  if (!phi_chain.empty() && !a_chain.empty()) {
    require_same_mesh(phi_chain.front().profile, a_chain.front().profile);
  }
  OrderingReport phi = verify_ordering_chain("phi", phi_chain);
  if (!phi.holds()) return phi;
  OrderingReport a = verify_ordering_chain("a", a_chain);
  a.checked_pairs += phi.checked_pairs;
  return a;
}

AnodeBounds anode_bounds(const DiodeParams& p, double phi_upper_at_1, double delta) {
  AnodeBounds b;
  b.current.value = p.j_x;
  b.current.limit = current_ceiling(p.phi_L);
  b.current.satisfied = leq(b.current.value, b.current.limit);

  b.magnetic_upper.value = std::abs(p.a_L);
  b.magnetic_upper.limit = std::sqrt(std::max(0.0, phi_upper_at_1 * (2.0 + phi_upper_at_1)));
  b.magnetic_upper.satisfied = leq(b.magnetic_upper.value, b.magnetic_upper.limit);

  b.magnetic_current.value = std::abs(p.a_L);
  b.magnetic_current.limit = 0.5 * p.j_x;
  b.magnetic_current.satisfied =
      leq(b.magnetic_current.value, b.magnetic_current.limit) && leq(p.j_x, p.j_x_max);

  b.anode_potential.value = p.phi_L;
  b.anode_potential.limit = delta * delta;
  b.anode_potential.satisfied = leq(b.anode_potential.limit, b.anode_potential.value);
  return b;
}

}  // namespace minsul
