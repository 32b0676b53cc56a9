#include "minsul/scalar_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "minsul/tridiagonal.hpp"

namespace minsul {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxHalvings = 30;
constexpr int kPolishSteps = 3;

bool is_phi_case(ScalarCase c) {
  return c == ScalarCase::A1 || c == ScalarCase::A2 || c == ScalarCase::A3;
}

// Derivative of the case RHS with respect to the solved field.
double rhs_slope(ScalarCase c, const RhsPoint& r) { return is_phi_case(c) ? r.d_phi : r.d_a; }

void stencil(const Mesh& mesh, std::size_t i, double& cm, double& cp) {
  const double hm = mesh.h(i - 1);
  const double hp = mesh.h(i);
  cm = 2.0 / (hm * (hm + hp));
  cp = 2.0 / (hp * (hm + hp));
}

std::vector<double> epsilon_ladder(double eps_target) {
  std::vector<double> ladder;
  if (eps_target > 0.0) {
    for (double e = 1e-1; e > eps_target * (1.0 + 1e-12); e /= 10.0) ladder.push_back(e);
    ladder.push_back(eps_target);
    return ladder;
  }
  for (int k = 1; k <= 10; ++k) ladder.push_back(std::pow(10.0, -k));
  ladder.push_back(0.0);
  return ladder;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct Bounds {
  std::vector<double> lo;
  std::vector<double> hi;
};

Bounds box_values(const ScalarProblem& prob, const MeshPtr& mesh) {
  const std::size_t n = mesh->size();
  Bounds b{std::vector<double>(n, -kInf), std::vector<double>(n, kInf)};
  if (prob.lower) b.lo = prob.lower->sample(mesh).values;
  if (prob.upper) b.hi = prob.upper->sample(mesh).values;
  return b;
}

struct LevelOutcome {
  bool converged = false;
  bool damping_underflow = false;
  int iterations = 0;
  double residual = kInf;
};

class NewtonLevel {
 public:
  NewtonLevel(const ScalarProblem& prob, const Mesh& mesh, std::span<const double> frozen,
              const Bounds& box)
      : prob_(prob), mesh_(mesh), frozen_(frozen), box_(box) {}

  std::size_t clipped = 0;
  double max_escape = 0.0;

  LevelOutcome run(std::vector<double>& u, double eps, int max_iter) {
    LevelOutcome out;
    const std::size_t n = mesh_.size();
    std::vector<double> r = scalar_residual_vector(prob_, mesh_, u, eps);
    double rn = finite_norm(r);
    out.residual = sup_norm(r);
    const double tol = prob_.params.tol_residual;
    std::vector<double> sub(n - 3), diag(n - 2), sup(n - 3), step(n - 2), trial(n);
    // Below tol a few more full steps are nearly free and remove the algebraic error,
    // which would otherwise mask the discretization error on fine meshes.
    int polish = 0;
    double last_step = kInf;
    for (int it = 0; it < max_iter; ++it) {
      if (out.residual < tol) {
        out.converged = true;
        if (polish >= kPolishSteps || last_step <= 1e-14 * std::max(1.0, sup_norm(u))) return out;
        ++polish;
      }
      for (std::size_t i = 1; i + 1 < n; ++i) {
        double cm = 0.0;
        double cp = 0.0;
        stencil(mesh_, i, cm, cp);
        const RhsPoint f = scalar_rhs(prob_.scalar_case, prob_.params.j_x, u[i], frozen_[i], eps);
        diag[i - 1] = -(cm + cp) - (f.singular ? 0.0 : rhs_slope(prob_.scalar_case, f));
        if (i > 1) sub[i - 2] = cm;
        if (i + 2 < n) sup[i - 1] = cp;
        step[i - 1] = -r[i];
      }
      if (!solve_tridiagonal(sub, diag, sup, step)) break;

      double lambda = 1.0;
      bool accepted = false;
      std::size_t trial_clips = 0;
      double trial_escape = 0.0;
      for (int h = 0; h <= kMaxHalvings; ++h, lambda *= 0.5) {
        trial = u;
        trial_clips = 0;
        trial_escape = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
          double v = u[i] + lambda * step[i - 1];
          if (v < box_.lo[i]) {
            trial_escape = std::max(trial_escape, box_.lo[i] - v);
            v = box_.lo[i];
            ++trial_clips;
          } else if (v > box_.hi[i]) {
            trial_escape = std::max(trial_escape, v - box_.hi[i]);
            v = box_.hi[i];
            ++trial_clips;
          }
          trial[i] = v;
        }
        std::vector<double> rt = scalar_residual_vector(prob_, mesh_, trial, eps);
        const double tn = finite_norm(rt);
        if (tn < rn || (tn == 0.0 && rn == 0.0)) {
          u.swap(trial);
          r.swap(rt);
          rn = tn;
          accepted = true;
          break;
        }
      }
      ++out.iterations;
      if (!accepted && out.converged) return out;
      if (!accepted) {
        out.residual = sup_norm(r);
        out.converged = out.residual < tol;
        out.damping_underflow = !out.converged;
        return out;
      }
      clipped += trial_clips;
      max_escape = std::max(max_escape, trial_escape);
      last_step = lambda * sup_norm(step);
      out.residual = sup_norm(r);
    }
    out.converged = out.residual < tol;
    return out;
  }

 private:
  static double finite_norm(std::span<const double> r) {
    for (double v : r) {
      if (!std::isfinite(v)) return kInf;
    }
    return norm2(r);
  }

  const ScalarProblem& prob_;
  const Mesh& mesh_;
  std::span<const double> frozen_;
  const Bounds& box_;
};

std::vector<double> cold_start(const ScalarProblem& prob, const Mesh& mesh, const Bounds& box) {
  const std::size_t n = mesh.size();
  std::vector<double> u(n);
  const double target = prob.anode_value();
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::clamp(target * mesh.x(i), box.lo[i], box.hi[i]);
  }
  return u;
}

void set_boundary(const ScalarProblem& prob, std::vector<double>& u) {
  u.front() = 0.0;
  u.back() = prob.anode_value();
}

std::string describe_failure(const ScalarProblem& prob, double eps, double residual) {
  std::ostringstream os;
  os.precision(6);
  os << "case " << to_string(prob.scalar_case) << ": Newton damping underflow at epsilon=" << eps
     << " (residual " << residual << ")";
  return os.str();
}

}  // namespace

std::string_view to_string(ScalarCase c) {
  switch (c) {
    case ScalarCase::A1: return "A1";
    case ScalarCase::A2: return "A2";
    case ScalarCase::A3: return "A3";
    case ScalarCase::A4: return "A4";
    case ScalarCase::A5: return "A5";
  }
  return "A1";
}

Field solved_field(ScalarCase c) { return is_phi_case(c) ? Field::phi : Field::a; }

std::vector<double> ScalarProblem::frozen_values(const Mesh& mesh) const {
  if (const auto* b = std::get_if<Barrier>(&frozen)) {
    std::vector<double> out(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) out[i] = b->value(mesh.x(i));
    return out;
  }
  const auto& prof = std::get<FieldProfile>(frozen);
  if (!prof.mesh || !prof.mesh->same_nodes(mesh)) {
    fail(ErrorCode::MeshMismatch, "frozen profile lives on a different mesh");
  }
  return prof.values;
}

void ScalarProblem::validate() const {
  params.validate();
  const Field expected = field() == Field::phi ? Field::a : Field::phi;
  const Field got = std::holds_alternative<Barrier>(frozen)
                        ? std::get<Barrier>(frozen).field()
                        : std::get<FieldProfile>(frozen).field;
  if (got != expected) {
    fail(ErrorCode::InvalidParameter,
         std::string("case ") + std::string(to_string(scalar_case)) + " freezes the " +
             std::string(to_string(expected)) + " field");
  }
  if (scalar_case == ScalarCase::A1) {
    const auto* b = std::get_if<Barrier>(&frozen);
    if (b == nullptr || !std::holds_alternative<Zero>(b->form())) {
      fail(ErrorCode::InvalidParameter, "case A1 freezes a at the zero barrier");
    }
  }
  for (const auto* b : {lower ? &*lower : nullptr, upper ? &*upper : nullptr}) {
    if (b != nullptr && b->field() != field()) {
      fail(ErrorCode::InvalidParameter, "clipping barrier belongs to the other field");
    }
  }
}

ScalarProblem make_a1_problem(const DiodeParams& p, std::optional<Barrier> lower,
                              std::optional<Barrier> upper) {
  return make_scalar_problem(ScalarCase::A1, make_lower_a(), p, std::move(lower),
                             std::move(upper));
}

ScalarProblem make_scalar_problem(ScalarCase c, FrozenField frozen, const DiodeParams& p,
                                  std::optional<Barrier> lower, std::optional<Barrier> upper) {
  ScalarProblem prob;
  prob.scalar_case = c;
  prob.frozen = std::move(frozen);
  prob.params = p;
  prob.lower = std::move(lower);
  prob.upper = std::move(upper);
  prob.validate();
  return prob;
}

RhsPoint scalar_rhs(ScalarCase c, double j_x, double u, double z, double eps) noexcept {
  return is_phi_case(c) ? rhs_F(j_x, u, z, eps) : rhs_G(j_x, z, u, eps);
}

double second_difference(const Mesh& mesh, std::span<const double> u, std::size_t i) noexcept {
  double cm = 0.0;
  double cp = 0.0;
  stencil(mesh, i, cm, cp);
  // Differences first: exact for affine data up to one rounding per product.
  return cm * (u[i - 1] - u[i]) + cp * (u[i + 1] - u[i]);
}

std::vector<double> scalar_residual_vector(const ScalarProblem& prob, const Mesh& mesh,
                                           std::span<const double> u, double eps) {
  const std::vector<double> z = prob.frozen_values(mesh);
  std::vector<double> r(mesh.size(), 0.0);
  for (std::size_t i = 1; i + 1 < mesh.size(); ++i) {
    const RhsPoint f = scalar_rhs(prob.scalar_case, prob.params.j_x, u[i], z[i], eps);
    // A negative radicand is outside the physical branch; treat it like the singular set.
    r[i] = f.singular || f.disc.value < 0.0 ? kInf : second_difference(mesh, u, i) - f.value;
  }
  return r;
}

double scalar_residual(const ScalarProblem& prob, const FieldProfile& profile, double eps) {
  if (!profile.mesh) fail(ErrorCode::MeshMismatch, "profile has no mesh");
  return sup_norm(scalar_residual_vector(prob, *profile.mesh, profile.values, eps));
}

ScalarSolveResult solve_scalar_fd(const ScalarProblem& prob, const MeshPtr& mesh,
                                  const ScalarSolveOptions& options) {
  prob.validate();
  if (!mesh || mesh->size() < kMinMeshNodes) {
    fail(ErrorCode::InvalidParameter, "scalar solver needs a mesh with at least 33 nodes");
  }
  const std::vector<double> frozen = prob.frozen_values(*mesh);
  const Bounds box = box_values(prob, mesh);

  std::vector<double> u;
  if (options.initial) {
    if (options.initial->size() != mesh->size()) {
      fail(ErrorCode::MeshMismatch, "warm start has the wrong number of nodes");
    }
    u = *options.initial;
  } else {
    u = cold_start(prob, *mesh, box);
  }
  set_boundary(prob, u);

  const double eps_target = prob.params.epsilon;
  const std::vector<double> full = epsilon_ladder(eps_target);
  const bool warm = options.initial.has_value() && !options.full_ladder;

  ScalarSolveResult result;
  NewtonLevel newton(prob, *mesh, frozen, box);

  auto run_ladder = [&](std::span<const double> ladder, std::vector<double> state,
                        std::vector<EpsilonLevel>& record, LevelOutcome& last) {
    for (double eps : ladder) {
      const std::vector<double> before = state;
      last = newton.run(state, eps, options.max_newton_per_level);
      EpsilonLevel lvl;
      lvl.epsilon = eps;
      lvl.newton_iterations = last.iterations;
      lvl.residual = last.residual;
      lvl.converged = last.converged;
      double change = 0.0;
      for (std::size_t i = 0; i < state.size(); ++i) {
        change = std::max(change, std::abs(state[i] - before[i]));
      }
      lvl.change = change;
      record.push_back(lvl);
      result.newton_iterations += last.iterations;
    }
    return state;
  };

  std::vector<EpsilonLevel> record;
  LevelOutcome last;
  std::vector<double> solved;
  if (warm) {
    const double only[] = {eps_target};
    solved = run_ladder(only, u, record, last);
    if (!last.converged) {
      record.clear();
      std::vector<double> restart = cold_start(prob, *mesh, box);
      set_boundary(prob, restart);
      solved = run_ladder(full, restart, record, last);
    }
  } else {
    solved = run_ladder(full, u, record, last);
  }

  if (!last.converged) {
    const bool any = std::any_of(record.begin(), record.end(),
                                 [](const EpsilonLevel& l) { return l.converged; });
    if (last.damping_underflow || any) {
      throw NewtonDivergenceError(describe_failure(prob, eps_target, last.residual), solved,
                                  eps_target);
    }
    fail(ErrorCode::NoSolution, std::string("case ") + std::string(to_string(prob.scalar_case)) +
                                    ": continuation failed at every epsilon level");
  }

  result.ladder = std::move(record);
  result.final_epsilon = eps_target;
  result.clipped_nodes = newton.clipped;
  result.max_escape = newton.max_escape;
  result.profile = make_profile(mesh, prob.field(), std::move(solved));
  result.profile.residual = scalar_residual(prob, result.profile, eps_target);
  return result;
}

MonotoneResult monotone_iterate(const ScalarProblem& prob, const Barrier& lower,
                                const Barrier& upper, const MeshPtr& mesh,
                                const MonotoneOptions& options) {
  prob.validate();
  if (!mesh || mesh->size() < kMinMeshNodes) {
    fail(ErrorCode::InvalidParameter, "monotone iteration needs a mesh with at least 33 nodes");
  }
  if (lower.field() != prob.field() || upper.field() != prob.field()) {
    fail(ErrorCode::InvalidParameter, "barriers belong to the other field");
  }
  const std::size_t n = mesh->size();
  const std::vector<double> z = prob.frozen_values(*mesh);
  const std::vector<double> lo = lower.sample(mesh).values;
  const std::vector<double> hi = upper.sample(mesh).values;
  const double j = prob.params.j_x;
  const double eps = prob.params.epsilon;

  MonotoneResult res;
  res.shift.assign(n, 0.0);
  int pos = 0;
  int neg = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double kmax = 0.0;
    for (int m = 0; m <= 8; ++m) {
      const double s = lo[i] + (hi[i] - lo[i]) * m / 8.0;
      const RhsPoint f = scalar_rhs(prob.scalar_case, j, s, z[i], eps);
      if (f.singular) continue;
      const double d = rhs_slope(prob.scalar_case, f);
      if (d > 0.0) ++pos;
      if (d < 0.0) ++neg;
      kmax = std::max(kmax, d);
    }
    res.shift[i] = kmax;
  }
  res.rhs_monotonicity = pos > 0 && neg > 0 ? Monotonicity::mixed
                         : pos > 0          ? Monotonicity::increasing
                         : neg > 0          ? Monotonicity::decreasing
                                            : Monotonicity::flat;

  std::vector<double> sub(n - 3), diag(n - 2), sup(n - 3);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double cm = 0.0;
    double cp = 0.0;
    stencil(*mesh, i, cm, cp);
    diag[i - 1] = -(cm + cp) - res.shift[i];
    if (i > 1) sub[i - 2] = cm;
    if (i + 2 < n) sup[i - 1] = cp;
  }

  std::vector<double> u = hi;
  if (options.record_iterates) res.iterates.push_back(make_profile(mesh, prob.field(), u));
  const double anode = prob.anode_value();
  std::vector<double> rhs(n - 2);
  bool converged = false;
  for (int it = 1; it <= options.max_iterations; ++it) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const RhsPoint f = scalar_rhs(prob.scalar_case, j, u[i], z[i], eps);
      if (f.singular || f.disc.value < 0.0) {
        std::ostringstream os;
        os << "iterate reached the singular set at x=" << mesh->x(i);
        fail(ErrorCode::SingularPoint, os.str());
      }
      rhs[i - 1] = f.value - res.shift[i] * u[i];
    }
    double cm = 0.0;
    double cp = 0.0;
    stencil(*mesh, n - 2, cm, cp);
    rhs[n - 3] -= cp * anode;
    // Cathode value is 0 in every case, so the first row needs no correction.
    if (!solve_tridiagonal(sub, diag, sup, rhs)) {
      fail(ErrorCode::MonotonicityViolation, "singular linear sub-problem");
    }
    std::vector<double> next(n);
    next.front() = 0.0;
    next.back() = anode;
    std::copy(rhs.begin(), rhs.end(), next.begin() + 1);

    double change = 0.0;
    const double scale = std::max(1.0, sup_norm(u));
    for (std::size_t i = 0; i < n; ++i) {
      if (next[i] > u[i] + 1e-11 * scale) {
        std::ostringstream os;
        os.precision(17);
        os << "iterate " << it << " increased at x=" << mesh->x(i) << " by " << next[i] - u[i];
        fail(ErrorCode::MonotonicityViolation, os.str());
      }
      change = std::max(change, std::abs(next[i] - u[i]));
    }
    u.swap(next);
    res.iterations = it;
    if (options.record_iterates) res.iterates.push_back(make_profile(mesh, prob.field(), u));
    if (change < prob.params.tol_iter) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    fail(ErrorCode::MaxIterations, "monotone iteration did not settle within the sweep limit");
  }

  res.contained = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double slack = 1e-10 * std::max(1.0, std::abs(u[i]));
    if (u[i] < lo[i] - slack || u[i] > hi[i] + slack) res.contained = false;
  }
  res.limit = make_profile(mesh, prob.field(), u);
  res.limit.residual = scalar_residual(prob, res.limit, eps);
  return res;
}

std::string_view to_string(ComparisonStatus s) {
  switch (s) {
    case ComparisonStatus::confirmed: return "confirmed";
    case ComparisonStatus::ordering_violated: return "ordering_violated";
    case ComparisonStatus::premise_failure: return "premise_failure";
  }
  return "premise_failure";
}

ComparisonVerdict comparison_check(const FieldProfile& v, const FieldProfile& w,
                                   const ScalarProblem& prob, bool rhs_increasing) {
  require_same_mesh(v, w);
  const Mesh& mesh = *v.mesh;
  const std::size_t n = mesh.size();
  const std::vector<double> z = prob.frozen_values(mesh);
  const double j = prob.params.j_x;
  const double eps = prob.params.epsilon;
  // Increasing f: v'' - f(v) >= w'' - f(w) and v <= w at the ends give v <= w.
  // Decreasing f: both sides of the premise multiplied by -1, conclusion reversed.
  const double sign = rhs_increasing ? 1.0 : -1.0;

  ComparisonVerdict out;
  out.premise_slack = kInf;
  auto note_premise = [&](double slack, double x, double scale) {
    out.premise_slack = std::min(out.premise_slack, slack);
    const double tol = 10.0 * prob.params.tol_residual + 1e-12 * scale;
    if (slack < -tol && !out.premise_failure_x) out.premise_failure_x = x;
  };

  note_premise(sign * (w.values.front() - v.values.front()), 0.0, 1.0);
  note_premise(sign * (w.values.back() - v.values.back()), 1.0, 1.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const RhsPoint fv = scalar_rhs(prob.scalar_case, j, v.values[i], z[i], eps);
    const RhsPoint fw = scalar_rhs(prob.scalar_case, j, w.values[i], z[i], eps);
    if (fv.singular || fw.singular) {
      if (!out.premise_failure_x) out.premise_failure_x = mesh.x(i);
      out.premise_slack = std::min(out.premise_slack, -kInf);
      continue;
    }
    const double lv = second_difference(mesh, v.values, i) - fv.value;
    const double lw = second_difference(mesh, w.values, i) - fw.value;
    const double scale = std::abs(lv) + std::abs(lw) + std::abs(fv.value) + std::abs(fw.value);
    note_premise(sign * (lv - lw), mesh.x(i), scale);
  }
  if (out.premise_failure_x) {
    out.status = ComparisonStatus::premise_failure;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = sign * (w.values[i] - v.values[i]);
    const double tol = 1e-9 * std::max(1.0, std::abs(w.values[i]));
    if (gap < -tol) {
      out.ordering_violation_x = mesh.x(i);
      out.status = ComparisonStatus::ordering_violated;
      return out;
    }
  }
  out.status = ComparisonStatus::confirmed;
  return out;
}

}  // namespace minsul
