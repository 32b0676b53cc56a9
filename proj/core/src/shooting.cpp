#include "minsul/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "minsul/errors.hpp"

namespace minsul {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Root of q^2 (1 + q/3) = m for m >= 0. Newton from the upper bound min(sqrt m, cbrt 3m)
// converges monotonically because the cubic is convex on q >= 0.
double energy_parameter(double m) {
  if (m <= 0.0) return 0.0;
  double q = std::min(std::sqrt(m), std::cbrt(3.0 * m));
  for (int it = 0; it < 200; ++it) {
    const double g = q * q * (1.0 + q / 3.0) - m;
    const double dg = q * (2.0 + q);
    const double next = q - g / dg;
    if (!(next < q) || q - next <= 1e-16 * q) {
      q = std::min(q, std::max(next, 0.0));
      break;
    }
    q = next;
  }
  return q;
}

std::vector<double> merged_outputs(const MeshPtr& mesh, double x0, std::vector<double> extra) {
  std::vector<double> pts = std::move(extra);
  if (mesh) {
    for (double x : mesh->nodes()) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double x) { return x <= x0 || x > 1.0; }),
            pts.end());
  return pts;
}

void append(Trajectory& t, double x, double phi, double dphi, double a, double da, double eps) {
  t.x.push_back(x);
  t.phi.push_back(phi);
  t.dphi.push_back(dphi);
  t.a.push_back(a);
  t.da.push_back(da);
  t.disc.push_back(discriminant(phi + eps, a).value);
}

// Value of the trajectory column at an exact sample abscissa.
std::optional<double> sample_at(const Trajectory& t, const std::vector<double>& column, double x) {
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    if (t.x[i] == x) return column[i];
  }
  return std::nullopt;
}

}  // namespace

void ShootingParams::validate() const {
  if (!(eta > 0.0 && eta <= 0.1)) fail(ErrorCode::InvalidParameter, "eta must lie in (0, 0.1]");
  if (!std::isfinite(beta) || !std::isfinite(c) || !std::isfinite(slope)) {
    fail(ErrorCode::InvalidParameter, "shooting slopes must be finite");
  }
  if (!(j_x >= 0.0) || !std::isfinite(j_x)) {
    fail(ErrorCode::InvalidParameter, "j_x must be finite and >= 0");
  }
  if (slope < 0.0) fail(ErrorCode::InvalidParameter, "phi'(0) must be >= 0");
}

std::string_view to_string(ShootingMode m) {
  return m == ShootingMode::space_charge_limited ? "space_charge_limited" : "fixed_current";
}

AsymptoticStart asymptotic_start(const DiodeParams& p, double eta, double slope) {
  const double j = p.j_x;
  if (j == 0.0) return {slope * eta, slope};
  if (slope == 0.0) {
    const double k = std::pow(9.0 * j / (4.0 * std::sqrt(2.0)), 2.0 / 3.0);
    return {k * std::pow(eta, 4.0 / 3.0), 4.0 / 3.0 * k * std::cbrt(eta)};
  }
  // First integral phi'^2 = s^2 + c sqrt(phi) with c = 2 sqrt2 j, parametrized by
  // sqrt(phi) = r s^2 / c, r = q (2 + q):  x = (4 s^3 / c^2) q^2 (1 + q/3).
  const double c = 2.0 * std::sqrt(2.0) * j;
  const double s = slope;
  const double m = eta * c * c / (4.0 * s * s * s);
  const double q = energy_parameter(m);
  const double r = q * (2.0 + q);
  const double root = r * s * s / c;
  return {root * root, s * (1.0 + q)};
}

IvpState launch_state(const DiodeParams& p, const ShootingParams& s) {
  s.validate();
  const AsymptoticStart st = asymptotic_start(p, s.eta, s.slope);
  IvpState state;
  state.x = s.eta;
  state.y = {st.phi, st.dphi, s.beta * s.eta, s.beta};
  state.disc_sign = discriminant(st.phi + p.epsilon, s.beta * s.eta).sign;
  return state;
}

Trajectory integrate_ivp(const IvpState& start, const DiodeParams& p, const IvpOptions& options) {
  if (!(start.x >= 0.0 && start.x < 1.0)) {
    fail(ErrorCode::InvalidParameter, "launch abscissa must lie in [0, 1)");
  }
  const double eps = p.epsilon;
  const double j = p.j_x;
  if (discriminant(start.y[0] + eps, start.y[2]).sign != DiscriminantSign::positive) {
    fail(ErrorCode::SingularPoint, "launch state is not inside the positive discriminant region");
  }
  OdeRhs rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    const RhsPoint f = rhs_F(j, y[0], y[2], eps);
    const RhsPoint g = rhs_G(j, y[0], y[2], eps);
    if (f.singular || g.singular) return false;
    dy[0] = y[1];
    dy[1] = f.value;
    dy[2] = y[3];
    dy[3] = g.value;
    return true;
  };
  OdeEvent event = [&](double, std::span<const double> y) {
    return discriminant(y[0] + eps, y[2]).value;
  };
  OdeOptions o;
  o.rtol = options.rtol;
  o.atol = options.atol;
  if (start.step > 0.0) o.initial_step = start.step;
  o.output_points = merged_outputs(nullptr, start.x, options.output_points);
  const OdeResult r = integrate_dopri(rhs, start.x, start.y, 1.0, o, event);

  Trajectory t;
  append(t, start.x, start.y[0], start.y[1], start.y[2], start.y[3], eps);
  for (const auto& s : r.outputs) append(t, s.x, s.y[0], s.y[1], s.y[2], s.y[3], eps);
  if (t.x.back() != r.last.x) {
    append(t, r.last.x, r.last.y[0], r.last.y[1], r.last.y[2], r.last.y[3], eps);
  }
  t.reason = r.reason;
  t.steps = r.accepted_steps;
  return t;
}

Trajectory forward_shot(const DiodeParams& p, const ShootingParams& s, const IvpOptions& options) {
  return integrate_ivp(launch_state(p, s), p, options);
}

// ---------------------------------------------------------------------------------------
// Scalar a-shooting

ScalarShot shoot_scalar_a(const ScalarProblem& prob, double c, const MeshPtr& mesh,
                          const IvpOptions& options, double eta) {
  if (prob.field() != Field::a) {
    fail(ErrorCode::InvalidParameter, "scalar shooting applies to the a-equation");
  }
  const double j = prob.params.j_x;
  const double eps = prob.params.epsilon;
  std::function<double(double)> phi_at;
  if (const auto* b = std::get_if<Barrier>(&prob.frozen)) {
    phi_at = [b](double x) { return b->value(x); };
  } else {
    const FieldProfile& prof = std::get<FieldProfile>(prob.frozen);
    phi_at = [&prof](double x) { return prof.interpolate(x); };
  }
  const double x0 = phi_at(0.0) + eps > 0.0 ? 0.0 : eta;
  const std::array<double, 2> y0{c * x0, c};

  OdeRhs rhs = [&](double x, std::span<const double> y, std::span<double> dy) {
    const RhsPoint g = rhs_G(j, phi_at(x), y[0], eps);
    if (g.singular) return false;
    dy[0] = y[1];
    dy[1] = g.value;
    return true;
  };
  OdeEvent event = [&](double x, std::span<const double> y) {
    return discriminant(phi_at(x) + eps, y[0]).value;
  };
  OdeOptions o;
  o.rtol = options.rtol;
  o.atol = options.atol;
  o.output_points = merged_outputs(mesh, x0, options.output_points);

  ScalarShot shot;
  shot.c = c;
  const OdeResult r = integrate_dopri(rhs, x0, y0, 1.0, o, event);
  Trajectory& t = shot.trajectory;
  auto push = [&](double x, double a, double da) { append(t, x, phi_at(x), kNaN, a, da, eps); };
  push(x0, y0[0], y0[1]);
  for (const auto& s : r.outputs) push(s.x, s.y[0], s.y[1]);
  if (t.x.back() != r.last.x) push(r.last.x, r.last.y[0], r.last.y[1]);
  t.reason = r.reason;
  t.steps = r.accepted_steps;
  shot.residual = t.reached_end() ? t.a_end() - prob.anode_value() : kNaN;

  if (mesh && t.reached_end()) {
    std::vector<double> v(mesh->size());
    for (std::size_t i = 0; i < mesh->size(); ++i) {
      const double x = mesh->x(i);
      if (x <= x0) {
        v[i] = c * x;
      } else {
        v[i] = *sample_at(t, t.a, x);
      }
    }
    shot.profile = make_profile(mesh, Field::a, std::move(v));
  }
  return shot;
}

ScalarShootingResult solve_shoot_scalar_a(const ScalarProblem& prob, const MeshPtr& mesh,
                                          double tol) {
  prob.validate();
  const double target = prob.anode_value();
  const double sigma = target < 0.0 ? -1.0 : 1.0;
  const double goal = std::abs(target);
  const double ftol = tol * std::max(1.0, goal);
  ScalarShootingResult out;
  std::vector<std::pair<double, double>> audit;

  // "Too high": the shot overshoots a_L or cannot reach x = 1.
  auto shoot = [&](double c, bool& high) {
    ++out.shots;
    ScalarShot s = shoot_scalar_a(prob, sigma * c);
    if (!s.reached_end()) {
      high = true;
      return s;
    }
    audit.emplace_back(c, sigma * s.trajectory.a_end());
    high = sigma * s.trajectory.a_end() >= goal;
    return s;
  };
  auto finish = [&](double c) {
    out.c = sigma * c;
    ScalarShot s = shoot_scalar_a(prob, out.c, mesh);
    ++out.shots;
    if (mesh) {
      if (!s.profile) fail(ErrorCode::NoBracket, "final shot did not reach the anode");
      out.profile = *s.profile;
      out.profile.values.back() = target;
    }
    std::sort(audit.begin(), audit.end());
    for (std::size_t k = 1; k < audit.size(); ++k) {
      if (audit[k].first > audit[k - 1].first && !(audit[k].second > audit[k - 1].second)) {
        out.monotone = false;
      }
    }
    return out;
  };

  if (goal == 0.0) return finish(0.0);

  double lo = 0.0;
  double hi = goal;
  bool high = false;
  ScalarShot s_hi = shoot(hi, high);
  for (int k = 0; !high && k < 200; ++k) {
    if (s_hi.reached_end() && std::abs(s_hi.residual) < ftol) return finish(hi);
    lo = hi;
    hi *= 2.0;
    s_hi = shoot(hi, high);
  }
  if (!high) fail(ErrorCode::NoBracket, "no slope overshoots the anode value");

  double best_c = 0.0;
  double best_res = std::numeric_limits<double>::infinity();
  if (s_hi.reached_end()) {
    best_c = hi;
    best_res = std::abs(s_hi.residual);
  }
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    bool mid_high = false;
    const ScalarShot s = shoot(mid, mid_high);
    if (s.reached_end() && std::abs(s.residual) < best_res) {
      best_res = std::abs(s.residual);
      best_c = mid;
    }
    if (s.reached_end() && std::abs(s.residual) < ftol) return finish(mid);
    (mid_high ? hi : lo) = mid;
  }
  if (best_res < 1e3 * ftol) return finish(best_c);
  std::ostringstream os;
  os.precision(10);
  os << "no slope reaches a_L=" << target << " before the discriminant vanishes (closest miss "
     << best_res << ")";
  fail(ErrorCode::NoBracket, os.str());
}

// ---------------------------------------------------------------------------------------
// Two-parameter shooting

namespace {

struct Shot {
  bool ok = false;
  double r_phi = 0.0;
  double r_a = 0.0;
  double norm() const { return std::max(std::abs(r_phi), std::abs(r_a)); }
};

class SystemShooter {
 public:
  SystemShooter(const DiodeParams& p, const SystemShootOptions& o, double eta)
      : p_(p), o_(o), eta_(eta) {}

  int trials = 0;
  int event_trials = 0;

  ShootingParams params(double beta, double q) const {
    ShootingParams s;
    s.beta = beta;
    s.eta = eta_;
    if (o_.mode == ShootingMode::space_charge_limited) {
      s.j_x = q;
    } else {
      s.j_x = p_.j_x;
      s.slope = q;
    }
    return s;
  }

  DiodeParams diode(double q) const {
    DiodeParams d = p_;
    if (o_.mode == ShootingMode::space_charge_limited) {
      d.j_x = q;
      d.j_x_max = std::max(d.j_x_max, q);
    }
    return d;
  }

  bool admissible(double q) const {
    return std::isfinite(q) &&
           (o_.mode == ShootingMode::space_charge_limited ? q > 0.0 : q >= 0.0);
  }

  Trajectory run(double beta, double q, const std::vector<double>& outputs) const {
    IvpOptions io = o_.ivp;
    io.output_points = outputs;
    return integrate_ivp(launch_state(diode(q), params(beta, q)), diode(q), io);
  }

  Shot eval(double beta, double q) {
    Shot s;
    if (!admissible(q) || !std::isfinite(beta)) return s;
    ++trials;
    Trajectory t;
    try {
      t = run(beta, q, {});
    } catch (const Error&) {
      ++event_trials;
      return s;
    }
    if (!t.reached_end()) {
      ++event_trials;
      return s;
    }
    s.ok = true;
    s.r_phi = t.phi_end() - p_.phi_L;
    s.r_a = t.a_end() - p_.a_L;
    return s;
  }

 private:
  const DiodeParams& p_;
  const SystemShootOptions& o_;
  double eta_;
};

struct Solved {
  double beta = 0.0;
  double q = 0.0;
  int iterations = 0;
  bool bisection = false;
};

enum class Failure { none, jacobian, stall };

Failure newton(SystemShooter& sh, const SystemShootOptions& o, double& beta, double& q,
               int& iterations) {
  Shot cur = sh.eval(beta, q);
  // Pull a failing guess toward the a = 0 branch before giving up.
  for (int k = 0; !cur.ok && k < 20; ++k) {
    beta *= 0.5;
    cur = sh.eval(beta, q);
  }
  if (!cur.ok) return Failure::stall;
  for (iterations = 0; iterations < o.max_iterations; ++iterations) {
    if (cur.norm() < o.tol) return Failure::none;
    double J[2][2];
    const double x[2] = {beta, q};
    for (int col = 0; col < 2; ++col) {
      double h = 1e-7 * std::max(1.0, std::abs(x[col]));
      double xp[2] = {x[0], x[1]};
      xp[col] += h;
      Shot s = sh.eval(xp[0], xp[1]);
      if (!s.ok) {
        h = -h;
        xp[col] = x[col] + h;
        s = sh.eval(xp[0], xp[1]);
      }
      if (!s.ok) return Failure::stall;
      J[0][col] = (s.r_phi - cur.r_phi) / h;
      J[1][col] = (s.r_a - cur.r_a) / h;
    }
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const double scale = (std::abs(J[0][0]) + std::abs(J[0][1])) *
                         (std::abs(J[1][0]) + std::abs(J[1][1]));
    if (!(std::abs(det) > 1e-13 * scale) || !std::isfinite(det)) return Failure::jacobian;
    const double d0 = -(J[1][1] * cur.r_phi - J[0][1] * cur.r_a) / det;
    const double d1 = -(-J[1][0] * cur.r_phi + J[0][0] * cur.r_a) / det;
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= 30; ++h, lambda *= 0.5) {
      const Shot s = sh.eval(beta + lambda * d0, q + lambda * d1);
      if (s.ok && s.norm() < cur.norm()) {
        beta += lambda * d0;
        q += lambda * d1;
        cur = s;
        accepted = true;
        break;
      }
    }
    if (!accepted) return cur.norm() < o.tol ? Failure::none : Failure::stall;
  }
  return cur.norm() < o.tol ? Failure::none : Failure::stall;
}

// Inner bisection on beta at fixed q: a(1) is increasing in beta.
std::optional<double> inner_beta(SystemShooter& sh, double q, double a_L, double tol) {
  if (a_L == 0.0) return 0.0;
  const double sigma = a_L < 0.0 ? -1.0 : 1.0;
  const double goal = std::abs(a_L);
  auto high = [&](double b, Shot& s) {
    s = sh.eval(sigma * b, q);
    return !s.ok || sigma * (s.r_a + a_L) >= goal;
  };
  Shot s;
  double lo = 0.0;
  double hi = goal;
  int k = 0;
  while (!high(hi, s) && k++ < 100) {
    lo = hi;
    hi *= 2.0;
  }
  if (k >= 100) return std::nullopt;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool h = high(mid, s);
    if (s.ok && std::abs(s.r_a) < tol) return sigma * mid;
    (h ? hi : lo) = mid;
    if (hi - lo < 1e-16 * hi) break;
  }
  return std::nullopt;
}

std::optional<Solved> nested_bisection(SystemShooter& sh, const DiodeParams& p,
                                       const SystemShootOptions& o, double q0) {
  // phi(1) rises with phi'(0) and falls with j_x.
  const double dir = o.mode == ShootingMode::fixed_current ? 1.0 : -1.0;
  double beta_last = 0.0;
  auto h = [&](double q) -> std::optional<double> {
    const auto b = inner_beta(sh, q, p.a_L, o.tol);
    if (!b) return std::nullopt;
    const Shot s = sh.eval(*b, q);
    if (!s.ok) return std::nullopt;
    beta_last = *b;
    return dir * s.r_phi;
  };
  double lo = o.mode == ShootingMode::space_charge_limited ? 1e-12 : 0.0;
  double hi = std::max(q0, 1e-3);
  auto f_hi = h(hi);
  int k = 0;
  while ((!f_hi || *f_hi < 0.0) && k++ < 60) {
    if (f_hi) lo = hi;
    hi *= 2.0;
    f_hi = h(hi);
  }
  if (!f_hi || *f_hi < 0.0) return std::nullopt;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto f = h(mid);
    if (f && std::abs(*f) < o.tol) return Solved{beta_last, mid, it, true};
    if (!f || *f > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo < 1e-16 * hi) break;
  }
  return std::nullopt;
}

}  // namespace

SystemShootResult shoot_system(const DiodeParams& p, double beta_guess, double second_guess,
                               const MeshPtr& mesh, const SystemShootOptions& options) {
  if (!std::isfinite(p.phi_L) || !std::isfinite(p.a_L)) {
    fail(ErrorCode::InvalidParameter, "anode targets must be finite");
  }
  if (options.mode == ShootingMode::fixed_current && !(p.j_x >= 0.0)) {
    fail(ErrorCode::InvalidParameter, "j_x must be >= 0");
  }

  auto solve_at = [&](double eta, double beta, double q, SystemShooter& sh) -> Solved {
    Solved s{beta, q, 0, false};
    const Failure f = newton(sh, options, s.beta, s.q, s.iterations);
    if (f == Failure::none) return s;
    if (auto nb = nested_bisection(sh, p, options, std::max(q, 0.0))) return *nb;
    if (sh.trials > 0 && sh.event_trials == sh.trials) {
      fail(ErrorCode::EventAbort, "every trial trajectory hit the discriminant zero");
    }
    if (f == Failure::jacobian) {
      fail(ErrorCode::JacobianSingular, "shooting Jacobian is singular near the solution");
    }
    std::ostringstream os;
    os << "two-parameter shooting did not converge (eta=" << eta << ")";
    fail(ErrorCode::NoConvergence, os.str());
  };

  double eta = options.eta;
  SystemShooter first(p, options, eta);
  Solved sol = solve_at(eta, beta_guess, second_guess, first);
  double change = 0.0;
  if (options.richardson) {
    for (int k = 0; k < 8; ++k) {
      SystemShooter a(p, options, eta);
      SystemShooter b(p, options, eta / 2.0);
      const Solved half = solve_at(eta / 2.0, sol.beta, sol.q, b);
      const Trajectory ta = a.run(sol.beta, sol.q, {0.1});
      const Trajectory tb = b.run(half.beta, half.q, {0.1});
      change = std::abs(*sample_at(ta, ta.phi, 0.1) - *sample_at(tb, tb.phi, 0.1));
      sol = Solved{half.beta, half.q, sol.iterations + half.iterations,
                   sol.bisection || half.bisection};
      eta /= 2.0;
      if (change < options.richardson_tol) break;
    }
  }

  SystemShooter final_sh(p, options, eta);
  SystemShootResult res;
  res.beta = sol.beta;
  res.eta = eta;
  res.iterations = sol.iterations;
  res.used_bisection = sol.bisection;
  res.richardson_change = change;
  if (options.mode == ShootingMode::space_charge_limited) {
    res.j_x = sol.q;
    res.slope = 0.0;
  } else {
    res.j_x = p.j_x;
    res.slope = sol.q;
  }
  std::vector<double> outputs;
  if (mesh) outputs.assign(mesh->nodes().begin(), mesh->nodes().end());
  res.trajectory = final_sh.run(sol.beta, sol.q, outputs);

  if (mesh) {
    const DiodeParams d = final_sh.diode(sol.q);
    std::vector<double> phi(mesh->size());
    std::vector<double> a(mesh->size());
    for (std::size_t i = 0; i < mesh->size(); ++i) {
      const double x = mesh->x(i);
      if (x <= eta) {
        phi[i] = x == 0.0 ? 0.0 : asymptotic_start(d, x, res.slope).phi;
        a[i] = sol.beta * x;
      } else {
        const auto v = sample_at(res.trajectory, res.trajectory.phi, x);
        if (!v) fail(ErrorCode::EventAbort, "final trajectory stopped before the anode");
        phi[i] = *v;
        a[i] = *sample_at(res.trajectory, res.trajectory.a, x);
      }
    }
    SolutionPair pair;
    pair.phi = make_profile(mesh, Field::phi, std::move(phi));
    pair.a = make_profile(mesh, Field::a, std::move(a));
    const CoupledResidual r = coupled_residual(pair, d);
    pair.residual_phi = r.phi;
    pair.residual_a = r.a;
    pair.iterations = sol.iterations;
    res.solution = std::move(pair);
  }
  return res;
}

}  // namespace minsul
