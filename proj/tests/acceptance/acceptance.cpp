// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "minsul/minsul.hpp"
#include "support.hpp"

using namespace minsul;
using minsul::testing::params;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1. Barrier inequalities of the a = 0 problem at 1000 interior nodes.
Outcome barriers() {
  const auto t0 = Clock::now();
  std::size_t violations = 0;
  double worst_lower = -INFINITY;
  double worst_upper = INFINITY;
  const MeshPtr mesh = Mesh::uniform(1002);
  for (double phi_L : {0.5, 1.0, 2.0}) {
    for (double frac : {0.25, 0.5, 1.0}) {
      DiodeParams p = params(phi_L, 0.0, 0.0);
      p.j_x = frac * p.j_x_max;
      const double delta = solve_delta(p.j_x_max);
      const double ab = std::max(1.0, delta * delta);
      const BarrierBox box = make_system_box(p, ab, ab, delta);
      const BarrierVerification lo = verify_barrier(box.phi_lower, box, p, *mesh);
      const BarrierVerification up = verify_barrier(box.phi_upper, box, p, *mesh);
      if (lo.nodes.size() != 1000 || up.nodes.size() != 1000) return {false, "wrong node count"};
      violations += lo.violations + lo.indeterminate + up.violations + up.indeterminate;
      worst_lower = std::max(worst_lower, lo.max_margin);
      worst_upper = std::min(worst_upper, up.min_margin);
    }
  }
  const double t = seconds_since(t0);
  const bool pass = violations == 0 && worst_lower <= 0.0 && worst_upper >= 0.0 && t < 1.0;
  return {pass, fmt("violations=%zu max lower margin=%.3e min upper margin=%.3e time=%.3fs",
                    violations, worst_lower, worst_upper, t)};
}

// 2. Equality case of the delta relation.
Outcome delta_equality() {
  const double d = solve_delta(4.0 * std::sqrt(3.0) / 18.0);
  const double err = std::abs(d - 1.0);
  return {err < 1e-10, fmt("|delta - 1|=%.3e tol=1e-10", err)};
}

// 3. j_x = 0 gives the linear pair.
Outcome zero_current() {
  const DiodeParams p = params(1.0, 0.0, 0.5);
  const SolutionPair s = solve_system(p, make_system_box(p), Mesh::graded(129));
  const double err = std::max(testing::max_abs_diff_linear(s.phi, p.phi_L),
                              testing::max_abs_diff_linear(s.a, p.a_L));
  const double res = std::max(s.residual_phi, s.residual_a);
  return {err < 1e-12 && res < 1e-12,
          fmt("profile error=%.3e residual=%.3e tol=1e-12 (129 nodes)", err, res)};
}

// 4. a_L = 0 decouples into the scalar A1 problem.
Outcome decoupling() {
  const DiodeParams p = params(1.0, 0.3, 0.0);
  const BarrierBox box = make_system_box(p);
  const MeshPtr mesh = Mesh::graded(1025);
  const SolutionPair s = solve_system(p, box, mesh);
  const auto a1 = solve_scalar_fd(make_a1_problem(p, box.phi_lower, box.phi_upper), mesh);
  const double a_norm = sup_norm(s.a.values);
  const double d = sup_distance(s.phi, a1.profile);
  return {a_norm < 1e-10 && d < 1e-8,
          fmt("|a|=%.3e (tol 1e-10) |phi - A1|=%.3e (tol 1e-8)", a_norm, d)};
}

// 5. Finite differences against shooting on 1025 nodes.
Outcome oracle_equivalence() {
  struct Triple {
    double phi_L, frac, a_frac;
  };
  const Triple cases[] = {
      {1.0, 0.78, 0.33}, {1.0, 0.26, 0.4}, {0.5, 0.5, 0.25}, {2.0, 0.8, 0.45}, {1.5, 0.6, 0.1}};
  const MeshPtr mesh = Mesh::graded(1025);
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const Triple& c : cases) {
    DiodeParams p = params(c.phi_L, 0.0, 0.0);
    p.j_x = c.frac * p.j_x_max;
    p.a_L = c.a_frac * p.j_x;
    const SolutionPair fd = solve_system(p, make_system_box(p), mesh);
    const SystemShootResult sh = shoot_system(p, p.a_L, p.phi_L, mesh);
    worst = std::max({worst, sup_distance(fd.phi, sh.solution->phi),
                      sup_distance(fd.a, sh.solution->a)});
  }
  const double t = seconds_since(t0);
  return {worst < 1e-5 && t < 30.0,
          fmt("max sup difference=%.3e tol=1e-5 over 5 triples, time=%.2fs", worst, t)};
}

// 6. Iterates from the upper barrier decrease and stay in the box.
Outcome monotone_audit() {
  const MeshPtr mesh = Mesh::graded(257);
  std::size_t violations = 0;
  std::size_t cases = 0;
  std::size_t iterates = 0;
  bool contained = true;
  auto audit = [&](const ScalarProblem& prob, const Barrier& lo, const Barrier& hi) {
    const MonotoneResult m = monotone_iterate(prob, lo, hi, mesh);
    ++cases;
    iterates += m.iterates.size();
    contained = contained && m.contained && profile_within(m.limit, lo, hi);
    for (std::size_t k = 1; k < m.iterates.size(); ++k) {
      const double scale = std::max(1.0, sup_norm(m.iterates[k - 1].values));
      for (std::size_t i = 0; i < mesh->size(); ++i) {
        // round-off slack only
        if (m.iterates[k].values[i] > m.iterates[k - 1].values[i] + 1e-13 * scale) ++violations;
      }
    }
  };
  for (auto [phi_L, j, a_L] : {std::tuple{1.0, 0.3, 0.1}, std::tuple{0.5, 0.05, 0.02},
                               std::tuple{2.0, 0.7, 0.3}}) {
    const DiodeParams p = params(phi_L, j, a_L);
    const BarrierBox box = make_system_box(p);
    audit(make_a1_problem(p, box.phi_lower, box.phi_upper), box.phi_lower, box.phi_upper);
    audit(make_scalar_problem(ScalarCase::A4, box.phi_upper, p, box.a_lower, box.a_upper),
          box.a_lower, box.a_upper);
  }
  return {violations == 0 && contained && cases >= 3,
          fmt("cases=%zu iterates=%zu increases=%zu contained=%s", cases, iterates, violations,
              contained ? "yes" : "no")};
}

// 7. The magnetic bound is sharp for the scalar a-equation.
Outcome bound_sharpness() {
  DiodeParams p = params(1.0, 0.3, 0.0);
  const BarrierBox box = make_system_box(p);
  const double u1 = box.phi_upper.value(1.0);
  const double bound = std::sqrt(u1 * (2.0 + u1));
  const MeshPtr mesh = Mesh::graded(129);
  p.a_L = 0.99 * bound;
  bool below = false;
  std::string detail;
  try {
    const auto r = solve_shoot_scalar_a(make_scalar_problem(ScalarCase::A4, box.phi_upper, p), mesh);
    below = std::abs(r.profile.at_anode() - p.a_L) < 1e-9;
    detail = fmt("0.99*bound: root c=%.6f", r.c);
  } catch (const Error& e) {
    detail = fmt("0.99*bound: %s", std::string(to_string(e.code())).c_str());
  }
  p.a_L = 1.01 * bound;
  bool above = false;
  try {
    solve_shoot_scalar_a(make_scalar_problem(ScalarCase::A4, box.phi_upper, p), mesh);
    detail += "; 1.01*bound: root found";
  } catch (const Error& e) {
    above = e.code() == ErrorCode::NoBracket;
    detail += fmt("; 1.01*bound: %s", std::string(to_string(e.code())).c_str());
  }
  return {below && above, fmt("bound=%.6f ", bound) + detail};
}

// 8. a_L -> -a_L maps (phi, a) to (phi, -a).
Outcome sign_symmetry() {
  DiodeParams p = params(1.0, 0.3, 0.12);
  const MeshPtr mesh = Mesh::graded(1025);
  const SolutionPair s1 = solve_system(p, make_system_box(p), mesh);
  p.a_L = -p.a_L;
  const SolutionPair s2 = solve_system(p, make_system_box(p), mesh);
  double dphi = 0.0;
  double da = 0.0;
  for (std::size_t i = 0; i < mesh->size(); ++i) {
    dphi = std::max(dphi, std::abs(s1.phi.values[i] - s2.phi.values[i]));
    da = std::max(da, std::abs(s1.a.values[i] + s2.a.values[i]));
  }
  return {dphi < 1e-12 && da < 1e-12, fmt("|dphi|=%.3e |a+a'|=%.3e tol=1e-12", dphi, da)};
}

// 9. x^{4/3} behaviour near the cathode.
Outcome near_origin() {
  const double phi_L = 1e-3;
  const DiodeParams p = params(phi_L, current_ceiling(phi_L), 0.0);
  const BarrierBox box = make_system_box(p);
  const auto a1 = solve_scalar_fd(make_a1_problem(p, box.phi_lower, box.phi_upper),
                                  Mesh::graded(1025));
  const double slope = testing::loglog_slope(a1.profile, 0.05);
  return {std::abs(slope - 4.0 / 3.0) <= 0.05,
          fmt("slope=%.4f target 4/3 +- 0.05 (phi_L=1e-3, j_x=F(phi_L))", slope)};
}

// 10. Second-order trend under refinement.
Outcome mesh_convergence() {
  const DiodeParams p = params(1.0, 0.3, 0.1);
  const BarrierBox box = make_system_box(p);
  std::vector<SolutionPair> s;
  for (std::size_t n : {257, 513, 1025}) s.push_back(solve_system(p, box, Mesh::graded(n)));
  auto diff = [](const SolutionPair& coarse, const SolutionPair& fine) {
    return std::max(sup_distance(coarse.phi, resample(fine.phi, coarse.phi.mesh)),
                    sup_distance(coarse.a, resample(fine.a, coarse.a.mesh)));
  };
  const double d1 = diff(s[0], s[1]);
  const double d2 = diff(s[1], s[2]);
  return {d1 >= 3.0 * d2, fmt("d(257,513)=%.3e d(513,1025)=%.3e ratio=%.2f need >= 3", d1, d2,
                              d1 / d2)};
}

// 11. Regime grid at fixed phi_L.
Outcome regime_grid() {
  const MeshPtr mesh = Mesh::graded(129);
  std::size_t points = 0;
  std::size_t insulated_wrong = 0;
  std::size_t admissible_wrong = 0;
  std::size_t admissible = 0;
  for (double j : {0.05, 0.1, 0.2, 0.3, 0.38}) {
    for (double a : {0.0, 0.01, 0.05, 0.1, 0.15, 0.2, 0.5}) {
      const DiodeParams p = params(1.0, j, a);
      const BarrierBox box = make_system_box(p);
      const RegimeReport r = classify(p, box);
      ++points;
      if (a > j / 2.0 && r.classification == Regime::noninsulated) ++insulated_wrong;
      const bool bounds = r.bound_17.satisfied && r.bound_18.satisfied && r.bound_23.satisfied;
      if (!bounds) continue;
      bool converged = true;
      try {
        solve_system(p, box, mesh);
      } catch (const Error&) {
        converged = false;
      }
      if (!converged) continue;
      ++admissible;
      if (r.classification != Regime::noninsulated) ++admissible_wrong;
    }
  }
  return {insulated_wrong == 0 && admissible_wrong == 0 && admissible > 0,
          fmt("points=%zu a_L>j/2 misclassified=%zu admissible=%zu misclassified=%zu", points,
              insulated_wrong, admissible, admissible_wrong)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"barrier verification", barriers},
      {"delta equality case", delta_equality},
      {"zero-current exactness", zero_current},
      {"decoupling at a_L = 0", decoupling},
      {"FD vs shooting", oracle_equivalence},
      {"monotone iteration audit", monotone_audit},
      {"magnetic bound sharpness", bound_sharpness},
      {"sign symmetry", sign_symmetry},
      {"near-origin exponent", near_origin},
      {"mesh convergence", mesh_convergence},
      {"regime classification", regime_grid},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const Error& e) {
      o = {false, fmt("threw %s: %s", std::string(to_string(e.code())).c_str(), e.what())};
    }
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    if (!o.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
