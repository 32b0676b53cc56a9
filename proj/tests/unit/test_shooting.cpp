#include <catch_amalgamated.hpp>

#include <cmath>

#include "minsul/shooting.hpp"
#include "support.hpp"

using namespace minsul;
using Catch::Approx;

TEST_CASE("space-charge start is k x^{4/3}", "[shooting]") {
  // k = 1 exactly at this current
  const DiodeParams p = testing::params(1.0, 4.0 * std::sqrt(2.0) / 9.0, 0.0);
  const AsymptoticStart s = asymptotic_start(p, 1e-3);
  CHECK(s.phi == Approx(std::pow(1e-3, 4.0 / 3.0)).epsilon(1e-13));
  CHECK(s.dphi == Approx(4.0 / 3.0 * std::pow(1e-3, 1.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("positive-slope start solves the energy equation", "[shooting]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.0);
  const AsymptoticStart s = asymptotic_start(p, 0.01, 0.5);
  // x(phi) = int_0^phi dpsi / sqrt(s^2 + 2 j sqrt(2 psi)), inverted at x = 0.01
  CHECK(s.phi == Approx(0.0053942279418561352).epsilon(1e-12));
  CHECK(s.dphi == Approx(0.55885641731058000).epsilon(1e-12));
  const DiodeParams zero = testing::params(1.0, 0.0, 0.0);
  CHECK(asymptotic_start(zero, 0.01, 0.5).phi == Approx(0.005));
}

TEST_CASE("scalar a-shooting against a high-precision oracle", "[shooting]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.5);
  const ScalarProblem prob =
      make_scalar_problem(ScalarCase::A4, Barrier(Field::phi, BarrierKind::upper, Const{1.0}), p);
  const ScalarShootingResult r = solve_shoot_scalar_a(prob, Mesh::uniform(65));
  CHECK(r.c == Approx(0.48567936073839757).epsilon(1e-9));
  CHECK(r.monotone);
  CHECK(r.profile.interpolate(0.5) == Approx(0.24460128702424875).epsilon(1e-9));
}

TEST_CASE("scalar a-shooting handles negative targets", "[shooting]") {
  DiodeParams p = testing::params(1.0, 0.3, 0.4);
  const BarrierBox box = make_system_box(p);
  const MeshPtr mesh = Mesh::graded(65);
  const auto plus = solve_shoot_scalar_a(make_scalar_problem(ScalarCase::A4, box.phi_upper, p), mesh);
  p.a_L = -0.4;
  const auto minus = solve_shoot_scalar_a(make_scalar_problem(ScalarCase::A4, box.phi_upper, p), mesh);
  CHECK(minus.c == Approx(-plus.c).epsilon(1e-12));
  // a'' = G(phi, a) has the sign of a, so the positive profile is convex
  for (std::size_t i = 1; i + 1 < mesh->size(); ++i) {
    REQUIRE(second_difference(*mesh, plus.profile.values, i) >= -1e-9);
  }
}

TEST_CASE("target above the light-cone bound has no bracket", "[shooting]") {
  DiodeParams p = testing::params(1.0, 0.3, 0.0);
  const BarrierBox box = make_system_box(p);
  p.a_L = 1.5 * std::sqrt(8.0);
  try {
    solve_shoot_scalar_a(make_scalar_problem(ScalarCase::A4, box.phi_upper, p), Mesh::graded(65));
    FAIL("expected NoBracket");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoBracket);
  }
}

TEST_CASE("system shooting recovers manufactured launch parameters", "[shooting]") {
  const DiodeParams base = testing::params(1.0, 0.3, 0.0);
  ShootingParams s;
  s.j_x = 0.3;
  s.beta = 0.08;
  s.slope = 0.4;
  const Trajectory t = forward_shot(base, s);
  REQUIRE(t.reached_end());
  DiodeParams p = base;
  p.phi_L = t.phi_end();
  p.a_L = t.a_end();
  p.j_x_max = std::max(current_ceiling(p.phi_L), p.j_x);
  const SystemShootResult r = shoot_system(p, 0.0, 1.0);
  CHECK(r.beta == Approx(0.08).margin(1e-8));
  CHECK(r.slope == Approx(0.4).margin(1e-8));
}

TEST_CASE("space-charge-limited current approaches the classical law", "[shooting]") {
  const DiodeParams p = testing::params(1e-4, 1e-6, 0.0);
  SystemShootOptions o;
  o.mode = ShootingMode::space_charge_limited;
  const SystemShootResult r = shoot_system(p, 0.0, 1e-6, nullptr, o);
  // (4 sqrt 2 / 9) phi_L^{3/2}; relativistic correction is O(phi_L)
  CHECK(r.j_x == Approx(6.2853936105470891e-7).epsilon(1e-3));
  CHECK(r.slope == 0.0);
}

TEST_CASE("fixed-current shooting agrees with the FD solver", "[shooting][system]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.1);
  const MeshPtr mesh = Mesh::graded(257);
  const SystemShootResult r = shoot_system(p, p.a_L, p.phi_L, mesh);
  REQUIRE(r.solution.has_value());
  CHECK(r.richardson_change < 1e-8);
  const SolutionPair fd = solve_system(p, make_system_box(p), mesh);
  CHECK(sup_distance(r.solution->phi, fd.phi) < 1e-5);
  CHECK(sup_distance(r.solution->a, fd.a) < 1e-5);
}

TEST_CASE("trajectory stops at the discriminant zero", "[shooting]") {
  // phi ~ 0.1 x and a ~ x close the discriminant near x = 0.2
  const DiodeParams p = testing::params(1.0, 1e-6, 0.0);
  ShootingParams s;
  s.j_x = 1e-6;
  s.beta = 1.0;
  s.slope = 0.1;
  const Trajectory t = forward_shot(p, s);
  CHECK(t.reason == OdeTermination::event);
  CHECK(t.x_end() == Approx(0.2).epsilon(0.02));
  CHECK(std::abs(t.disc.back()) < 1e-8);
}
