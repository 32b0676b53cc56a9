#include <catch_amalgamated.hpp>

#include <cmath>

#include "minsul/scalar_solver.hpp"
#include "support.hpp"

using namespace minsul;
using Catch::Approx;

namespace {

ScalarProblem constant_phi_a4(const DiodeParams& p, double phi_c) {
  return make_scalar_problem(ScalarCase::A4, Barrier(Field::phi, BarrierKind::upper, Const{phi_c}),
                             p);
}

}  // namespace

TEST_CASE("second difference is exact for quadratics", "[scalar]") {
  const MeshPtr mesh = Mesh::graded(41, 1.7);
  std::vector<double> u(mesh->size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 3.0 * mesh->x(i) * mesh->x(i) - mesh->x(i);
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    REQUIRE(second_difference(*mesh, u, i) == Approx(6.0).epsilon(1e-8));
  }
}

TEST_CASE("A4 with constant potential converges at second order", "[scalar]") {
  // a'' = 0.3 a / sqrt(3 - a^2), a(1) = 0.5; a(0.5) from a high-precision shooting
  const DiodeParams p = testing::params(1.0, 0.3, 0.5);
  const ScalarProblem prob = constant_phi_a4(p, 1.0);
  const double exact = 0.24460128702424875;
  double previous = 0.0;
  for (std::size_t n : {65, 129, 257}) {
    const MeshPtr mesh = Mesh::uniform(n);
    const ScalarSolveResult r = solve_scalar_fd(prob, mesh);
    const double err = std::abs(r.profile.values[(n - 1) / 2] - exact);
    if (previous > 0.0) CHECK(previous / err == Approx(4.0).epsilon(0.05));
    previous = err;
  }
  CHECK(previous < 1e-6);
}

TEST_CASE("linear limit of A4 is the sinh profile", "[scalar]") {
  // tiny a_L makes the a^2 term negligible
  const DiodeParams p = testing::params(1.0, 0.3, 1e-6);
  const MeshPtr mesh = Mesh::uniform(257);
  const ScalarSolveResult r = solve_scalar_fd(constant_phi_a4(p, 1.0), mesh);
  const double kappa = 0.41617914502878172;
  for (std::size_t i = 0; i < mesh->size(); i += 16) {
    const double x = mesh->x(i);
    REQUIRE(r.profile.values[i] == Approx(1e-6 * std::sinh(kappa * x) / std::sinh(kappa))
                                       .epsilon(1e-5)
                                       .margin(1e-18));
  }
}

TEST_CASE("A1 solve stays in the box with small residual", "[scalar]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.0);
  const BarrierBox box = make_system_box(p);
  const MeshPtr mesh = Mesh::graded(257);
  const ScalarSolveResult r = solve_scalar_fd(make_a1_problem(p, box.phi_lower, box.phi_upper), mesh);
  CHECK(r.profile.residual < p.tol_residual);
  CHECK(r.final_epsilon == 0.0);
  CHECK(r.ladder.back().converged);
  CHECK(profile_within(r.profile, box.phi_lower, box.phi_upper));
  CHECK(r.profile.at_anode() == 1.0);
  CHECK(r.profile.at_cathode() == 0.0);
}

TEST_CASE("epsilon ladder stops at a requested shift", "[scalar]") {
  DiodeParams p = testing::params(1.0, 0.3, 0.0);
  p.epsilon = 1e-3;
  const ScalarSolveResult r = solve_scalar_fd(make_a1_problem(p), Mesh::graded(129));
  CHECK(r.final_epsilon == 1e-3);
  CHECK(r.ladder.size() == 3);
}

TEST_CASE("zero current gives the straight line", "[scalar]") {
  const DiodeParams p = testing::params(0.7, 0.0, 0.0);
  const ScalarSolveResult r = solve_scalar_fd(make_a1_problem(p), Mesh::graded(129));
  CHECK(testing::max_abs_diff_linear(r.profile, 0.7) < 1e-13);
}

TEST_CASE("A1 rejects a nonzero frozen field", "[scalar]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.1);
  const BarrierBox box = make_system_box(p);
  ScalarProblem prob = make_a1_problem(p);
  prob.frozen = box.a_upper;
  CHECK_THROWS_AS(prob.validate(), Error);
  CHECK_THROWS_AS(make_scalar_problem(ScalarCase::A4, box.a_upper, p), Error);
}

TEST_CASE("meshes below the minimum are rejected", "[scalar]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.0);
  CHECK_THROWS_AS(solve_scalar_fd(make_a1_problem(p), Mesh::uniform(17)), Error);
}

TEST_CASE("monotone iteration decreases to the FD solution", "[scalar][monotone]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.1);
  const BarrierBox box = make_system_box(p);
  const MeshPtr mesh = Mesh::graded(129);
  const ScalarProblem prob = make_a1_problem(p, box.phi_lower, box.phi_upper);
  const MonotoneResult m = monotone_iterate(prob, box.phi_lower, box.phi_upper, mesh);
  CHECK(m.contained);
  REQUIRE(m.iterates.size() >= 2);
  for (std::size_t k = 1; k < m.iterates.size(); ++k) {
    for (std::size_t i = 0; i < mesh->size(); ++i) {
      REQUIRE(m.iterates[k].values[i] <= m.iterates[k - 1].values[i] + 1e-12);
    }
  }
  const ScalarSolveResult fd = solve_scalar_fd(prob, mesh);
  CHECK(sup_distance(m.limit, fd.profile) < 1e-9);
}

TEST_CASE("monotone iteration on the magnetic equation", "[scalar][monotone]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.1);
  const BarrierBox box = make_system_box(p);
  const MeshPtr mesh = Mesh::graded(129);
  const ScalarProblem prob =
      make_scalar_problem(ScalarCase::A4, box.phi_upper, p, box.a_lower, box.a_upper);
  const MonotoneResult m = monotone_iterate(prob, box.a_lower, box.a_upper, mesh);
  CHECK(m.contained);
  CHECK(m.rhs_monotonicity == Monotonicity::increasing);
  CHECK(sup_distance(m.limit, solve_scalar_fd(prob, mesh).profile) < 1e-9);
}

TEST_CASE("comparison between barrier and solution", "[scalar][comparison]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.1);
  const BarrierBox box = make_system_box(p);
  const MeshPtr mesh = Mesh::graded(129);
  const ScalarProblem prob =
      make_scalar_problem(ScalarCase::A4, box.phi_upper, p, box.a_lower, box.a_upper);
  const FieldProfile sol = solve_scalar_fd(prob, mesh).profile;
  // G increasing in a: the chord is an upper solution, so sol <= chord
  const ComparisonVerdict ok = comparison_check(sol, box.a_upper.sample(mesh), prob, true);
  CHECK(ok.status == ComparisonStatus::confirmed);
  const ComparisonVerdict bad = comparison_check(box.a_upper.sample(mesh), sol, prob, true);
  CHECK(bad.status == ComparisonStatus::premise_failure);
  REQUIRE(bad.premise_failure_x.has_value());
}
