#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "minsul/system_solver.hpp"
#include "support.hpp"

using namespace minsul;
using Catch::Approx;

TEST_CASE("zero current returns the linear pair", "[system]") {
  const DiodeParams p = testing::params(1.0, 0.0, 0.5);
  const SolutionPair s = solve_system(p, make_system_box(p), Mesh::graded(129));
  CHECK(testing::max_abs_diff_linear(s.phi, 1.0) < 1e-14);
  CHECK(testing::max_abs_diff_linear(s.a, 0.5) < 1e-14);
  CHECK(s.residual_phi < 1e-12);
  CHECK(s.residual_a < 1e-12);
}

TEST_CASE("a_L = 0 decouples", "[system]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.0);
  const BarrierBox box = make_system_box(p);
  const MeshPtr mesh = Mesh::graded(257);
  const SolutionPair s = solve_system(p, box, mesh);
  CHECK(sup_norm(s.a.values) < 1e-10);
  const auto a1 = solve_scalar_fd(make_a1_problem(p, box.phi_lower, box.phi_upper), mesh);
  CHECK(sup_distance(s.phi, a1.profile) < 1e-8);
}

TEST_CASE("negating a_L negates a", "[system]") {
  DiodeParams p = testing::params(1.0, 0.3, 0.12);
  const MeshPtr mesh = Mesh::graded(257);
  const SolutionPair s1 = solve_system(p, make_system_box(p), mesh);
  p.a_L = -0.12;
  const SolutionPair s2 = solve_system(p, make_system_box(p), mesh);
  for (std::size_t i = 0; i < mesh->size(); ++i) {
    REQUIRE(std::abs(s1.phi.values[i] - s2.phi.values[i]) <= 1e-12);
    REQUIRE(std::abs(s1.a.values[i] + s2.a.values[i]) <= 1e-12);
  }
}

TEST_CASE("coupled residual of a solve", "[system]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.1);
  const SolutionPair s = solve_system(p, make_system_box(p), Mesh::graded(129));
  const CoupledResidual r = coupled_residual(s, p);
  CHECK(r.phi == Approx(s.residual_phi));
  CHECK(r.a == Approx(s.residual_a));
  CHECK(r.singular_nodes == 0);
  CHECK(s.contained());
}

TEST_CASE("warm start reuses a previous solution", "[system]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.1);
  const BarrierBox box = make_system_box(p);
  const MeshPtr mesh = Mesh::graded(129);
  const SolutionPair cold = solve_system(p, box, mesh);
  SystemSolveOptions o;
  o.initial = cold;
  const SolutionPair warm = solve_system(p, box, mesh, o);
  CHECK(warm.iterations <= cold.iterations);
  CHECK(sup_distance(warm.phi, cold.phi) < 1e-9);
  o.initial = solve_system(p, box, Mesh::graded(65));
  CHECK_THROWS_AS(solve_system(p, box, mesh, o), Error);
}

TEST_CASE("inadmissible box is refused", "[system]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.1);
  const BarrierBox box = make_system_box(p, std::nullopt, std::nullopt, 1.5);
  try {
    solve_system(p, box, Mesh::graded(65));
    FAIL("expected InadmissibleBox");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InadmissibleBox);
  }
}

TEST_CASE("random admissible parameters solve inside the box", "[system][property]") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> phi(0.2, 3.0);
  std::uniform_real_distribution<double> frac(0.05, 1.0);
  std::uniform_real_distribution<double> mag(-1.0, 1.0);
  const MeshPtr mesh = Mesh::graded(129);
  for (int k = 0; k < 12; ++k) {
    const double phi_L = phi(rng);
    const double j = frac(rng) * current_ceiling(phi_L);
    const double a_L = mag(rng) * 0.5 * j;
    const DiodeParams p = testing::params(phi_L, j, a_L);
    const BarrierBox box = make_system_box(p);
    const SolutionPair s = solve_system(p, box, mesh);
    INFO("phi_L " << phi_L << " j " << j << " a_L " << a_L);
    REQUIRE(s.residual_phi < p.tol_residual);
    REQUIRE(s.residual_a < p.tol_residual);
    REQUIRE(s.contained());
    REQUIRE(profile_within(s.phi, box.phi_lower, box.phi_upper));
  }
}
