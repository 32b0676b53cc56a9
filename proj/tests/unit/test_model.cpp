#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "minsul/model.hpp"
#include "support.hpp"

using namespace minsul;
using Catch::Approx;

TEST_CASE("F and G at reference points", "[model]") {
  DiodeParams p = testing::params(1.0, 1.0, 0.0);
  CHECK(eval_F(1.0, 0.0, p) == Approx(1.1547005383792515).epsilon(1e-15));
  p.j_x = 2.0;
  CHECK(eval_F(1.0, 1.0, p) == Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  p.j_x = 1.0;
  CHECK(eval_G(1.0, 1.0, p) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(eval_G(1.0, 0.0, p) == 0.0);
}

TEST_CASE("epsilon shift applies to both equations", "[model]") {
  DiodeParams p = testing::params(1.0, 1.0, 0.0);
  p.epsilon = 0.01;
  // 1.01 / sqrt(0.01 * 2.01)
  CHECK(eval_F_eps(0.0, 0.0, p) == Approx(7.1239907201718431).epsilon(1e-13));
  CHECK(eval_G_eps(0.0, 0.05, p) == Approx(0.05 / std::sqrt(0.0201 - 0.0025)).epsilon(1e-13));
  CHECK_THROWS_AS(eval_F(0.0, 0.0, p), Error);
}

TEST_CASE("discriminant keeps small potentials", "[model]") {
  const Discriminant d = discriminant(1e-12, 0.0);
  CHECK(d.value == Approx(2e-12).epsilon(1e-12));
  CHECK(d.sign == DiscriminantSign::positive);
  CHECK(discriminant(1.0, 2.0).sign == DiscriminantSign::negative);
  CHECK(discriminant(0.0, 0.0).sign == DiscriminantSign::zero);
  CHECK(zero_threshold(0.0) == 1e-14);
  CHECK(zero_threshold(3.0) == Approx(16e-14));
}

TEST_CASE("singular set throws SingularPoint", "[model]") {
  DiodeParams p = testing::params(1.0, 0.3, 0.0);
  try {
    eval_F(0.0, 0.0, p);
    FAIL("expected SingularPoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularPoint);
  }
  CHECK(rhs_F(0.3, 0.0, 0.0).singular);
}

TEST_CASE("modulus convention on the negative side", "[model]") {
  // phi (2 + phi) - a^2 = 3 - 4 = -1
  const RhsPoint f = rhs_F(1.0, 1.0, 2.0);
  CHECK_FALSE(f.singular);
  CHECK(f.value == Approx(2.0));
  CHECK(f.disc.sign == DiscriminantSign::negative);
}

TEST_CASE("parameter validation", "[model]") {
  DiodeParams p = testing::params(1.0, 0.3, 0.1);
  CHECK_NOTHROW(p.validate());
  p.j_x = 0.0;
  CHECK_NOTHROW(p.validate());
  for (auto bad : {-1.0, std::nan("")}) {
    DiodeParams q = testing::params(1.0, 0.3, 0.1);
    q.phi_L = bad;
    CHECK_THROWS_AS(q.validate(), Error);
  }
  DiodeParams q = testing::params(1.0, 0.3, 0.1);
  q.j_x = 0.5;
  q.j_x_max = 0.4;
  CHECK_THROWS_AS(q.validate(), Error);
}

TEST_CASE("symmetry of F and G in a", "[model][property]") {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> phi(1e-6, 10.0);
  std::uniform_real_distribution<double> frac(-0.99, 0.99);
  std::uniform_real_distribution<double> cur(0.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    const double f = phi(rng);
    const double a = frac(rng) * std::sqrt(f * (2.0 + f));
    const double j = cur(rng);
    const RhsPoint plus = rhs_F(j, f, a);
    const RhsPoint minus = rhs_F(j, f, -a);
    REQUIRE(plus.value == minus.value);
    REQUIRE(rhs_G(j, f, -a).value == -rhs_G(j, f, a).value);
    REQUIRE(plus.value >= 0.0);
    // F >= G for a inside the light cone since 1 + phi > |a|
    REQUIRE(plus.value >= std::abs(rhs_G(j, f, a).value));
  }
}

TEST_CASE("analytic derivatives match differences", "[model][property]") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> phi(0.05, 5.0);
  std::uniform_real_distribution<double> frac(-0.8, 0.8);
  for (int k = 0; k < 200; ++k) {
    const double f = phi(rng);
    const double a = frac(rng) * std::sqrt(f * (2.0 + f));
    const double h = 1e-6;
    const RhsPoint F = rhs_F(0.7, f, a);
    const RhsPoint G = rhs_G(0.7, f, a);
    const double dF_phi = (rhs_F(0.7, f + h, a).value - rhs_F(0.7, f - h, a).value) / (2 * h);
    const double dG_a = (rhs_G(0.7, f, a + h).value - rhs_G(0.7, f, a - h).value) / (2 * h);
    REQUIRE(F.d_phi == Approx(dF_phi).epsilon(1e-6).margin(1e-8));
    REQUIRE(G.d_a == Approx(dG_a).epsilon(1e-6).margin(1e-8));
  }
}

TEST_CASE("transform is an involution", "[model]") {
  const MeshPtr mesh = Mesh::graded(65);
  std::vector<double> v(mesh->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(mesh->x(i), 4.0 / 3.0);
  const FieldProfile phi = make_profile(mesh, Field::phi, v);
  const FieldProfile back = to_transformed(to_transformed(phi));
  CHECK(back.values == phi.values);
  CHECK(to_transformed(phi).values[10] == -phi.values[10]);
}
