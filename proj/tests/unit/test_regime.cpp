#include <catch_amalgamated.hpp>

#include "minsul/regime.hpp"
#include "support.hpp"

using namespace minsul;

TEST_CASE("classification follows the anode bounds", "[regime]") {
  auto cls = [](double j, double a) {
    const DiodeParams p = testing::params(1.0, j, a);
    return classify(p, make_system_box(p)).classification;
  };
  CHECK(cls(0.3, 0.1) == Regime::noninsulated);
  CHECK(cls(0.1, 0.2) == Regime::insulation_suspected);
  CHECK(cls(0.3, 0.0) == Regime::noninsulated);
}

TEST_CASE("current above the ceiling is outside the theory", "[regime]") {
  DiodeParams p = testing::params(1.0, 0.3, 0.0);
  const BarrierBox box = make_system_box(p);
  p.j_x = 0.5;
  p.j_x_max = 0.5;
  const RegimeReport r = classify(p, box);
  CHECK(r.classification == Regime::outside_theory);
  CHECK_FALSE(r.bound_17.satisfied);
}

TEST_CASE("borderline bound triggers a shooting probe", "[regime]") {
  const DiodeParams p = testing::params(1.0, 0.3, 0.148);
  const RegimeReport r = classify(p, make_system_box(p));
  CHECK(r.probe_run);
  CHECK(r.classification == Regime::noninsulated);
  ClassifyOptions o;
  o.allow_probe = false;
  CHECK_FALSE(classify(p, make_system_box(p), o).probe_run);
}

TEST_CASE("sweep in the current", "[regime][sweep]") {
  const DiodeParams p = testing::params(1.0, 0.1, 0.02);
  const SweepTable t = sweep_jx(p, 0.05, current_ceiling(1.0), 6, Mesh::graded(65));
  REQUIRE(t.rows.size() == 6);
  for (std::size_t k = 1; k < t.rows.size(); ++k) CHECK(t.rows[k].j_x > t.rows[k - 1].j_x);
  for (const auto& row : t.rows) {
    CHECK(row.converged);
    CHECK(row.error.empty());
    CHECK(row.classification == Regime::noninsulated);
  }
  // more current pushes the potential down at mid-gap
  CHECK(t.rows.back().phi_half < t.rows.front().phi_half);
  REQUIRE(t.last_converged_jx.has_value());
  CHECK(*t.last_converged_jx == t.rows.back().j_x);
}

TEST_CASE("sweep rejects an empty range", "[regime][sweep]") {
  const DiodeParams p = testing::params(1.0, 0.1, 0.0);
  CHECK_THROWS_AS(sweep_jx(p, 0.2, 0.1, 3, Mesh::graded(65)), Error);
  CHECK_THROWS_AS(sweep_jx(p, 0.1, 0.2, 0, Mesh::graded(65)), Error);
}
