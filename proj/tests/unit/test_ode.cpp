#include <catch_amalgamated.hpp>

#include <cmath>

#include "minsul/ode.hpp"

using namespace minsul;
using Catch::Approx;

namespace {

bool oscillator(double, std::span<const double> y, std::span<double> dy) {
  dy[0] = y[1];
  dy[1] = y[0];
  return true;
}

}  // namespace

TEST_CASE("a'' = a reaches e at x = 1", "[ode]") {
  const std::vector<double> y0{1.0, 1.0};
  OdeOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  const OdeResult r = integrate_dopri(oscillator, 0.0, y0, 1.0, o);
  REQUIRE(r.reason == OdeTermination::reached_end);
  CHECK(r.last.x == 1.0);
  CHECK(std::abs(r.last.y[0] - std::exp(1.0)) < 1e-11);
  CHECK(std::abs(r.last.y[1] - std::exp(1.0)) < 1e-11);
}

TEST_CASE("error shrinks with the tolerance", "[ode]") {
  const std::vector<double> y0{0.0, 1.0};
  double previous = 1.0;
  long previous_steps = 0;
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    OdeOptions o;
    o.rtol = tol;
    o.atol = tol;
    const OdeResult r = integrate_dopri(oscillator, 0.0, y0, 2.0, o);
    const double err = std::abs(r.last.y[0] - std::sinh(2.0));
    CHECK(err < previous);
    CHECK(err < 100.0 * tol);
    CHECK(r.accepted_steps > previous_steps);
    previous = err;
    previous_steps = r.accepted_steps;
  }
}

TEST_CASE("output points are hit exactly", "[ode]") {
  const std::vector<double> y0{1.0, 1.0};
  OdeOptions o;
  o.output_points = {0.1, 0.25, 0.5, 1.0};
  const OdeResult r = integrate_dopri(oscillator, 0.0, y0, 1.0, o);
  REQUIRE(r.outputs.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(r.outputs[k].x == o.output_points[k]);
    CHECK(r.outputs[k].y[0] == Approx(std::exp(o.output_points[k])).epsilon(1e-9));
  }
}

TEST_CASE("terminal event is located", "[ode]") {
  const std::vector<double> y0{1.0};
  auto decay = [](double, std::span<const double>, std::span<double> dy) {
    dy[0] = -1.0;
    return true;
  };
  auto event = [](double, std::span<const double> y) { return y[0]; };
  const OdeResult r = integrate_dopri(decay, 0.0, y0, 2.0, {}, event);
  REQUIRE(r.reason == OdeTermination::event);
  CHECK(r.last.x == Approx(1.0).margin(1e-11));
  CHECK(to_string(r.reason) == "discriminant_zero");
}

TEST_CASE("undefined right-hand side underflows the step", "[ode]") {
  const std::vector<double> y0{1.0};
  auto wall = [](double x, std::span<const double>, std::span<double> dy) {
    dy[0] = 1.0;
    return x < 0.5;
  };
  const OdeResult r = integrate_dopri(wall, 0.0, y0, 1.0, {});
  CHECK(r.reason == OdeTermination::step_underflow);
  CHECK(r.last.x < 0.5);
  CHECK(r.last.x > 0.49);
}
