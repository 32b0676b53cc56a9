#include <benchmark/benchmark.h>

#include <cmath>

#include "minsul/minsul.hpp"

using namespace minsul;

namespace {

DiodeParams reference_params() {
  DiodeParams p;
  p.phi_L = 1.0;
  p.j_x_max = current_ceiling(1.0);
  p.j_x = 0.3;
  p.a_L = 0.1;
  return p;
}

void BM_VerifyBox(benchmark::State& state) {
  const DiodeParams p = reference_params();
  const BarrierBox box = make_system_box(p);
  const MeshPtr mesh = Mesh::uniform(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_box(box, p, *mesh));
}
BENCHMARK(BM_VerifyBox)->Arg(1002)->Arg(10002);

void BM_ScalarA1(benchmark::State& state) {
  const DiodeParams p = reference_params();
  const BarrierBox box = make_system_box(p);
  const ScalarProblem prob = make_a1_problem(p, box.phi_lower, box.phi_upper);
  const MeshPtr mesh = Mesh::graded(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_scalar_fd(prob, mesh));
}
BENCHMARK(BM_ScalarA1)->Arg(65)->Arg(257)->Arg(1025)->Arg(4097)->Unit(benchmark::kMicrosecond);

void BM_MonotoneA1(benchmark::State& state) {
  const DiodeParams p = reference_params();
  const BarrierBox box = make_system_box(p);
  const ScalarProblem prob = make_a1_problem(p, box.phi_lower, box.phi_upper);
  const MeshPtr mesh = Mesh::graded(static_cast<std::size_t>(state.range(0)));
  MonotoneOptions o;
  o.record_iterates = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(monotone_iterate(prob, box.phi_lower, box.phi_upper, mesh, o));
  }
}
BENCHMARK(BM_MonotoneA1)->Arg(257)->Arg(1025)->Unit(benchmark::kMicrosecond);

void BM_SolveSystem(benchmark::State& state) {
  const DiodeParams p = reference_params();
  const BarrierBox box = make_system_box(p);
  const MeshPtr mesh = Mesh::graded(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_system(p, box, mesh));
}
BENCHMARK(BM_SolveSystem)->Arg(65)->Arg(257)->Arg(1025)->Arg(4097)->Unit(benchmark::kMicrosecond);

void BM_ShootSystem(benchmark::State& state) {
  const DiodeParams p = reference_params();
  SystemShootOptions o;
  o.richardson = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(shoot_system(p, p.a_L, p.phi_L, nullptr, o));
}
BENCHMARK(BM_ShootSystem)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_Dopri(benchmark::State& state) {
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  const std::vector<double> y0{0.0, 1.0};
  OdeOptions o;
  o.rtol = tol;
  o.atol = tol;
  auto f = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
    return true;
  };
  for (auto _ : state) benchmark::DoNotOptimize(integrate_dopri(f, 0.0, y0, 10.0, o));
}
BENCHMARK(BM_Dopri)->Arg(6)->Arg(9)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_SweepCurrent(benchmark::State& state) {
  const DiodeParams p = reference_params();
  const MeshPtr mesh = Mesh::graded(257);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_jx(p, 0.03, current_ceiling(1.0), 10, mesh));
  }
}
BENCHMARK(BM_SweepCurrent)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
