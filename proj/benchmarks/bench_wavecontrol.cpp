#include <benchmark/benchmark.h>

#include "wavecontrol/ocp.hpp"

using namespace wavecontrol;

namespace {

SliceGeometryConfig slice(double h) {
  SliceGeometryConfig g;
  g.mesh_size = h;
  return g;
}

const WaveEnvironment kEnv = WaveEnvironment::from_period(1.2, 2.5);
const RigidBody2D kBody = body_matrices(0.5 * kWaterDensity, 0.5);

void BM_Dispersion(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_dispersion(kEnv.omega, 2.5));
}
BENCHMARK(BM_Dispersion);

void BM_Mesh(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_slice_mesh(slice(h)));
}
BENCHMARK(BM_Mesh)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const Mesh2D mesh = build_slice_mesh(slice(1.0 / static_cast<double>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh, kEnv));
  state.counters["dofs"] = assemble(mesh, kEnv).potential_size();
}
BENCHMARK(BM_Assemble)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_PressureSolve(benchmark::State& state) {
  const AssembledOperators ops = assemble(build_slice_mesh(slice(1.0 / static_cast<double>(state.range(0)))), kEnv);
  const ComplexVector u = ComplexVector::Zero(ops.control_size());
  for (auto _ : state) benchmark::DoNotOptimize(solve_state_pressure(ops, kBody, u));
  state.counters["dofs"] = ops.potential_size();
}
BENCHMARK(BM_PressureSolve)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_PassiveGradient(benchmark::State& state) {
  const AssembledOperators ops = assemble(build_slice_mesh(slice(0.1)), kEnv);
  const ControlMode mode = state.range(0) == 0 ? ControlMode::Membrane : ControlMode::Plate;
  const ControlTensors t = mode == ControlMode::Plate ? assemble_plate_tensor(ops) : assemble_membrane_tensors(ops);
  CostConfig cfg;
  const auto problem = make_passive_problem(mode, ops, t, kBody, cfg);
  const int l = ops.control_size();
  RealVector x = pack_passive(RealVector::Constant(l, 1.0), RealVector::Constant(l, 0.5));
  for (auto _ : state) {
    x(0) += 1e-9;  // defeat the factorization cache
    benchmark::DoNotOptimize(problem->evaluate(x, true));
  }
  state.SetLabel(std::string(to_string(mode)));
}
BENCHMARK(BM_PassiveGradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LQKKT(benchmark::State& state) {
  const AssembledOperators ops = assemble(build_slice_mesh(slice(0.1)), kEnv);
  CostConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(solve_lq_pressure(ops, kBody, cfg));
}
BENCHMARK(BM_LQKKT)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
