#include <random>

#include <benchmark/benchmark.h>

#include "aqs/analogue.hpp"
#include "aqs/circuit.hpp"
#include "aqs/fermion_studies.hpp"
#include "aqs/gaussian.hpp"
#include "aqs/grid.hpp"
#include "aqs/harness.hpp"
#include "aqs/lindblad.hpp"

namespace {

void BM_EvolveSimulator(benchmark::State& state) {
  const int qubits = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  const aqs::LindbladGenerator target = aqs::harness::random_qubit_target(qubits, 2, rng);
  const aqs::SimulatorGenerator sim = aqs::encode(target, 0.1);
  const aqs::CompiledGenerator gen(sim.combined);
  const aqs::Mat rho0 = aqs::initial_combined_state(sim, aqs::harness::random_density_matrix(sim.system_dim(), rng));
  for (auto _ : state) benchmark::DoNotOptimize(aqs::evolve(gen, rho0, 10.0));
  state.SetLabel("dim " + std::to_string(rho0.rows()));
}
BENCHMARK(BM_EvolveSimulator)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SteadyCovariance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const aqs::QuadraticModel model = aqs::noisy_simulator_chain(n, aqs::ChainParams{}, 0.2, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(aqs::steady_state_covariance(model));
}
BENCHMARK(BM_SteadyCovariance)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);

void BM_NoiselessSteadyError(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(aqs::steady_density_error(n, aqs::ChainParams{}, 0.1));
}
BENCHMARK(BM_NoiselessSteadyError)->Arg(21)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_ClockFixedPoint(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const aqs::RoundCircuit c = aqs::random_circuit(1, static_cast<int>(state.range(0)), rng);
  const aqs::ClockEncoding enc = aqs::encode_clock(c);
  for (auto _ : state) benchmark::DoNotOptimize(aqs::fixed_point(enc.generator));
}
BENCHMARK(BM_ClockFixedPoint)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_GridRun(benchmark::State& state) {
  std::mt19937_64 rng(13);
  const aqs::RoundCircuit c = aqs::random_circuit(2, 1, rng);
  const aqs::GridEncoding enc = aqs::encode_grid(c);
  const std::vector<int> start = enc.initial_labels();
  for (auto _ : state) benchmark::DoNotOptimize(aqs::run_grid(enc, start));
}
BENCHMARK(BM_GridRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
