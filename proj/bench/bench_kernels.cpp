#include "kbstab/nongaussian.hpp"
#include "kbstab/propagate.hpp"
#include "kbstab/scenarios.hpp"
#include "kbstab/smallnoise.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace kbstab;

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) ? "parallel" : "serial");
  state.counters["threads"] = state.range(0) ? parallel_threads() : 1;
}

void BM_WindowGramians(benchmark::State& state) {
  const ExperimentConfig cfg = scenarios::rotation_mean_config();
  const TimeGrid grid = TimeGrid::over(cfg.horizon, cfg.dt);
  const MatrixPath phi = fundamental_matrix(cfg.model, grid);
  for (auto _ : state)
    benchmark::DoNotOptimize(uco_gramian(cfg.model, phi, cfg.uco_window, 1, exec_of(state)));
  label(state);
}

void BM_BankOracle(benchmark::State& state) {
  ExperimentConfig cfg = scenarios::two_atom_config();
  cfg.atoms.points = (MatrixXd(8, 1) << -4, -3, -2, -1, 1, 2, 3, 4).finished();
  cfg.atoms.weights = VectorXd::Constant(8, 0.125);
  SimulationSpec spec;
  spec.grid = TimeGrid::over(10.0, cfg.dt);
  spec.substeps = cfg.substeps;
  spec.init = cfg.true_init;
  spec.atoms = cfg.atoms;
  const ObservationPath obs = generate_observations(cfg.model, spec, cfg.seed);
  for (auto _ : state)
    benchmark::DoNotOptimize(bank_oracle(cfg.model, obs, cfg.atoms, cfg.true_init, exec_of(state)));
  label(state);
}

void BM_EpsilonSweep(benchmark::State& state) {
  ExperimentConfig cfg = scenarios::smallnoise_config();
  cfg.mc_runs = 10;
  cfg.horizon = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(run_epsilon_sweep(cfg, exec_of(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_WindowGramians)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BankOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpsilonSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
