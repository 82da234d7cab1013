// Serial reference vs OpenMP over an ensemble of coupled runs, plus the
// per-step cost of the dealiased nonlinear term.
#include <benchmark/benchmark.h>

#include "sclaw/ensemble.hpp"
#include "sclaw/flux.hpp"

using namespace sclaw;

namespace {

void coupled_ensemble(benchmark::State& st, Execution exec) {
  const int M = static_cast<int>(st.range(0));
  ModelSpec model{0.1, FluxSpec::burgers(), NoiseSpec::from_profile(M, {0.5, 3.0})};
  SolverConfig cfg;
  cfg.modes = M;
  auto basis = ModeBasis::make(M);
  const SpectralField u0 = SpectralField::mode(basis, 1, 1.0), v0 = SpectralField::mode(basis, 1, -1.0);
  ConfluenceOptions opts;
  opts.horizon = 0.2;
  opts.stop_at_min_epsilon = false;
  const auto seeds = seed_range(1, 16);
  for (auto _ : st) benchmark::DoNotOptimize(confluence_ensemble(u0, v0, model, cfg, seeds, opts, exec));
}

void BM_ensemble_serial(benchmark::State& st) { coupled_ensemble(st, Execution::serial); }
void BM_ensemble_openmp(benchmark::State& st) { coupled_ensemble(st, Execution::openmp); }

void BM_nonlinear_term(benchmark::State& st) {
  const int M = static_cast<int>(st.range(0));
  auto basis = ModeBasis::make(M);
  std::vector<double> c(M);
  for (int m = 0; m < M; ++m) c[m] = 1.0 / (1 + m);
  const SpectralField u(basis, c);
  for (auto _ : st) benchmark::DoNotOptimize(nonlinear_term(FluxSpec::burgers(), u));
}

}  // namespace

BENCHMARK(BM_ensemble_serial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ensemble_openmp)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nonlinear_term)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
