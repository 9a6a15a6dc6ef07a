#include <random>

#include <benchmark/benchmark.h>

#include "cavmag/dynamics.hpp"
#include "cavmag/gaussian.hpp"
#include "cavmag/steady_state.hpp"
#include "cavmag/sweep.hpp"
#include "cavmag/units.hpp"

using namespace cavmag;

namespace {

EffectiveConfig fig2_point() { return to_effective(preset("fig2").fixed); }

BareConfig kerr_drive() {
  BareConfig b;
  b.Delta_a = units::from_MHz(100.0);
  b.Delta_b = units::from_MHz(-110.0);
  b.Delta_c = units::from_MHz(-185.5);
  b.K_b = units::from_nHz(6.5);
  b.K_c = units::from_nHz(6.5);
  b.G = units::from_nHz(3.0);
  b.g_ab = units::from_MHz(30.0);
  b.gamma_a = units::from_MHz(18.6);
  b.gamma_b = units::from_MHz(6.7);
  b.gamma_c = units::from_MHz(6.7);
  b.Omega_b = 2e14;
  b.Omega_c = 2e14;
  return b;
}

}  // namespace

static void BM_RunPoint(benchmark::State& state) {
  const EffectiveConfig cfg = fig2_point();
  for (auto _ : state) benchmark::DoNotOptimize(run_point(cfg));
}
BENCHMARK(BM_RunPoint);

static void BM_StabilityCheck(benchmark::State& state) {
  const DriftMatrix A = build_drift(fig2_point());
  for (auto _ : state) benchmark::DoNotOptimize(is_stable(A));
}
BENCHMARK(BM_StabilityCheck);

static void BM_SolveLyapunov(benchmark::State& state) {
  const EffectiveConfig cfg = fig2_point();
  const DriftMatrix A = build_drift(cfg);
  const DiffusionMatrix D = build_diffusion(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov(A, D));
}
BENCHMARK(BM_SolveLyapunov);

static void BM_SymplecticEigenvalues(benchmark::State& state) {
  const EffectiveConfig cfg = fig2_point();
  const CovarianceMatrix V = solve_lyapunov(build_drift(cfg), build_diffusion(cfg));
  const Eigen::MatrixXd pt = partial_transpose(V, {ModeLabel::a});
  for (auto _ : state) benchmark::DoNotOptimize(symplectic_eigenvalues(pt));
}
BENCHMARK(BM_SymplecticEigenvalues);

static void BM_EntanglementMeasures(benchmark::State& state) {
  const EffectiveConfig cfg = fig2_point();
  const CovarianceMatrix V = solve_lyapunov(build_drift(cfg), build_diffusion(cfg));
  for (auto _ : state) benchmark::DoNotOptimize(entanglement_measures(V));
}
BENCHMARK(BM_EntanglementMeasures);

static void BM_SolveMeanField(benchmark::State& state) {
  const BareConfig b = kerr_drive();
  for (auto _ : state) benchmark::DoNotOptimize(solve_mean_field(b));
}
BENCHMARK(BM_SolveMeanField);

static void BM_BranchScan(benchmark::State& state) {
  const BareConfig b = kerr_drive();
  for (auto _ : state) {
    std::mt19937_64 rng(1);
    benchmark::DoNotOptimize(branch_scan(b, 16, rng));
  }
}
BENCHMARK(BM_BranchScan);

static void BM_SweepFig4(benchmark::State& state) {
  const SweepGrid g = preset("fig4");
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(g, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_SweepFig4)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
