#include <benchmark/benchmark.h>

#include <numbers>

#include "qdarwin/darwinism.hpp"
#include "qdarwin/estimator.hpp"
#include "qdarwin/graphstate.hpp"
#include "qdarwin/measurement.hpp"

namespace {

using namespace qdarwin;

constexpr double kPi = std::numbers::pi;

void BM_StarCurve(benchmark::State& state) {
  const auto n_env = static_cast<int>(state.range(0));
  const auto psi = graphstate::build_graph_state(graphstate::star_spec(n_env, kPi));
  for (auto _ : state) benchmark::DoNotOptimize(darwinism::mi_curve(psi, 0));
}
BENCHMARK(BM_StarCurve)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_DiamondCurve(benchmark::State& state) {
  const auto n_env = static_cast<int>(state.range(0));
  const auto psi = graphstate::build_graph_state(graphstate::diamond_spec(n_env, kPi, kPi));
  for (auto _ : state) benchmark::DoNotOptimize(darwinism::mi_curve(psi, 0));
}
BENCHMARK(BM_DiamondCurve)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_Reconstruction(benchmark::State& state) {
  const auto rho = qcore::DensityMatrix::from_pure(
      graphstate::named_state(graphstate::named::DiamondCanonical{}));
  const auto strings = qcore::all_pauli_strings(4);
  const auto table = estimator::correlator_table(rho, strings);
  for (auto _ : state) benchmark::DoNotOptimize(estimator::reconstruct_density(table));
}
BENCHMARK(BM_Reconstruction);

void BM_EstimateClosedForm(benchmark::State& state) {
  const auto psi = graphstate::named_state(graphstate::named::StarExperimental{});
  measurement::RunConfig cfg;
  cfg.seed = 1;
  cfg.bootstrap_resamples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        measurement::estimate_mi_curve(psi, 0, cfg, measurement::Pipeline::kClosedForm));
  }
}
BENCHMARK(BM_EstimateClosedForm)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_EstimateReconstruction(benchmark::State& state) {
  const auto psi = graphstate::named_state(graphstate::named::DiamondCanonical{});
  measurement::RunConfig cfg;
  cfg.seed = 1;
  cfg.bootstrap_resamples = 20;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        measurement::estimate_mi_curve(psi, 0, cfg, measurement::Pipeline::kReconstruction));
  }
}
BENCHMARK(BM_EstimateReconstruction)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
