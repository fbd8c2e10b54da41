#include <benchmark/benchmark.h>

#include <random>

#include "parabolica/action.hpp"
#include "parabolica/kepler1d.hpp"
#include "parabolica/lambert.hpp"
#include "parabolica/parabolic.hpp"

using namespace parabolica;
namespace cs = parabolica::configspace;

static void BM_KeplerSolve(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto _ : state) {
    const double a = unit(rng), b = a + 0.1 + 2.0 * unit(rng), s = 0.1 + 5.0 * unit(rng);
    benchmark::DoNotOptimize(kepler::kepler_action_S(a, b, s, 1.0));
  }
}
BENCHMARK(BM_KeplerSolve);

static void BM_ScriptG(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kepler::script_G(1.7, 1000.0, 3.0));
}
BENCHMARK(BM_ScriptG);

static void BM_ActionAndGradient(benchmark::State& state) {
  const MassSystem sys(std::vector<double>(static_cast<std::size_t>(state.range(0)), 1.0), 2);
  std::mt19937_64 rng(2);
  DiscretePath p;
  p.times = action::make_grid(0.0, 1.0, {1000, GridSpec::Grading::Uniform, 3.0, 0.0});
  const Configuration a = cs::random_configuration(sys, rng), b = cs::random_configuration(sys, rng);
  for (double t : p.times) p.nodes.push_back(a * (1.0 - t) + b * t);
  for (auto _ : state) {
    benchmark::DoNotOptimize(action::discrete_action(sys, p));
    benchmark::DoNotOptimize(action::action_gradient(sys, p));
  }
}
BENCHMARK(BM_ActionAndGradient)->Arg(3)->Arg(5);

static void BM_MinimizeFixedEndpoints(benchmark::State& state) {
  const MassSystem sys({1.0, 1.0, 1.0}, 2);
  std::mt19937_64 rng(3);
  const Configuration x = cs::normalize(sys, cs::random_configuration(sys, rng));
  const Configuration y = cs::normalize(sys, cs::random_configuration(sys, rng)) * 1.5;
  MinimizeOptions opt;
  opt.grid.segments = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(action::minimize_fixed_endpoints(sys, x, y, 1.0, opt).action);
}
BENCHMARK(BM_MinimizeFixedEndpoints)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_LocalizationSample(benchmark::State& state) {
  const MassSystem sys({1.0, 1.0, 1.0}, 2);
  const CentralConfig cc = central::find_minimizing_central_configuration(sys);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert::verify_localization(sys, cc, {1e-3}, {1000.0}).samples);
  }
}
BENCHMARK(BM_LocalizationSample)->Unit(benchmark::kMillisecond);

static void BM_ParabolicSequence(benchmark::State& state) {
  const MassSystem sys({1.0, 1.0, 1.0}, 2);
  const CentralConfig cc = central::find_minimizing_central_configuration(sys);
  std::mt19937_64 rng(7);
  const Configuration x_i = cs::normalize(sys, cs::random_configuration(sys, rng)) * (0.2 * cc.constants.alpha);
  ParabolicOptions o;
  o.K = 5;
  o.segments = 500;
  for (auto _ : state) benchmark::DoNotOptimize(parabolic::minimizer_sequence(sys, cc, x_i, o).size());
}
BENCHMARK(BM_ParabolicSequence)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
