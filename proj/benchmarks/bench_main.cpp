// Hot paths of the solver on the shipped baseline: one 20-year simulation,
// one agent's best response and one full relaxation step z(x).

#include <benchmark/benchmark.h>

#include <vector>

#include "gwnash/app.hpp"
#include "gwnash/config.hpp"
#include "gwnash/game.hpp"
#include "gwnash/hydro.hpp"
#include "gwnash/sim.hpp"

using namespace gwnash;

namespace {

const sim::ScenarioInputs& baseline_inputs() {
  static const sim::ScenarioInputs in =
      app::resolve_inputs(io::load_config(std::string(GWNASH_DATA_DIR) + "/baseline.json"));
  return in;
}

sim::JointStrategy start(const sim::ScenarioInputs& in) {
  return game::random_feasible_strategy(in.num_agents(), in.num_crops(),
                                        static_cast<std::size_t>(in.horizon), 1);
}

void BM_StepHeads(benchmark::State& state) {
  const auto net = hydro::default_five_agent_network();
  std::vector<double> heads{125, 113, 125, 113, 118}, out(5), d(5, 0.5);
  for (auto _ : state) {
    hydro::step_heads_into(heads, 118.8, net, 0.1, d, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_StepHeads);

void BM_RunSimulation(benchmark::State& state) {
  const auto& in = baseline_inputs();
  const auto x = start(in);
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_simulation(x, in));
}
BENCHMARK(BM_RunSimulation);

void BM_UtilityEvaluator(benchmark::State& state) {
  const auto& in = baseline_inputs();
  const auto x = start(in);
  sim::UtilityEvaluator eval(in);
  std::vector<double> u(in.num_agents());
  for (auto _ : state) {
    eval.utilities(x, u);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_UtilityEvaluator);

void BM_BestResponse(benchmark::State& state) {
  const auto& in = baseline_inputs();
  const auto x = start(in);
  const game::RelaxationConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(game::best_response(0, x, in, nullptr, cfg));
}
BENCHMARK(BM_BestResponse)->Unit(benchmark::kMillisecond);

void BM_OptimumResponse(benchmark::State& state) {
  const auto& in = baseline_inputs();
  const auto x = start(in);
  game::RelaxationConfig cfg;
  cfg.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(game::optimum_response(x, in, nullptr, cfg));
}
BENCHMARK(BM_OptimumResponse)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
