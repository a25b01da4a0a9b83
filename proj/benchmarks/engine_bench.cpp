#include <benchmark/benchmark.h>

#include "edgeids/engine.hpp"
#include "edgeids/mlp.hpp"
#include "edgeids/rng.hpp"

using namespace edgeids;

namespace {

MlpModel make_model(Target t) {
  MlpModel m;
  m.topology = MlpTopology::for_target(t);
  m.target = t;
  Rng rng(17 + static_cast<int>(t));
  const auto& sizes = m.topology.layer_sizes;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    m.weights.emplace_back(static_cast<std::size_t>(sizes[l]) * sizes[l + 1]);
    for (float& v : m.weights.back()) v = static_cast<float>(rng.gaussian() * 0.2);
    m.biases.emplace_back(sizes[l + 1], 0.0f);
  }
  return m;
}

const Dataset& workload() {
  static const Dataset ds = fit_normalize(synthesize(SynthSpec::uniform(50000, 3.0, 99)));
  return ds;
}

void BM_Sequential(benchmark::State& state) {
  const MlpModel model = make_model(static_cast<Target>(state.range(0)));
  const Dataset& stream = workload();
  for (auto _ : state) {
    auto out = run_sequential(model, stream);
    benchmark::DoNotOptimize(out.class_ids.data());
  }
  state.SetItemsProcessed(state.iterations() * stream.rows());
}
BENCHMARK(BM_Sequential)
    ->Arg(static_cast<int>(Target::Attack))
    ->Arg(static_cast<int>(Target::Subcategory))
    ->Unit(benchmark::kMillisecond);

void BM_Dataflow(benchmark::State& state) {
  const MlpModel model = make_model(Target::Attack);
  const Dataset& stream = workload();
  EngineConfig cfg;
  cfg.kind = EngineKind::Dataflow;
  cfg.lanes = static_cast<int>(state.range(0));
  cfg.queue_depth = 16;
  cfg.reuse_factor = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto out = run_dataflow(model, stream, cfg);
    benchmark::DoNotOptimize(out.class_ids.data());
  }
  state.SetItemsProcessed(state.iterations() * stream.rows());
}
BENCHMARK(BM_Dataflow)
    ->Args({1, 4})
    ->Args({2, 4})
    ->Args({4, 4})
    ->Args({4, 16})
    ->Args({8, 4})
    ->Unit(benchmark::kMillisecond);

} // namespace
