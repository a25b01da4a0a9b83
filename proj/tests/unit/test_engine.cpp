#include <doctest.h>

#include <map>

#include "edgeids/engine.hpp"
#include "edgeids/errors.hpp"
#include "edgeids/model.hpp"
#include "edgeids/rng.hpp"

using namespace edgeids;

namespace {

MlpModel trained_model(Target t, std::size_t rows = 2500) {
  static std::map<int, MlpModel> cache;
  const int key = static_cast<int>(t);
  if (const auto it = cache.find(key); it != cache.end()) return it->second;
  Dataset train = fit_normalize(synthesize(SynthSpec::uniform(rows, 3.0, 60)));
  TrainConfig cfg = TrainConfig::defaults_for(t);
  cfg.seed = 8;
  cfg.epochs = 4;
  cfg.learning_rate = 0.02;
  cache[key] = train_mlp(train, t, cfg);
  return cache[key];
}

Dataset normalized_stream(std::size_t rows, std::uint64_t seed) {
  return fit_normalize(synthesize(SynthSpec::uniform(rows, 3.0, seed)));
}

EngineConfig dataflow(int lanes, int queue_depth = 16, int reuse_factor = 4) {
  EngineConfig cfg;
  cfg.kind = EngineKind::Dataflow;
  cfg.lanes = lanes;
  cfg.queue_depth = queue_depth;
  cfg.reuse_factor = reuse_factor;
  return cfg;
}

} // namespace

TEST_CASE("sequential engine on the all-zero binary model") {
  MlpModel zero;
  zero.topology = MlpTopology::for_target(Target::Attack);
  zero.target = Target::Attack;
  const auto& sizes = zero.topology.layer_sizes;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    zero.weights.emplace_back(static_cast<std::size_t>(sizes[l]) * sizes[l + 1], 0.0f);
    zero.biases.emplace_back(sizes[l + 1], 0.0f);
  }
  const Dataset stream = normalized_stream(16, 1);
  const PredictionBatch out = run_sequential(zero, stream);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    CHECK(out.class_ids[r] == 0);
    CHECK(out.row_scores(r)[0] == doctest::Approx(0.5));
  }
}

TEST_CASE("sequential engine equals per-row predict bit for bit") {
  const MlpModel model = trained_model(Target::Subcategory);
  const Dataset stream = normalized_stream(400, 2);
  const PredictionBatch batch = run_sequential(model, stream);
  for (std::size_t r = 0; r < stream.rows(); ++r) {
    const Prediction p = mlp_predict(model, stream.row(r));
    CHECK(batch.class_ids[r] == p.class_id);
    const auto scores = batch.row_scores(r);
    for (int c = 0; c < batch.classes; ++c) CHECK(scores[c] == p.scores[c]);
  }
}

TEST_CASE("dataflow lanes=1 queue_depth=1 degenerates to sequential") {
  const MlpModel model = trained_model(Target::Attack);
  const Dataset stream = normalized_stream(700, 3);
  const PredictionBatch seq = run_sequential(model, stream);
  const PredictionBatch flow = run_dataflow(model, stream, dataflow(1, 1, 1));
  CHECK(flow.class_ids == seq.class_ids);
  CHECK(flow.scores == seq.scores);
}

TEST_CASE("dataflow matches sequential bit for bit across lane counts") {
  const MlpModel model = trained_model(Target::Category);
  const Dataset stream = normalized_stream(10000, 4);
  const PredictionBatch seq = run_sequential(model, stream);
  for (const int lanes : {2, 4, 8}) {
    const PredictionBatch flow = run_dataflow(model, stream, dataflow(lanes));
    CHECK(flow.class_ids == seq.class_ids); // order preserved
    CHECK(flow.scores == seq.scores);       // bit-identical floats
  }
}

TEST_CASE("cross-engine class histograms coincide") {
  const MlpModel model = trained_model(Target::Attack);
  const Dataset stream = normalized_stream(10000, 5);
  const PredictionBatch seq = run_sequential(model, stream);
  const PredictionBatch flow = run_dataflow(model, stream, dataflow(4));
  std::map<int, std::size_t> seq_hist, flow_hist;
  for (const int c : seq.class_ids) ++seq_hist[c];
  for (const int c : flow.class_ids) ++flow_hist[c];
  CHECK(seq_hist == flow_hist);
}

TEST_CASE("tight queues cannot deadlock") {
  const MlpModel model = trained_model(Target::Attack);
  const Dataset stream = normalized_stream(5000, 6);
  const PredictionBatch seq = run_sequential(model, stream);
  // queue_depth 1 forces constant backpressure
  for (const int lanes : {1, 2, 3, 5, 8}) {
    const PredictionBatch flow = run_dataflow(model, stream, dataflow(lanes, 1));
    CHECK(flow.class_ids == seq.class_ids);
  }
  for (const int qd : {1, 2, 8}) {
    const PredictionBatch flow = run_dataflow(model, stream, dataflow(6, qd, 2));
    CHECK(flow.class_ids == seq.class_ids);
  }
}

TEST_CASE("dataflow handles empty and tiny streams") {
  const MlpModel model = trained_model(Target::Attack);
  Dataset empty;
  empty.norm_stats.min_max.assign(kFeatureCount, {0.0f, 1.0f});
  CHECK(run_dataflow(model, empty, dataflow(4)).rows() == 0);
  const Dataset tiny = normalized_stream(16, 7); // fewer rows than one chunk
  const PredictionBatch out = run_dataflow(model, tiny, dataflow(8, 2, 16));
  CHECK(out.class_ids == run_sequential(model, tiny).class_ids);
}

TEST_CASE("engine config invariants") {
  EngineConfig cfg;
  cfg.kind = EngineKind::Sequential;
  cfg.lanes = 2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = dataflow(0);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = dataflow(1, 0);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  const MlpModel model = trained_model(Target::Attack);
  const Dataset stream = normalized_stream(64, 8);
  EngineConfig seq;
  CHECK_THROWS_AS(run_dataflow(model, stream, seq), ConfigError);
}

TEST_CASE("bench reports the packets/seconds/throughput identity") {
  const MlpModel model = trained_model(Target::Attack);
  const Dataset stream = normalized_stream(2000, 9);
  EngineConfig seq;
  const BenchResult res = bench(seq, model, stream, 3, "attack");
  CHECK(res.packets_total == 2000);
  CHECK(res.wall_seconds > 0.0);
  CHECK(res.throughput_pps ==
        doctest::Approx(static_cast<double>(res.packets_total) / res.wall_seconds));
  CHECK(res.model_name == "attack");
}

TEST_CASE("bench validates workload and repetitions") {
  const MlpModel model = trained_model(Target::Attack);
  const Dataset small = normalized_stream(100, 10);
  EngineConfig seq;
  CHECK_THROWS_AS(bench(seq, model, small, 3), DataError);
  const Dataset ok = normalized_stream(1000, 11);
  CHECK_THROWS_AS(bench(seq, model, ok, 2), ConfigError);
}

TEST_CASE("doubling the workload moves throughput by less than 20%") {
  const MlpModel model = trained_model(Target::Attack);
  const Dataset base = normalized_stream(60000, 12);
  const Dataset doubled = normalized_stream(120000, 13);
  EngineConfig seq;
  const BenchResult a = bench(seq, model, base, 5);
  const BenchResult b = bench(seq, model, doubled, 5);
  const double ratio = b.throughput_pps / a.throughput_pps;
  CHECK(ratio > 0.8);
  CHECK(ratio < 1.25);
}
