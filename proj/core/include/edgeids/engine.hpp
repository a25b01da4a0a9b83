#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgeids/dataset.hpp"
#include "edgeids/mlp.hpp"

namespace edgeids {

enum class EngineKind { Sequential, Dataflow };

/// Dataflow knobs. `lanes` is the worker thread count; workers are
/// work-conserving and may execute any pipeline stage, so lanes=1 really is
/// one compute thread. `reuse_factor` sets lane task granularity: each
/// dispatch chunk carries reuse_factor * lanes rows. `queue_depth` bounds
/// every inter-stage queue (in chunks).
struct EngineConfig {
  EngineKind kind = EngineKind::Sequential;
  int lanes = 1;
  int queue_depth = 16;
  int reuse_factor = 4;

  void validate() const; // throws ConfigError (sequential requires lanes=1)
};

/// Struct-of-arrays batch output: class_ids[i] and scores[i*classes ...]
/// belong to input row i.
struct PredictionBatch {
  int classes = 0;
  std::vector<int> class_ids;
  std::vector<float> scores;

  std::size_t rows() const { return class_ids.size(); }
  std::span<const float> row_scores(std::size_t i) const {
    return {scores.data() + i * classes, static_cast<std::size_t>(classes)};
  }
};

/// Single-lane in-order evaluation; row i runs through the same dense
/// kernels as mlp_predict, so per-row results match it bit for bit.
PredictionBatch run_sequential(const MlpModel& model, const Dataset& batch);

/// Staged pipeline (dense 32 -> dense 64 -> output+softmax) over bounded
/// queues. Accumulation order per neuron is identical to the sequential
/// engine, so predictions are bit-identical; outputs land in input order.
PredictionBatch run_dataflow(const MlpModel& model, const Dataset& stream,
                             const EngineConfig& cfg);

struct BenchResult {
  std::size_t packets_total = 0;
  double wall_seconds = 0.0;
  double throughput_pps = 0.0;
  EngineConfig engine;
  std::string model_name;
};

/// Runs one untimed warm-up pass, then `repetitions` timed passes; reports
/// the median. Requires at least 1000 workload rows and 3 repetitions.
BenchResult bench(const EngineConfig& engine, const MlpModel& model, const Dataset& workload,
                  int repetitions, std::string model_name = {});

} // namespace edgeids
