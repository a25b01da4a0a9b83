#include "edgeids/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <thread>

#include "edgeids/errors.hpp"

namespace edgeids {

void EngineConfig::validate() const {
  if (lanes < 1 || queue_depth < 1 || reuse_factor < 1)
    throw ConfigError("engine lanes, queue_depth and reuse_factor must be >= 1");
  if (kind == EngineKind::Sequential && lanes != 1)
    throw ConfigError("sequential engine requires lanes = 1");
}

PredictionBatch run_sequential(const MlpModel& model, const Dataset& batch) {
  model.validate();
  const int k = model.outputs();
  PredictionBatch out;
  out.classes = k;
  out.class_ids.resize(batch.rows());
  out.scores.resize(batch.rows() * static_cast<std::size_t>(k));

  std::vector<float> h1(32), h2(64);
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    std::span<float> scores(out.scores.data() + r * k, static_cast<std::size_t>(k));
    dense_layer(model.weights[0], model.biases[0], batch.row(r), h1, true);
    dense_layer(model.weights[1], model.biases[1], h1, h2, true);
    dense_layer(model.weights[2], model.biases[2], h2, scores, false);
    softmax_inplace(scores);
    out.class_ids[r] = argmax_lowest(scores);
  }
  return out;
}

namespace {

struct Chunk {
  std::size_t row_begin = 0;
  std::size_t rows = 0;
  std::vector<float> buf; // activations produced by the previous stage
};

using ChunkPtr = std::unique_ptr<Chunk>;

/// Bounded MPMC queue. Workers only use the non-blocking operations; the
/// producer may block on push and relies on workers draining the queue.
class BoundedQueue {
public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

  bool try_push(ChunkPtr& item) {
    {
      std::lock_guard lock(m_);
      if (q_.size() >= capacity_) return false;
      q_.push_back(std::move(item));
    }
    cv_pop_.notify_one();
    return true;
  }

  void push_blocking(ChunkPtr item) {
    std::unique_lock lock(m_);
    cv_push_.wait(lock, [&] { return q_.size() < capacity_; });
    q_.push_back(std::move(item));
    lock.unlock();
    cv_pop_.notify_one();
  }

  ChunkPtr try_pop() {
    ChunkPtr item;
    {
      std::lock_guard lock(m_);
      if (q_.empty()) return nullptr;
      item = std::move(q_.front());
      q_.pop_front();
    }
    cv_push_.notify_one();
    return item;
  }

  /// Parks until something is pushed or the timeout elapses.
  template <typename Rep, typename Period>
  ChunkPtr pop_wait(std::chrono::duration<Rep, Period> timeout) {
    std::unique_lock lock(m_);
    if (q_.empty()) cv_pop_.wait_for(lock, timeout);
    if (q_.empty()) return nullptr;
    ChunkPtr item = std::move(q_.front());
    q_.pop_front();
    lock.unlock();
    cv_push_.notify_one();
    return item;
  }

  void wake_all() {
    cv_pop_.notify_all();
    cv_push_.notify_all();
  }

private:
  std::mutex m_;
  std::condition_variable cv_push_, cv_pop_;
  std::deque<ChunkPtr> q_;
  std::size_t capacity_;
};

constexpr int kStages = 3;

/// Three dense stages over bounded queues. queue_[s] holds chunks ready for
/// stage s. Workers prefer later stages; a worker that cannot push a result
/// downstream processes one chunk from the full target queue instead of
/// blocking, so every push eventually succeeds and no (lanes, queue_depth)
/// combination can deadlock.
class DataflowPipeline {
public:
  DataflowPipeline(const MlpModel& model, const Dataset& stream, const EngineConfig& cfg,
                   PredictionBatch& out)
      : model_(model),
        stream_(stream),
        out_(out),
        queues_{BoundedQueue(static_cast<std::size_t>(cfg.queue_depth)),
                BoundedQueue(static_cast<std::size_t>(cfg.queue_depth)),
                BoundedQueue(static_cast<std::size_t>(cfg.queue_depth))} {
    chunk_rows_ = static_cast<std::size_t>(cfg.reuse_factor) * cfg.lanes;
    total_chunks_ = (stream.rows() + chunk_rows_ - 1) / chunk_rows_;
  }

  void run(int lanes) {
    done_.store(0, std::memory_order_relaxed);
    std::vector<std::thread> workers;
    workers.reserve(lanes);
    for (int w = 0; w < lanes; ++w)
      workers.emplace_back([this] { worker(); });

    for (std::size_t begin = 0; begin < stream_.rows(); begin += chunk_rows_) {
      auto chunk = std::make_unique<Chunk>();
      chunk->row_begin = begin;
      chunk->rows = std::min(chunk_rows_, stream_.rows() - begin);
      queues_[0].push_blocking(std::move(chunk));
    }
    for (auto& t : workers) t.join();
  }

private:
  bool finished() const { return done_.load(std::memory_order_acquire) == total_chunks_; }

  void worker() {
    while (!finished()) {
      bool worked = false;
      for (int s = kStages - 1; s >= 0; --s) {
        if (ChunkPtr c = queues_[s].try_pop()) {
          process(s, std::move(c));
          worked = true;
          break;
        }
      }
      if (worked) continue;
      if (finished()) break;
      // brief park; re-polls even if a notify is missed
      if (ChunkPtr c = queues_[0].pop_wait(std::chrono::microseconds(100)))
        process(0, std::move(c));
    }
    for (auto& q : queues_) q.wake_all();
  }

  void process(int stage, ChunkPtr chunk) {
    const auto& sizes = model_.topology.layer_sizes;
    const std::size_t out_width = static_cast<std::size_t>(sizes[stage + 1]);
    const bool last = stage == kStages - 1;
    std::vector<float> result;
    if (!last) result.resize(chunk->rows * out_width);

    for (std::size_t i = 0; i < chunk->rows; ++i) {
      std::span<const float> in =
          stage == 0 ? stream_.row(chunk->row_begin + i)
                     : std::span<const float>(chunk->buf.data() + i * sizes[stage],
                                              static_cast<std::size_t>(sizes[stage]));
      if (last) {
        const std::size_t row = chunk->row_begin + i;
        std::span<float> scores(out_.scores.data() + row * out_width, out_width);
        dense_layer(model_.weights[stage], model_.biases[stage], in, scores, false);
        softmax_inplace(scores);
        out_.class_ids[row] = argmax_lowest(scores);
      } else {
        std::span<float> dst(result.data() + i * out_width, out_width);
        dense_layer(model_.weights[stage], model_.biases[stage], in, dst, true);
      }
    }

    if (last) {
      if (done_.fetch_add(1, std::memory_order_acq_rel) + 1 == total_chunks_)
        for (auto& q : queues_) q.wake_all();
      return;
    }

    chunk->buf = std::move(result);
    const int next = stage + 1;
    while (!queues_[next].try_push(chunk)) {
      // target full: help drain it instead of blocking
      if (ChunkPtr other = queues_[next].try_pop()) process(next, std::move(other));
    }
  }

  const MlpModel& model_;
  const Dataset& stream_;
  PredictionBatch& out_;
  std::array<BoundedQueue, kStages> queues_;
  std::size_t chunk_rows_ = 1;
  std::size_t total_chunks_ = 0;
  std::atomic<std::size_t> done_{0};
};

} // namespace

PredictionBatch run_dataflow(const MlpModel& model, const Dataset& stream,
                             const EngineConfig& cfg) {
  cfg.validate();
  if (cfg.kind != EngineKind::Dataflow)
    throw ConfigError("run_dataflow requires a dataflow engine config");
  model.validate();

  PredictionBatch out;
  out.classes = model.outputs();
  out.class_ids.resize(stream.rows());
  out.scores.resize(stream.rows() * static_cast<std::size_t>(out.classes));
  if (stream.rows() == 0) return out;

  DataflowPipeline pipeline(model, stream, cfg, out);
  pipeline.run(cfg.lanes);
  return out;
}

BenchResult bench(const EngineConfig& engine, const MlpModel& model, const Dataset& workload,
                  int repetitions, std::string model_name) {
  engine.validate();
  if (workload.rows() < 1000)
    throw DataError("bench workload must have at least 1000 rows");
  if (repetitions < 3) throw ConfigError("bench requires at least 3 repetitions");

  auto run_once = [&] {
    if (engine.kind == EngineKind::Sequential)
      run_sequential(model, workload);
    else
      run_dataflow(model, workload, engine);
  };

  run_once(); // warm-up, untimed

  std::vector<double> seconds;
  seconds.reserve(repetitions);
  for (int rep = 0; rep < repetitions; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    run_once();
    const auto stop = std::chrono::steady_clock::now();
    seconds.push_back(
        std::max(std::chrono::duration<double>(stop - start).count(), 1e-9));
  }
  std::sort(seconds.begin(), seconds.end());
  const double median = repetitions % 2 ? seconds[repetitions / 2]
                                        : 0.5 * (seconds[repetitions / 2 - 1] +
                                                 seconds[repetitions / 2]);

  BenchResult result;
  result.packets_total = workload.rows();
  result.wall_seconds = median;
  result.throughput_pps = static_cast<double>(workload.rows()) / median;
  result.engine = engine;
  result.model_name = std::move(model_name);
  return result;
}

} // namespace edgeids
