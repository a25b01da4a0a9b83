#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edgeids/dataset.hpp"
#include "edgeids/labels.hpp"

namespace edgeids {

/// Fixed family: 24 inputs, hidden layers of 32 and 64 with ReLU, softmax
/// output head of 2/4/7 classes depending on the target.
struct MlpTopology {
  std::vector<int> layer_sizes;

  static MlpTopology for_target(Target t) { return {{24, 32, 64, class_count(t)}}; }

  int inputs() const { return layer_sizes.front(); }
  int outputs() const { return layer_sizes.back(); }
  std::size_t parameter_count() const;
  void validate() const; // throws ConfigError unless [24,32,64,K], K in {2,4,7}
};

struct MlpModel {
  MlpTopology topology;
  Target target = Target::Attack;
  std::vector<std::vector<float>> weights; // per layer, out x in row-major
  std::vector<std::vector<float>> biases;  // per layer, out

  int outputs() const { return topology.outputs(); }
  void validate() const; // shapes match topology, all values finite
};

struct Prediction {
  int class_id = 0;
  std::vector<float> scores;
};

/// out[j] = b[j] + sum_i w[j*in + i] * x[i], accumulated in ascending input
/// index order; optionally clamped at zero. Both engines and predict() run
/// through this single kernel so results are bit-identical everywhere.
void dense_layer(std::span<const float> weights, std::span<const float> biases,
                 std::span<const float> x, std::span<float> out, bool relu);

/// Max-subtracted exp / sum, ascending index order.
void softmax_inplace(std::span<float> v);

/// Index of the maximum; ties resolve to the lowest index.
int argmax_lowest(std::span<const float> v);

Prediction mlp_predict(const MlpModel& model, std::span<const float> x);

enum class ClassWeighting { None, InverseFrequency };

struct TrainConfig {
  int epochs = 20;
  int batch_size = 256;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  std::uint64_t seed = 0;
  ClassWeighting class_weighting = ClassWeighting::None;

  // baseline hyperparameters
  int tree_max_depth = 16;
  int forest_size = 10;
  bool rf_bootstrap = true;
  int rf_feature_subsample = 5; // features considered per split, 0 = all
  int svm_epochs = 10;
  double svm_learning_rate = 0.1;
  double svm_lambda = 1e-4;
  double nb_variance_floor = 1e-9;

  void validate() const;

  /// Spec'd per-target default: inverse-frequency weighting for the
  /// imbalanced category/subcategory heads, none for attack.
  static TrainConfig defaults_for(Target t) {
    TrainConfig cfg;
    cfg.class_weighting =
        t == Target::Attack ? ClassWeighting::None : ClassWeighting::InverseFrequency;
    return cfg;
  }
};

/// Mini-batch SGD with momentum on softmax cross-entropy. He-initialized
/// from the seed; single-threaded, so a fixed (seed, data, config) triple
/// reproduces the model bit for bit.
MlpModel train_mlp(const Dataset& train, Target target, const TrainConfig& cfg);

/// Per-sample weights for the configured weighting scheme (mean ~1).
std::vector<double> class_weights(std::span<const int> labels, int classes, ClassWeighting w);

// ---------------------------------------------------------------------------
// Shadow math, templated so gradient checks can run the identical algorithm
// in double precision.

template <typename T>
struct MlpParams {
  std::vector<int> sizes;
  std::vector<std::vector<T>> w;
  std::vector<std::vector<T>> b;

  static MlpParams zeros_like(const MlpParams& other) {
    MlpParams out;
    out.sizes = other.sizes;
    for (const auto& wl : other.w) out.w.emplace_back(wl.size(), T(0));
    for (const auto& bl : other.b) out.b.emplace_back(bl.size(), T(0));
    return out;
  }
};

template <typename T>
MlpParams<T> shadow_params(const MlpModel& model) {
  MlpParams<T> p;
  p.sizes = model.topology.layer_sizes;
  for (const auto& wl : model.weights) p.w.emplace_back(wl.begin(), wl.end());
  for (const auto& bl : model.biases) p.b.emplace_back(bl.begin(), bl.end());
  return p;
}

/// Weighted mean softmax cross-entropy over a batch.
template <typename T>
T mlp_batch_loss(const MlpParams<T>& p, std::span<const T> xs, std::span<const int> ys,
                 std::span<const T> sample_weights);

/// Same loss; also accumulates parameter gradients into `grads`.
template <typename T>
T mlp_batch_gradients(const MlpParams<T>& p, std::span<const T> xs, std::span<const int> ys,
                      std::span<const T> sample_weights, MlpParams<T>& grads);

} // namespace edgeids
