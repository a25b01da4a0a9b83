#include "edgeids/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "edgeids/errors.hpp"
#include "edgeids/rng.hpp"

namespace edgeids {

std::size_t MlpTopology::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
    n += static_cast<std::size_t>(layer_sizes[l]) * layer_sizes[l + 1] + layer_sizes[l + 1];
  return n;
}

void MlpTopology::validate() const {
  const bool shape_ok = layer_sizes.size() == 4 && layer_sizes[0] == kFeatureCount &&
                        layer_sizes[1] == 32 && layer_sizes[2] == 64;
  const int k = layer_sizes.empty() ? 0 : layer_sizes.back();
  if (!shape_ok || (k != 2 && k != 4 && k != 7))
    throw ConfigError("MLP topology must be [24, 32, 64, K] with K in {2, 4, 7}");
}

void MlpModel::validate() const {
  topology.validate();
  if (topology.outputs() != class_count(target))
    throw ConfigError("MLP output layer does not match target class count");
  const auto& sizes = topology.layer_sizes;
  if (weights.size() != sizes.size() - 1 || biases.size() != sizes.size() - 1)
    throw ConfigError("MLP layer count mismatch");
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    if (weights[l].size() != static_cast<std::size_t>(sizes[l]) * sizes[l + 1] ||
        biases[l].size() != static_cast<std::size_t>(sizes[l + 1]))
      throw ConfigError("MLP parameter shape mismatch at layer " + std::to_string(l));
    for (const float v : weights[l])
      if (!std::isfinite(v)) throw ConfigError("non-finite MLP weight");
    for (const float v : biases[l])
      if (!std::isfinite(v)) throw ConfigError("non-finite MLP bias");
  }
}

void dense_layer(std::span<const float> weights, std::span<const float> biases,
                 std::span<const float> x, std::span<float> out, bool relu) {
  const std::size_t in = x.size();
  const std::size_t n = out.size();
  for (std::size_t j = 0; j < n; ++j) {
    float acc = biases[j];
    const float* w = weights.data() + j * in;
    for (std::size_t i = 0; i < in; ++i) acc += w[i] * x[i];
    out[j] = relu && acc < 0.0f ? 0.0f : acc;
  }
}

void softmax_inplace(std::span<float> v) {
  float mx = v[0];
  for (const float s : v) mx = std::max(mx, s);
  float sum = 0.0f;
  for (float& s : v) {
    s = std::exp(s - mx);
    sum += s;
  }
  for (float& s : v) s /= sum;
}

int argmax_lowest(std::span<const float> v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

Prediction mlp_predict(const MlpModel& model, std::span<const float> x) {
  if (x.size() != static_cast<std::size_t>(model.topology.inputs()))
    throw DataError("feature vector arity " + std::to_string(x.size()) + ", expected " +
                    std::to_string(model.topology.inputs()));
  const auto& sizes = model.topology.layer_sizes;
  std::vector<float> cur(x.begin(), x.end());
  std::vector<float> next;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    next.assign(static_cast<std::size_t>(sizes[l + 1]), 0.0f);
    const bool hidden = l + 2 < sizes.size();
    dense_layer(model.weights[l], model.biases[l], cur, next, hidden);
    cur.swap(next);
  }
  softmax_inplace(cur);
  Prediction p;
  p.class_id = argmax_lowest(cur);
  p.scores = std::move(cur);
  return p;
}

void TrainConfig::validate() const {
  if (epochs <= 0 || batch_size <= 0 || learning_rate <= 0.0 || momentum < 0.0 ||
      momentum >= 1.0)
    throw ConfigError("invalid training configuration");
  if (tree_max_depth <= 0 || forest_size < 0 || svm_epochs <= 0 ||
      svm_learning_rate <= 0.0 || svm_lambda < 0.0 || nb_variance_floor <= 0.0 ||
      rf_feature_subsample < 0)
    throw ConfigError("invalid baseline hyperparameters");
}

std::vector<double> class_weights(std::span<const int> labels, int classes, ClassWeighting w) {
  std::vector<double> weight(labels.size(), 1.0);
  if (w == ClassWeighting::None) return weight;
  std::vector<std::size_t> count(classes, 0);
  for (const int y : labels) ++count[y];
  int present = 0;
  for (const auto c : count)
    if (c > 0) ++present;
  std::vector<double> per_class(classes, 0.0);
  for (int c = 0; c < classes; ++c)
    if (count[c] > 0)
      per_class[c] = static_cast<double>(labels.size()) /
                     (static_cast<double>(present) * static_cast<double>(count[c]));
  for (std::size_t i = 0; i < labels.size(); ++i) weight[i] = per_class[labels[i]];
  return weight;
}

namespace {

template <typename T>
struct Workspace {
  std::vector<std::vector<T>> pre;  // pre-activation per layer
  std::vector<std::vector<T>> act;  // post-activation per layer (act[0] = input)
  std::vector<std::vector<T>> delta;

  explicit Workspace(const std::vector<int>& sizes) {
    act.resize(sizes.size());
    pre.resize(sizes.size());
    delta.resize(sizes.size());
    for (std::size_t l = 0; l < sizes.size(); ++l) {
      act[l].resize(sizes[l]);
      pre[l].resize(sizes[l]);
      delta[l].resize(sizes[l]);
    }
  }
};

template <typename T>
void forward_sample(const MlpParams<T>& p, std::span<const T> x, Workspace<T>& ws) {
  std::copy(x.begin(), x.end(), ws.act[0].begin());
  const std::size_t layers = p.sizes.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = p.sizes[l];
    const std::size_t out = p.sizes[l + 1];
    const bool hidden = l + 1 < layers;
    for (std::size_t j = 0; j < out; ++j) {
      T acc = p.b[l][j];
      const T* w = p.w[l].data() + j * in;
      for (std::size_t i = 0; i < in; ++i) acc += w[i] * ws.act[l][i];
      ws.pre[l + 1][j] = acc;
      ws.act[l + 1][j] = hidden && acc < T(0) ? T(0) : acc;
    }
  }
  // softmax on the last layer
  auto& out = ws.act[layers];
  T mx = out[0];
  for (const T v : out) mx = std::max(mx, v);
  T sum = T(0);
  for (T& v : out) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (T& v : out) v /= sum;
}

} // namespace

template <typename T>
T mlp_batch_loss(const MlpParams<T>& p, std::span<const T> xs, std::span<const int> ys,
                 std::span<const T> sample_weights) {
  const std::size_t in = p.sizes.front();
  const std::size_t n = ys.size();
  Workspace<T> ws(p.sizes);
  T loss = T(0);
  T wsum = T(0);
  for (std::size_t s = 0; s < n; ++s) {
    forward_sample(p, xs.subspan(s * in, in), ws);
    const T prob = ws.act.back()[ys[s]];
    const T w = sample_weights.empty() ? T(1) : sample_weights[s];
    loss += -w * std::log(std::max(prob, T(1e-12)));
    wsum += w;
  }
  return wsum > T(0) ? loss / wsum : T(0);
}

template <typename T>
T mlp_batch_gradients(const MlpParams<T>& p, std::span<const T> xs, std::span<const int> ys,
                      std::span<const T> sample_weights, MlpParams<T>& grads) {
  const std::size_t in = p.sizes.front();
  const std::size_t n = ys.size();
  const std::size_t layers = p.sizes.size() - 1;
  Workspace<T> ws(p.sizes);

  T wsum = T(0);
  for (std::size_t s = 0; s < n; ++s)
    wsum += sample_weights.empty() ? T(1) : sample_weights[s];
  if (wsum <= T(0)) return T(0);

  T loss = T(0);
  for (std::size_t s = 0; s < n; ++s) {
    forward_sample(p, xs.subspan(s * in, in), ws);
    const T w = (sample_weights.empty() ? T(1) : sample_weights[s]) / wsum;
    const auto& probs = ws.act[layers];
    loss += -w * wsum * std::log(std::max(probs[ys[s]], T(1e-12)));

    // output delta: softmax + cross-entropy
    for (std::size_t j = 0; j < probs.size(); ++j)
      ws.delta[layers][j] = w * (probs[j] - (static_cast<int>(j) == ys[s] ? T(1) : T(0)));

    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t lin = p.sizes[l];
      const std::size_t lout = p.sizes[l + 1];
      auto& d = ws.delta[l + 1];
      for (std::size_t j = 0; j < lout; ++j) {
        const T dj = d[j];
        if (dj == T(0)) continue;
        T* gw = grads.w[l].data() + j * lin;
        const auto& a = ws.act[l];
        for (std::size_t i = 0; i < lin; ++i) gw[i] += dj * a[i];
        grads.b[l][j] += dj;
      }
      if (l == 0) break;
      auto& dprev = ws.delta[l];
      for (std::size_t i = 0; i < lin; ++i) {
        T acc = T(0);
        for (std::size_t j = 0; j < lout; ++j) acc += p.w[l][j * lin + i] * d[j];
        // ReLU gate
        dprev[i] = ws.pre[l][i] > T(0) ? acc : T(0);
      }
    }
  }
  return loss / wsum;
}

template float mlp_batch_loss<float>(const MlpParams<float>&, std::span<const float>,
                                     std::span<const int>, std::span<const float>);
template double mlp_batch_loss<double>(const MlpParams<double>&, std::span<const double>,
                                       std::span<const int>, std::span<const double>);
template float mlp_batch_gradients<float>(const MlpParams<float>&, std::span<const float>,
                                          std::span<const int>, std::span<const float>,
                                          MlpParams<float>&);
template double mlp_batch_gradients<double>(const MlpParams<double>&, std::span<const double>,
                                            std::span<const int>, std::span<const double>,
                                            MlpParams<double>&);

MlpModel train_mlp(const Dataset& train, Target target, const TrainConfig& cfg) {
  cfg.validate();
  if (train.rows() == 0) throw DataError("cannot train on an empty dataset");
  if (train.norm_stats.empty())
    throw ConfigError("training data must be normalized (fit_normalize first)");

  const int k = class_count(target);
  MlpModel model;
  model.topology = MlpTopology::for_target(target);
  model.target = target;

  // He-style init, seeded.
  Rng rng(mix_seed(cfg.seed, 0x31));
  const auto& sizes = model.topology.layer_sizes;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const auto fan_in = static_cast<double>(sizes[l]);
    const double scale = std::sqrt(2.0 / fan_in);
    std::vector<float> w(static_cast<std::size_t>(sizes[l]) * sizes[l + 1]);
    for (float& v : w) v = static_cast<float>(rng.gaussian() * scale);
    model.weights.push_back(std::move(w));
    model.biases.emplace_back(sizes[l + 1], 0.0f);
  }

  const std::vector<int> labels = train.targets(target);
  const std::vector<double> weights_d = class_weights(labels, k, cfg.class_weighting);

  MlpParams<float> params = shadow_params<float>(model);
  MlpParams<float> grads = MlpParams<float>::zeros_like(params);
  MlpParams<float> velocity = MlpParams<float>::zeros_like(params);

  const std::size_t n = train.rows();
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  std::vector<float> bx;
  std::vector<int> by;
  std::vector<float> bw;

  auto full_loss = [&]() {
    double total = 0.0;
    double wsum = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t count = std::min(batch, n - start);
      bx.clear();
      by.clear();
      bw.clear();
      for (std::size_t i = 0; i < count; ++i) {
        const auto row = train.row(start + i);
        bx.insert(bx.end(), row.begin(), row.end());
        by.push_back(labels[start + i]);
        bw.push_back(static_cast<float>(weights_d[start + i]));
      }
      double batch_wsum = 0.0;
      for (const float w : bw) batch_wsum += w;
      total += static_cast<double>(mlp_batch_loss<float>(params, bx, by, bw)) * batch_wsum;
      wsum += batch_wsum;
    }
    return wsum > 0.0 ? total / wsum : 0.0;
  };

  const double initial_loss = full_loss();

  const auto lr = static_cast<float>(cfg.learning_rate);
  const auto mu = static_cast<float>(cfg.momentum);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    int batch_index = 0;
    for (std::size_t start = 0; start < n; start += batch, ++batch_index) {
      const std::size_t count = std::min(batch, n - start);
      bx.clear();
      by.clear();
      bw.clear();
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t r = order[start + i];
        const auto row = train.row(r);
        bx.insert(bx.end(), row.begin(), row.end());
        by.push_back(labels[r]);
        bw.push_back(static_cast<float>(weights_d[r]));
      }
      for (auto& g : grads.w) std::fill(g.begin(), g.end(), 0.0f);
      for (auto& g : grads.b) std::fill(g.begin(), g.end(), 0.0f);
      const float loss = mlp_batch_gradients<float>(params, bx, by, bw, grads);
      if (!std::isfinite(loss))
        throw TrainError("non-finite loss at epoch " + std::to_string(epoch) + " batch " +
                         std::to_string(batch_index));
      for (std::size_t l = 0; l < params.w.size(); ++l) {
        for (std::size_t i = 0; i < params.w[l].size(); ++i) {
          velocity.w[l][i] = mu * velocity.w[l][i] - lr * grads.w[l][i];
          params.w[l][i] += velocity.w[l][i];
        }
        for (std::size_t i = 0; i < params.b[l].size(); ++i) {
          velocity.b[l][i] = mu * velocity.b[l][i] - lr * grads.b[l][i];
          params.b[l][i] += velocity.b[l][i];
        }
      }
    }
  }

  const double final_loss = full_loss();
  if (!std::isfinite(final_loss) || final_loss >= initial_loss)
    throw TrainError("training did not reduce the loss (" + std::to_string(initial_loss) +
                     " -> " + std::to_string(final_loss) + ")");

  for (std::size_t l = 0; l < params.w.size(); ++l) {
    model.weights[l] = params.w[l];
    model.biases[l] = params.b[l];
  }
  model.validate();
  return model;
}

} // namespace edgeids
