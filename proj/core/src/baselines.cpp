#include "edgeids/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edgeids/errors.hpp"
#include "edgeids/rng.hpp"

namespace edgeids {

namespace {

void check_arity(std::span<const float> x) {
  if (x.size() != kFeatureCount)
    throw DataError("feature vector arity " + std::to_string(x.size()) + ", expected " +
                    std::to_string(kFeatureCount));
}

void check_trainable(const Dataset& train) {
  if (train.rows() == 0) throw DataError("cannot train on an empty dataset");
  if (train.norm_stats.empty())
    throw ConfigError("training data must be normalized (fit_normalize first)");
}

double gini(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (const auto c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

struct TreeBuilder {
  const Dataset& data;
  const std::vector<int>& labels;
  int classes;
  int max_depth;
  int feature_subsample; // 0 = all features
  Rng* rng;              // null when all features are used
  std::vector<TreeNode> nodes;

  int build(std::vector<std::size_t>& rows, int depth) {
    const std::size_t n = rows.size();
    std::vector<std::size_t> counts(classes, 0);
    for (const auto r : rows) ++counts[labels[r]];

    const int node_index = static_cast<int>(nodes.size());
    nodes.emplace_back();
    {
      TreeNode& node = nodes.back();
      node.dist.resize(classes);
      for (int c = 0; c < classes; ++c)
        node.dist[c] = static_cast<float>(static_cast<double>(counts[c]) / n);
    }

    const double parent_gini = gini(counts, n);
    bool pure = false;
    for (const auto c : counts) pure = pure || c == n;
    if (depth >= max_depth || n < 2 || pure) return node_index;

    // candidate features, optionally a random subset
    std::vector<int> features(kFeatureCount);
    std::iota(features.begin(), features.end(), 0);
    if (feature_subsample > 0 && feature_subsample < kFeatureCount && rng) {
      for (int i = 0; i < feature_subsample; ++i) {
        const auto j = static_cast<std::size_t>(rng->bounded(kFeatureCount - i)) + i;
        std::swap(features[i], features[j]);
      }
      features.resize(feature_subsample);
      std::sort(features.begin(), features.end());
    }

    int best_feature = -1;
    float best_threshold = 0.0f;
    double best_score = parent_gini - 1e-12;

    std::vector<std::pair<float, std::size_t>> order(n);
    std::vector<std::size_t> left_counts(classes);
    for (const int f : features) {
      for (std::size_t i = 0; i < n; ++i)
        order[i] = {data.features[rows[i] * kFeatureCount + f], rows[i]};
      std::sort(order.begin(), order.end());
      std::fill(left_counts.begin(), left_counts.end(), 0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        ++left_counts[labels[order[i].second]];
        if (order[i].first == order[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = n - nl;
        double right_sq = 0.0, left_sq = 0.0;
        for (int c = 0; c < classes; ++c) {
          const double pl = static_cast<double>(left_counts[c]) / nl;
          const double pr = static_cast<double>(counts[c] - left_counts[c]) / nr;
          left_sq += pl * pl;
          right_sq += pr * pr;
        }
        const double score = (static_cast<double>(nl) * (1.0 - left_sq) +
                              static_cast<double>(nr) * (1.0 - right_sq)) /
                             static_cast<double>(n);
        if (score < best_score) {
          best_score = score;
          best_feature = f;
          best_threshold =
              order[i].first + (order[i + 1].first - order[i].first) * 0.5f;
        }
      }
    }
    if (best_feature < 0) return node_index;

    std::vector<std::size_t> left_rows, right_rows;
    for (const auto r : rows) {
      if (data.features[r * kFeatureCount + best_feature] < best_threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }
    if (left_rows.empty() || right_rows.empty()) return node_index;
    rows.clear();
    rows.shrink_to_fit();

    const int left = build(left_rows, depth + 1);
    const int right = build(right_rows, depth + 1);
    nodes[node_index].feature = best_feature;
    nodes[node_index].threshold = best_threshold;
    nodes[node_index].left = left;
    nodes[node_index].right = right;
    return node_index;
  }
};

TreeModel build_tree(const Dataset& train, Target target, const TrainConfig& cfg,
                     std::vector<std::size_t> rows, const std::vector<int>& labels,
                     int feature_subsample, Rng* rng) {
  TreeModel model;
  model.target = target;
  model.classes = class_count(target);
  TreeBuilder builder{train, labels, model.classes, cfg.tree_max_depth, feature_subsample,
                      rng,   {}};
  builder.build(rows, 0);
  model.nodes = std::move(builder.nodes);
  return model;
}

} // namespace

void NbModel::validate() const {
  if (classes != class_count(target)) throw ConfigError("NB class count mismatch");
  if (priors.size() != static_cast<std::size_t>(classes) ||
      means.size() != static_cast<std::size_t>(classes) * kFeatureCount ||
      variances.size() != means.size())
    throw ConfigError("NB parameter shape mismatch");
  for (const float v : variances)
    if (!(v > 0.0f)) throw ConfigError("NB variance below floor");
}

void TreeModel::validate() const {
  if (classes != class_count(target)) throw ConfigError("tree class count mismatch");
  if (nodes.empty()) throw ConfigError("tree has no nodes");
  const auto n = static_cast<std::int32_t>(nodes.size());
  for (std::int32_t i = 0; i < n; ++i) {
    const TreeNode& node = nodes[i];
    if (node.dist.size() != static_cast<std::size_t>(classes))
      throw ConfigError("tree node distribution arity mismatch");
    if (node.feature < 0) continue;
    if (node.feature >= kFeatureCount) throw ConfigError("tree split feature out of range");
    // children strictly after the parent keeps the array acyclic
    if (node.left <= i || node.left >= n || node.right <= i || node.right >= n)
      throw ConfigError("tree child index out of bounds");
  }
}

void ForestModel::validate() const {
  if (classes != class_count(target)) throw ConfigError("forest class count mismatch");
  if (trees.empty()) throw DataError("random forest has no trees");
  for (const auto& t : trees) t.validate();
}

void SvmModel::validate() const {
  if (classes != class_count(target)) throw ConfigError("SVM class count mismatch");
  if (weights.size() != static_cast<std::size_t>(classes) * kFeatureCount ||
      biases.size() != static_cast<std::size_t>(classes))
    throw ConfigError("SVM weight arity mismatch");
}

NbModel train_nb(const Dataset& train, Target target, const TrainConfig& cfg) {
  cfg.validate();
  check_trainable(train);
  NbModel model;
  model.target = target;
  model.classes = class_count(target);
  const std::vector<int> labels = train.targets(target);

  const int k = model.classes;
  std::vector<std::size_t> count(k, 0);
  std::vector<double> sum(static_cast<std::size_t>(k) * kFeatureCount, 0.0);
  std::vector<double> sumsq(sum.size(), 0.0);
  for (std::size_t r = 0; r < train.rows(); ++r) {
    const int y = labels[r];
    ++count[y];
    const auto row = train.row(r);
    for (int f = 0; f < kFeatureCount; ++f) {
      const double v = row[f];
      sum[y * kFeatureCount + f] += v;
      sumsq[y * kFeatureCount + f] += v * v;
    }
  }

  model.priors.resize(k);
  model.means.assign(sum.size(), 0.0f);
  model.variances.assign(sum.size(), static_cast<float>(cfg.nb_variance_floor));
  for (int c = 0; c < k; ++c) {
    model.priors[c] =
        static_cast<float>(static_cast<double>(count[c]) / static_cast<double>(train.rows()));
    if (count[c] == 0) continue;
    for (int f = 0; f < kFeatureCount; ++f) {
      const double mean = sum[c * kFeatureCount + f] / static_cast<double>(count[c]);
      double var = sumsq[c * kFeatureCount + f] / static_cast<double>(count[c]) - mean * mean;
      var = std::max(var, cfg.nb_variance_floor);
      model.means[c * kFeatureCount + f] = static_cast<float>(mean);
      model.variances[c * kFeatureCount + f] = static_cast<float>(var);
    }
  }
  model.validate();
  return model;
}

TreeModel train_tree(const Dataset& train, Target target, const TrainConfig& cfg) {
  cfg.validate();
  check_trainable(train);
  std::vector<std::size_t> rows(train.rows());
  std::iota(rows.begin(), rows.end(), 0);
  const std::vector<int> labels = train.targets(target);
  TreeModel model = build_tree(train, target, cfg, std::move(rows), labels,
                               /*feature_subsample=*/0, nullptr);
  model.validate();
  return model;
}

ForestModel train_forest(const Dataset& train, Target target, const TrainConfig& cfg) {
  cfg.validate();
  check_trainable(train);
  if (cfg.forest_size < 1) throw ConfigError("forest_size must be >= 1");
  ForestModel model;
  model.target = target;
  model.classes = class_count(target);
  const std::vector<int> labels = train.targets(target);
  const std::size_t n = train.rows();
  for (int t = 0; t < cfg.forest_size; ++t) {
    Rng rng(mix_seed(cfg.seed, 0xf0000 + static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> rows(n);
    if (cfg.rf_bootstrap) {
      for (auto& r : rows) r = static_cast<std::size_t>(rng.bounded(n));
      std::sort(rows.begin(), rows.end());
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    model.trees.push_back(build_tree(train, target, cfg, std::move(rows), labels,
                                     cfg.rf_feature_subsample, &rng));
  }
  model.validate();
  return model;
}

SvmModel train_svm(const Dataset& train, Target target, const TrainConfig& cfg) {
  cfg.validate();
  check_trainable(train);
  SvmModel model;
  model.target = target;
  model.classes = class_count(target);
  const int k = model.classes;
  model.weights.assign(static_cast<std::size_t>(k) * kFeatureCount, 0.0f);
  model.biases.assign(k, 0.0f);

  const std::vector<int> labels = train.targets(target);
  const std::size_t n = train.rows();
  Rng rng(mix_seed(cfg.seed, 0x57a));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.svm_epochs; ++epoch) {
    rng.shuffle(order);
    const double lr = cfg.svm_learning_rate / (1.0 + epoch);
    const double shrink = 1.0 - lr * cfg.svm_lambda;
    for (const std::size_t r : order) {
      const auto x = train.row(r);
      for (int c = 0; c < k; ++c) {
        const double y = labels[r] == c ? 1.0 : -1.0;
        float* w = model.weights.data() + static_cast<std::size_t>(c) * kFeatureCount;
        double margin = model.biases[c];
        for (int f = 0; f < kFeatureCount; ++f) margin += static_cast<double>(w[f]) * x[f];
        margin *= y;
        for (int f = 0; f < kFeatureCount; ++f) w[f] = static_cast<float>(w[f] * shrink);
        if (margin < 1.0) {
          for (int f = 0; f < kFeatureCount; ++f)
            w[f] = static_cast<float>(w[f] + lr * y * x[f]);
          model.biases[c] = static_cast<float>(model.biases[c] + lr * y);
        }
      }
    }
  }
  model.validate();
  return model;
}

Prediction nb_predict(const NbModel& m, std::span<const float> x) {
  check_arity(x);
  constexpr double kLog2Pi = 1.8378770664093454835606594728112;
  std::vector<double> logp(m.classes);
  for (int c = 0; c < m.classes; ++c) {
    double lp = m.priors[c] > 0.0f ? std::log(static_cast<double>(m.priors[c])) : -1e30;
    for (int f = 0; f < kFeatureCount; ++f) {
      const double mean = m.means[c * kFeatureCount + f];
      const double var = m.variances[c * kFeatureCount + f];
      const double d = static_cast<double>(x[f]) - mean;
      lp += -0.5 * (kLog2Pi + std::log(var)) - d * d / (2.0 * var);
    }
    logp[c] = lp;
  }
  const double mx = *std::max_element(logp.begin(), logp.end());
  Prediction p;
  p.scores.resize(m.classes);
  double sum = 0.0;
  for (int c = 0; c < m.classes; ++c) {
    const double e = std::exp(logp[c] - mx);
    p.scores[c] = static_cast<float>(e);
    sum += e;
  }
  for (float& s : p.scores) s = static_cast<float>(s / sum);
  p.class_id = argmax_lowest(p.scores);
  return p;
}

std::span<const float> TreeModel::leaf_dist(std::span<const float> x) const {
  const TreeNode* node = &nodes.front();
  while (node->feature >= 0)
    node = &nodes[x[node->feature] < node->threshold ? node->left : node->right];
  return node->dist;
}

Prediction tree_predict(const TreeModel& m, std::span<const float> x) {
  check_arity(x);
  const auto dist = m.leaf_dist(x);
  Prediction p;
  p.scores.assign(dist.begin(), dist.end());
  p.class_id = argmax_lowest(p.scores);
  return p;
}

Prediction forest_predict(const ForestModel& m, std::span<const float> x) {
  check_arity(x);
  if (m.trees.empty()) throw DataError("random forest has no trees");
  Prediction p;
  p.scores.assign(m.classes, 0.0f);
  for (const auto& tree : m.trees) {
    const auto dist = tree.leaf_dist(x);
    ++p.scores[argmax_lowest(dist)];
  }
  for (float& s : p.scores) s /= static_cast<float>(m.trees.size());
  p.class_id = argmax_lowest(p.scores);
  return p;
}

Prediction svm_predict(const SvmModel& m, std::span<const float> x) {
  check_arity(x);
  Prediction p;
  p.scores.resize(m.classes);
  for (int c = 0; c < m.classes; ++c) {
    float acc = m.biases[c];
    const float* w = m.weights.data() + static_cast<std::size_t>(c) * kFeatureCount;
    for (int f = 0; f < kFeatureCount; ++f) acc += w[f] * x[f];
    p.scores[c] = acc;
  }
  softmax_inplace(p.scores);
  p.class_id = argmax_lowest(p.scores);
  return p;
}

} // namespace edgeids
