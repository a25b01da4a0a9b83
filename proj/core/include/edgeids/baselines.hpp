#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "edgeids/dataset.hpp"
#include "edgeids/labels.hpp"
#include "edgeids/mlp.hpp"

namespace edgeids {

/// Gaussian naive Bayes; variances are floored so scores stay finite on any
/// input in [0,1]^24.
struct NbModel {
  Target target = Target::Attack;
  int classes = 0;
  std::vector<float> priors;    // classes
  std::vector<float> means;     // classes x 24 row-major
  std::vector<float> variances; // classes x 24 row-major

  void validate() const;
};

/// CART node. Interior nodes split on `feature < threshold` (left) vs
/// `>=` (right); leaves have feature = -1. Children always follow their
/// parent in the node array. `dist` is the training class distribution of
/// the node.
struct TreeNode {
  int feature = -1;
  float threshold = 0.0f;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::vector<float> dist;
};

struct TreeModel {
  Target target = Target::Attack;
  int classes = 0;
  std::vector<TreeNode> nodes;

  void validate() const;
  std::span<const float> leaf_dist(std::span<const float> x) const;
};

struct ForestModel {
  Target target = Target::Attack;
  int classes = 0;
  std::vector<TreeModel> trees;

  void validate() const; // non-empty forest
};

/// Linear one-vs-rest SVM trained with hinge-loss SGD.
struct SvmModel {
  Target target = Target::Attack;
  int classes = 0;
  std::vector<float> weights; // classes x 24 row-major
  std::vector<float> biases;  // classes

  void validate() const;
};

NbModel train_nb(const Dataset& train, Target target, const TrainConfig& cfg);
TreeModel train_tree(const Dataset& train, Target target, const TrainConfig& cfg);
ForestModel train_forest(const Dataset& train, Target target, const TrainConfig& cfg);
SvmModel train_svm(const Dataset& train, Target target, const TrainConfig& cfg);

Prediction nb_predict(const NbModel& m, std::span<const float> x);
Prediction tree_predict(const TreeModel& m, std::span<const float> x);
Prediction forest_predict(const ForestModel& m, std::span<const float> x);
Prediction svm_predict(const SvmModel& m, std::span<const float> x);

} // namespace edgeids
