#include "edgeids/model.hpp"

#include <array>

#include "edgeids/errors.hpp"

namespace edgeids {

namespace {
const std::array<std::string, 5> kKindNames = {"mlp", "nb", "dt", "rf", "svm"};
}

const std::string& kind_name(ModelKind k) {
  return kKindNames[static_cast<int>(k) - 1];
}

ModelKind kind_of(const ClassifierModel& m) {
  return std::visit(
      [](const auto& v) -> ModelKind {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, MlpModel>) return ModelKind::Mlp;
        else if constexpr (std::is_same_v<V, NbModel>) return ModelKind::NaiveBayes;
        else if constexpr (std::is_same_v<V, TreeModel>) return ModelKind::DecisionTree;
        else if constexpr (std::is_same_v<V, ForestModel>) return ModelKind::RandomForest;
        else return ModelKind::Svm;
      },
      m);
}

Target target_of(const ClassifierModel& m) {
  return std::visit([](const auto& v) { return v.target; }, m);
}

int classes_of(const ClassifierModel& m) {
  return class_count(target_of(m));
}

Prediction predict(const ClassifierModel& m, std::span<const float> x) {
  return std::visit(
      [&](const auto& v) -> Prediction {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, MlpModel>) return mlp_predict(v, x);
        else if constexpr (std::is_same_v<V, NbModel>) return nb_predict(v, x);
        else if constexpr (std::is_same_v<V, TreeModel>) return tree_predict(v, x);
        else if constexpr (std::is_same_v<V, ForestModel>) return forest_predict(v, x);
        else return svm_predict(v, x);
      },
      m);
}

ClassifierModel train_baseline(ModelKind kind, const Dataset& train, Target target,
                               const TrainConfig& cfg) {
  switch (kind) {
    case ModelKind::Mlp: return train_mlp(train, target, cfg);
    case ModelKind::NaiveBayes: return train_nb(train, target, cfg);
    case ModelKind::DecisionTree: return train_tree(train, target, cfg);
    case ModelKind::RandomForest: return train_forest(train, target, cfg);
    case ModelKind::Svm: return train_svm(train, target, cfg);
  }
  throw ConfigError("unknown model kind");
}

std::string content_hash(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

} // namespace edgeids
