#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "edgeids/baselines.hpp"
#include "edgeids/mlp.hpp"

namespace edgeids {

/// Numeric values match the model file format.
enum class ModelKind : std::uint8_t {
  Mlp = 1,
  NaiveBayes = 2,
  DecisionTree = 3,
  RandomForest = 4,
  Svm = 5,
};

const std::string& kind_name(ModelKind k);

using ClassifierModel = std::variant<MlpModel, NbModel, TreeModel, ForestModel, SvmModel>;

ModelKind kind_of(const ClassifierModel& m);
Target target_of(const ClassifierModel& m);
int classes_of(const ClassifierModel& m);

Prediction predict(const ClassifierModel& m, std::span<const float> x);

ClassifierModel train_baseline(ModelKind kind, const Dataset& train, Target target,
                               const TrainConfig& cfg);

// --- model file format -----------------------------------------------------
//
// Little-endian. Header: magic "IIDS" (49 49 44 53), u16 version = 1,
// u8 kind, u8 target. Then a kind-specific dimension header and parameters
// as IEEE-754 32-bit values in declaration order:
//   MLP:  u16 layer count, u16 sizes...; per layer weights row-major, biases
//   NB:   u16 classes, u16 features; priors, means, variances
//   DT:   u16 classes, u16 features, u32 nodes; per node i32 feature,
//         f32 threshold, u32 left, u32 right, f32 dist[classes]
//   RF:   u16 classes, u16 features, u32 trees; each tree u32 nodes + nodes
//   SVM:  u16 classes, u16 features; weights row-major, biases

std::vector<std::uint8_t> serialize(const ClassifierModel& m);
ClassifierModel deserialize(std::span<const std::uint8_t> bytes);

std::uint64_t model_size(const ClassifierModel& m);

void save_model(const ClassifierModel& m, const std::string& path);
ClassifierModel load_model(const std::string& path);

/// FNV-1a over the serialized bytes, rendered as 16 hex digits.
std::string content_hash(std::span<const std::uint8_t> bytes);

} // namespace edgeids
