#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgeids/costmodel.hpp"
#include "edgeids/dataset.hpp"
#include "edgeids/engine.hpp"
#include "edgeids/eval.hpp"
#include "edgeids/mlp.hpp"
#include "edgeids/model.hpp"

namespace edgeids::cli {

/// Versioned run configuration, parsed from a line-oriented
/// `section.key = value` file. Every command reads the same structure; the
/// seed is mandatory (file or --seed).
struct RunConfig {
  std::optional<std::uint64_t> seed;

  // data source: CSV when set, synthetic otherwise
  std::optional<std::string> csv_path;
  std::optional<std::string> schema_path;
  double train_fraction = 0.8;

  std::size_t synth_rows = 20000;
  double synth_separation = 3.0;
  std::optional<std::array<double, kSubcategoryCount>> synth_weights;

  std::vector<ModelKind> families = {ModelKind::Mlp, ModelKind::NaiveBayes,
                                     ModelKind::DecisionTree, ModelKind::RandomForest,
                                     ModelKind::Svm};
  std::vector<Target> targets = {Target::Attack, Target::Category, Target::Subcategory};

  TrainConfig train;
  bool class_weighting_auto = true; // per-target default unless overridden

  EngineConfig engine{EngineKind::Dataflow, 4, 16, 4};
  int bench_repetitions = 5;
  std::size_t bench_rows = 100000;
  std::map<std::string, double> power_watts; // per engine kind name
  std::map<std::string, double> lut_counts;  // per engine kind name

  CostConstants cost;
  SelectionRule selection;

  /// Parses the file and applies it over the defaults. Throws ConfigError
  /// on unknown keys or malformed values.
  static RunConfig load(const std::string& path);
  static RunConfig parse(std::istream& in);

  /// Train settings for one target, resolving the auto class weighting.
  TrainConfig train_for(Target t) const;

  void require_seed() const; // throws ConfigError when unset
};

const std::string& engine_kind_name(EngineKind k);

} // namespace edgeids::cli
