#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edgeids/labels.hpp"
#include "edgeids/schema.hpp"

namespace edgeids {

enum class Provenance { Csv, Synthetic };

/// Per-feature (min, max) recorded by fit_normalize. Empty means the dataset
/// has not been normalized.
struct NormStats {
  std::vector<std::pair<float, float>> min_max;

  bool empty() const { return min_max.empty(); }
  std::size_t size() const { return min_max.size(); }

  void save(const std::string& path) const;
  static NormStats load(const std::string& path);
};

/// Row-major feature matrix (rows x 24) plus one LabelTriple per row.
struct Dataset {
  std::vector<float> features;
  std::vector<LabelTriple> labels;
  NormStats norm_stats;
  Provenance provenance = Provenance::Csv;

  std::size_t rows() const { return labels.size(); }
  std::span<const float> row(std::size_t i) const {
    return {features.data() + i * kFeatureCount, kFeatureCount};
  }

  /// Class ids for one classification head.
  std::vector<int> targets(Target t) const;
};

struct LoadSummary {
  std::size_t rows_loaded = 0;
  std::size_t rows_skipped_parse = 0; // non-numeric or malformed cells
  std::size_t rows_skipped_label = 0; // unmappable or inconsistent labels
  std::vector<std::size_t> sample_bad_rows; // first few offending row indices

  std::size_t rows_skipped() const { return rows_skipped_parse + rows_skipped_label; }
};

struct LoadResult {
  Dataset dataset;
  LoadSummary summary;
};

/// Reads a header-first CSV through a schema. Feature cells must parse as
/// reals; rows that do not (or whose labels cannot be mapped) are skipped and
/// counted in the summary. Missing schema columns raise SchemaError.
LoadResult load_csv(const std::string& path, const FeatureSchema& schema);

/// Same parsing, but only the feature columns are required; label columns
/// are used when present and left as Normal otherwise. Detection input.
LoadResult load_csv_features(const std::string& path, const FeatureSchema& schema);

/// Min-max scales every feature to [0, 1] and records the stats. Constant
/// features map to 0. Errors on empty input or when stats already exist.
Dataset fit_normalize(const Dataset& ds);

/// Applies previously fitted stats; results are clamped to [0, 1].
Dataset apply_normalize(const Dataset& ds, const NormStats& stats);

/// Per-subcategory stratified partition. Train part receives
/// round(class_count * train_fraction) rows of each class (clamped so both
/// sides keep at least one row). Row order within each part preserves the
/// input order. Any present class with fewer than 2 rows is an error.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double train_fraction,
                                             std::uint64_t seed);

/// Synthetic generator parameters. class_weights are subcategory
/// proportions in enum order and must sum to 1 (+-1e-9).
struct SynthSpec {
  std::size_t rows = 0;
  std::array<double, kSubcategoryCount> class_weights{};
  double separation = 3.0;
  std::uint64_t seed = 0;

  void validate() const; // throws ConfigError

  static SynthSpec uniform(std::size_t rows, double separation, std::uint64_t seed);
};

/// Draws class-conditioned Gaussian clusters in 24-dim space. Cluster
/// centers sit on distinct feature axes with pairwise distance at least
/// `separation`; the intrusion-free class draws from two lobes so that its
/// per-feature marginals overlap the DoS clusters. Deterministic per seed.
Dataset synthesize(const SynthSpec& spec);

/// Writes rows as CSV: feature columns f00..f23 plus the three label columns
/// with canonical names. `with_labels=false` emits features only.
void write_csv(const Dataset& ds, const std::string& path, bool with_labels = true);

/// Schema matching write_csv output (f00..f23 + attack/category/subcategory).
FeatureSchema synthetic_schema();

} // namespace edgeids
