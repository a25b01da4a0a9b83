#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "edgeids/dataset.hpp"
#include "edgeids/mlp.hpp"
#include "edgeids/schema.hpp"

namespace edgeids::cli {

/// The deployed model set: one MLP per classification head plus the
/// normalization fitted at training time.
struct ModelBundle {
  MlpModel attack;
  MlpModel category;
  MlpModel subcategory;
  NormStats stats;
  std::string model_id; // content hash over the three serialized models

  /// Loads mlp_<target>.iids and norm_stats.txt from a directory; throws
  /// FormatError/ConfigError when a file is missing or targets the wrong
  /// head.
  static ModelBundle load(const std::string& dir);
};

struct DetectOptions {
  bool log_benign = false;
  bool fixed_clock = false; // freeze alert timestamps for golden tests
};

struct DetectSummary {
  std::map<std::string, std::uint64_t> per_subcategory; // canonical names
  std::uint64_t records = 0;
  std::uint64_t malformed = 0;
  std::uint64_t alerts = 0;
};

/// Classifies every record of a feature CSV with all three heads and emits
/// one NDJSON alert per malicious record (attack head) to `alerts`. Field
/// order: sequence, timestamp, attack, category, subcategory, confidence,
/// model_id. Malformed records are counted and skipped; input order is
/// preserved.
DetectSummary detect_stream(const ModelBundle& bundle, const FeatureSchema& schema,
                            const std::string& input_csv, std::ostream& alerts,
                            const DetectOptions& opts);

void write_summary(const DetectSummary& summary, std::ostream& out);

} // namespace edgeids::cli
