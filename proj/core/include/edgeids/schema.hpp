#pragma once

#include <map>
#include <string>
#include <vector>

#include "edgeids/labels.hpp"

namespace edgeids {

inline constexpr int kFeatureCount = 24;

enum class ColumnRole {
  Feature,
  LabelAttack,
  LabelCategory,
  LabelSubcategory,
  Ignore,
};

const std::string& role_name(ColumnRole role);

/// Maps CSV columns to roles. Declaration order of `feature` columns defines
/// the feature vector layout. Exactly 24 feature columns and one column per
/// label role are required; all matching is case-insensitive.
///
/// File format, one entry per line (`#` comments):
///   source_column = feature | label-attack | label-category |
///                   label-subcategory | ignore
/// plus optional label spelling maps for datasets whose label strings differ
/// from the canonical names:
///   label.category.<csv-value> = <canonical category>
///   label.subcategory.<csv-value> = <canonical subcategory>
struct FeatureSchema {
  std::vector<std::pair<std::string, ColumnRole>> columns;
  // lowercase CSV spelling -> canonical class id, per label target
  std::map<std::string, Category> category_map;
  std::map<std::string, Subcategory> subcategory_map;

  int feature_count() const;
  std::vector<std::string> feature_names() const;
  const std::string& column_for(ColumnRole role) const;

  /// Throws SchemaError when an invariant is broken (feature count, missing
  /// or duplicated label roles, duplicate source names).
  void validate() const;

  Category map_category(std::string_view cell) const;       // throws DataError
  Subcategory map_subcategory(std::string_view cell) const; // throws DataError
  static int map_attack(std::string_view cell);             // throws DataError

  static FeatureSchema parse(std::istream& in);
  static FeatureSchema load(const std::string& path);
  void save(const std::string& path) const;
};

/// Builds a schema from a CSV: drops identifier-like columns (names that
/// look like sequence numbers, addresses, ports, or timestamps), then keeps
/// the `kFeatureCount` numeric columns with the highest variance. The label
/// columns must be named. Shipped `data/botiot_schema.txt` was produced this
/// way and can be edited by hand.
FeatureSchema derive_schema(const std::string& csv_path,
                            const std::string& attack_column,
                            const std::string& category_column,
                            const std::string& subcategory_column);

} // namespace edgeids
