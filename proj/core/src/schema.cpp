#include "edgeids/schema.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "edgeids/csv.hpp"
#include "edgeids/errors.hpp"
#include "edgeids/kvfile.hpp"

namespace edgeids {

namespace {

const std::vector<std::pair<std::string, ColumnRole>> kRoleNames = {
    {"feature", ColumnRole::Feature},
    {"label-attack", ColumnRole::LabelAttack},
    {"label-category", ColumnRole::LabelCategory},
    {"label-subcategory", ColumnRole::LabelSubcategory},
    {"ignore", ColumnRole::Ignore},
};

ColumnRole parse_role(const std::string& text, int line) {
  const std::string lowered = to_lower(text);
  for (const auto& [name, role] : kRoleNames)
    if (lowered == name) return role;
  throw SchemaError("line " + std::to_string(line) + ": unknown column role `" + text + "`");
}

} // namespace

const std::string& role_name(ColumnRole role) {
  for (const auto& [name, r] : kRoleNames)
    if (r == role) return name;
  return kRoleNames.back().first;
}

int FeatureSchema::feature_count() const {
  int n = 0;
  for (const auto& [_, role] : columns)
    if (role == ColumnRole::Feature) ++n;
  return n;
}

std::vector<std::string> FeatureSchema::feature_names() const {
  std::vector<std::string> names;
  for (const auto& [name, role] : columns)
    if (role == ColumnRole::Feature) names.push_back(name);
  return names;
}

const std::string& FeatureSchema::column_for(ColumnRole role) const {
  for (const auto& [name, r] : columns)
    if (r == role) return name;
  throw SchemaError("schema has no " + role_name(role) + " column");
}

void FeatureSchema::validate() const {
  std::set<std::string> seen;
  int labels[3] = {0, 0, 0};
  for (const auto& [name, role] : columns) {
    if (!seen.insert(to_lower(name)).second)
      throw SchemaError("duplicate source column `" + name + "`");
    if (role == ColumnRole::LabelAttack) ++labels[0];
    if (role == ColumnRole::LabelCategory) ++labels[1];
    if (role == ColumnRole::LabelSubcategory) ++labels[2];
  }
  const int features = feature_count();
  if (features != kFeatureCount)
    throw SchemaError("schema declares " + std::to_string(features) + " feature columns, need " +
                      std::to_string(kFeatureCount));
  const char* names[3] = {"label-attack", "label-category", "label-subcategory"};
  for (int i = 0; i < 3; ++i) {
    if (labels[i] == 0)
      throw SchemaError(std::string(names[i]) + " column absent");
    if (labels[i] > 1)
      throw SchemaError(std::string("more than one ") + names[i] + " column");
  }
}

Category FeatureSchema::map_category(std::string_view cell) const {
  const std::string key = to_lower(trim(cell));
  if (const auto it = category_map.find(key); it != category_map.end()) return it->second;
  if (const auto c = category_from_name(key)) return *c;
  throw DataError("unmappable category label `" + std::string(cell) + "`");
}

Subcategory FeatureSchema::map_subcategory(std::string_view cell) const {
  const std::string key = to_lower(trim(cell));
  if (const auto it = subcategory_map.find(key); it != subcategory_map.end()) return it->second;
  if (const auto s = subcategory_from_name(key)) return *s;
  throw DataError("unmappable subcategory label `" + std::string(cell) + "`");
}

int FeatureSchema::map_attack(std::string_view cell) {
  const std::string key = to_lower(trim(cell));
  if (key == "0" || key == "normal" || key == "benign" || key == "false") return 0;
  if (key == "1" || key == "attack" || key == "malicious" || key == "true") return 1;
  throw DataError("unmappable attack label `" + std::string(cell) + "`");
}

FeatureSchema FeatureSchema::parse(std::istream& in) {
  FeatureSchema schema;
  for (const auto& entry : parse_kv(in)) {
    const std::string key = to_lower(entry.key);
    if (key.starts_with("label.")) {
      // label.<target>.<csv spelling> = <canonical name>
      const auto dot = key.find('.', 6);
      if (dot == std::string::npos)
        throw SchemaError("line " + std::to_string(entry.line) +
                          ": expected label.<target>.<value> = <canonical>");
      const std::string target = key.substr(6, dot - 6);
      const std::string spelling = key.substr(dot + 1);
      if (target == "category") {
        const auto c = category_from_name(entry.value);
        if (!c)
          throw SchemaError("line " + std::to_string(entry.line) + ": unknown category `" +
                            entry.value + "`");
        schema.category_map[spelling] = *c;
      } else if (target == "subcategory") {
        const auto s = subcategory_from_name(entry.value);
        if (!s)
          throw SchemaError("line " + std::to_string(entry.line) + ": unknown subcategory `" +
                            entry.value + "`");
        schema.subcategory_map[spelling] = *s;
      } else {
        throw SchemaError("line " + std::to_string(entry.line) + ": unknown label target `" +
                          target + "`");
      }
      continue;
    }
    schema.columns.emplace_back(entry.key, parse_role(entry.value, entry.line));
  }
  schema.validate();
  return schema;
}

FeatureSchema FeatureSchema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file: " + path);
  return parse(in);
}

void FeatureSchema::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write schema file: " + path);
  for (const auto& [name, role] : columns)
    out << name << " = " << role_name(role) << "\n";
  for (const auto& [spelling, c] : category_map)
    out << "label.category." << spelling << " = " << category_name(c) << "\n";
  for (const auto& [spelling, s] : subcategory_map)
    out << "label.subcategory." << spelling << " = " << subcategory_name(s) << "\n";
}

FeatureSchema derive_schema(const std::string& csv_path, const std::string& attack_column,
                            const std::string& category_column,
                            const std::string& subcategory_column) {
  CsvReader reader(csv_path);
  const auto& header = reader.header();

  // Identifier-like columns carry no flow statistics.
  const std::vector<std::string> id_markers = {"id",   "seq",  "addr", "port",
                                               "time", "date", "stamp"};
  auto identifier_like = [&](const std::string& name) {
    const std::string n = to_lower(name);
    for (const auto& m : id_markers)
      if (n.find(m) != std::string::npos) return true;
    return false;
  };

  const std::size_t ncols = header.size();
  std::vector<bool> numeric(ncols, true);
  std::vector<double> sum(ncols, 0.0), sumsq(ncols, 0.0);
  std::size_t rows = 0;

  std::vector<std::string> cells;
  while (reader.next(cells)) {
    if (cells.size() != ncols) continue;
    ++rows;
    for (std::size_t c = 0; c < ncols; ++c) {
      if (!numeric[c]) continue;
      double v = 0.0;
      const std::string cell = trim(cells[c]);
      const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || p != cell.data() + cell.size()) {
        numeric[c] = false;
        continue;
      }
      sum[c] += v;
      sumsq[c] += v * v;
    }
  }
  if (rows == 0) throw DataError("no data rows in " + csv_path);

  const std::string label_cols[3] = {attack_column, category_column, subcategory_column};
  auto is_label = [&](const std::string& name) {
    for (const auto& l : label_cols)
      if (to_lower(name) == to_lower(l)) return true;
    return false;
  };

  // Rank numeric non-identifier columns by variance.
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (!numeric[c] || identifier_like(header[c]) || is_label(header[c])) continue;
    const double mean = sum[c] / static_cast<double>(rows);
    const double var = sumsq[c] / static_cast<double>(rows) - mean * mean;
    ranked.emplace_back(var, c);
  }
  if (ranked.size() < kFeatureCount)
    throw SchemaError("only " + std::to_string(ranked.size()) +
                      " usable feature columns in " + csv_path + ", need " +
                      std::to_string(kFeatureCount));
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  std::set<std::size_t> picked;
  for (int i = 0; i < kFeatureCount; ++i) picked.insert(ranked[i].second);

  FeatureSchema schema;
  for (std::size_t c = 0; c < ncols; ++c) {
    ColumnRole role = ColumnRole::Ignore;
    if (picked.count(c)) role = ColumnRole::Feature;
    else if (to_lower(header[c]) == to_lower(attack_column)) role = ColumnRole::LabelAttack;
    else if (to_lower(header[c]) == to_lower(category_column)) role = ColumnRole::LabelCategory;
    else if (to_lower(header[c]) == to_lower(subcategory_column)) role = ColumnRole::LabelSubcategory;
    schema.columns.emplace_back(header[c], role);
  }
  schema.validate();
  return schema;
}

} // namespace edgeids
