#include "edgeids/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "edgeids/csv.hpp"
#include "edgeids/errors.hpp"
#include "edgeids/kvfile.hpp"
#include "edgeids/rng.hpp"

namespace edgeids {

namespace {

constexpr std::size_t kMaxBadRowSamples = 16;

bool parse_float(const std::string& raw, float& out) {
  const std::string cell = trim(raw);
  if (cell.empty()) return false;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || p != cell.data() + cell.size() || !std::isfinite(v)) return false;
  out = static_cast<float>(v);
  return true;
}

struct ColumnIndexes {
  std::vector<std::size_t> features; // schema feature order -> CSV column
  std::size_t attack = 0, category = 0, subcategory = 0;
  bool has_labels = false;
};

ColumnIndexes resolve_columns(const FeatureSchema& schema,
                              const std::vector<std::string>& header, bool labels_required) {
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < header.size(); ++i)
    by_name.emplace(to_lower(trim(header[i])), i);

  auto find = [&](const std::string& name, const char* role) -> std::size_t {
    const auto it = by_name.find(to_lower(name));
    if (it == by_name.end())
      throw SchemaError(std::string(role) + " column absent: `" + name + "`");
    return it->second;
  };

  ColumnIndexes idx;
  int label_cols = 0;
  for (const auto& [name, role] : schema.columns) {
    switch (role) {
      case ColumnRole::Feature:
        idx.features.push_back(find(name, "feature"));
        break;
      case ColumnRole::LabelAttack:
      case ColumnRole::LabelCategory:
      case ColumnRole::LabelSubcategory: {
        const char* role_text = role == ColumnRole::LabelAttack     ? "label-attack"
                                : role == ColumnRole::LabelCategory ? "label-category"
                                                                    : "label-subcategory";
        const auto it = by_name.find(to_lower(name));
        if (it == by_name.end()) {
          if (labels_required)
            throw SchemaError(std::string(role_text) + " column absent: `" + name + "`");
          break;
        }
        ++label_cols;
        if (role == ColumnRole::LabelAttack) idx.attack = it->second;
        if (role == ColumnRole::LabelCategory) idx.category = it->second;
        if (role == ColumnRole::LabelSubcategory) idx.subcategory = it->second;
        break;
      }
      case ColumnRole::Ignore:
        break;
    }
  }
  idx.has_labels = label_cols == 3;
  return idx;
}

LoadResult load_csv_impl(const std::string& path, const FeatureSchema& schema,
                         bool labels_required) {
  schema.validate();
  CsvReader reader(path);
  const ColumnIndexes idx = resolve_columns(schema, reader.header(), labels_required);

  LoadResult result;
  Dataset& ds = result.dataset;
  LoadSummary& summary = result.summary;
  ds.provenance = Provenance::Csv;

  std::vector<std::string> cells;
  std::array<float, kFeatureCount> feat{};
  while (reader.next(cells)) {
    bool parse_ok = cells.size() >= reader.header().size();
    for (std::size_t f = 0; parse_ok && f < idx.features.size(); ++f)
      parse_ok = parse_float(cells[idx.features[f]], feat[f]);
    if (!parse_ok) {
      ++summary.rows_skipped_parse;
      if (summary.sample_bad_rows.size() < kMaxBadRowSamples)
        summary.sample_bad_rows.push_back(reader.row_index());
      continue;
    }

    LabelTriple triple;
    if (idx.has_labels) {
      try {
        triple.attack = static_cast<std::uint8_t>(FeatureSchema::map_attack(cells[idx.attack]));
        triple.category = static_cast<std::uint8_t>(schema.map_category(cells[idx.category]));
        triple.subcategory =
            static_cast<std::uint8_t>(schema.map_subcategory(cells[idx.subcategory]));
      } catch (const DataError&) {
        ++summary.rows_skipped_label;
        if (summary.sample_bad_rows.size() < kMaxBadRowSamples)
          summary.sample_bad_rows.push_back(reader.row_index());
        continue;
      }
      if (!triple.consistent()) {
        ++summary.rows_skipped_label;
        if (summary.sample_bad_rows.size() < kMaxBadRowSamples)
          summary.sample_bad_rows.push_back(reader.row_index());
        continue;
      }
    }

    ds.features.insert(ds.features.end(), feat.begin(), feat.end());
    ds.labels.push_back(triple);
    ++summary.rows_loaded;
  }
  return result;
}

} // namespace

std::vector<int> Dataset::targets(Target t) const {
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i].value_for(t);
  return out;
}

void NormStats::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write norm stats: " + path);
  out << "# feature_min feature_max\n";
  char buf[96];
  for (const auto& [lo, hi] : min_max) {
    std::snprintf(buf, sizeof buf, "%.9g %.9g\n", static_cast<double>(lo),
                  static_cast<double>(hi));
    out << buf;
  }
}

NormStats NormStats::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open norm stats: " + path);
  NormStats stats;
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    double lo = 0.0, hi = 0.0;
    if (std::sscanf(stripped.c_str(), "%lg %lg", &lo, &hi) != 2 || !(lo <= hi))
      throw DataError("bad norm stats line: `" + stripped + "`");
    stats.min_max.emplace_back(static_cast<float>(lo), static_cast<float>(hi));
  }
  if (stats.size() != kFeatureCount)
    throw DataError("norm stats has " + std::to_string(stats.size()) + " entries, need " +
                    std::to_string(kFeatureCount));
  return stats;
}

LoadResult load_csv(const std::string& path, const FeatureSchema& schema) {
  return load_csv_impl(path, schema, /*labels_required=*/true);
}

LoadResult load_csv_features(const std::string& path, const FeatureSchema& schema) {
  return load_csv_impl(path, schema, /*labels_required=*/false);
}

Dataset fit_normalize(const Dataset& ds) {
  if (ds.rows() == 0) throw DataError("cannot normalize an empty dataset");
  if (!ds.norm_stats.empty()) throw DataError("dataset is already normalized");

  Dataset out = ds;
  out.norm_stats.min_max.resize(kFeatureCount);
  for (int f = 0; f < kFeatureCount; ++f) {
    float lo = ds.features[f];
    float hi = ds.features[f];
    for (std::size_t r = 1; r < ds.rows(); ++r) {
      const float v = ds.features[r * kFeatureCount + f];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.norm_stats.min_max[f] = {lo, hi};
  }
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (int f = 0; f < kFeatureCount; ++f) {
      const auto [lo, hi] = out.norm_stats.min_max[f];
      float& v = out.features[r * kFeatureCount + f];
      v = (hi > lo) ? (v - lo) / (hi - lo) : 0.0f;
    }
  }
  return out;
}

Dataset apply_normalize(const Dataset& ds, const NormStats& stats) {
  if (stats.size() != kFeatureCount)
    throw DataError("norm stats arity " + std::to_string(stats.size()) + ", need " +
                    std::to_string(kFeatureCount));
  Dataset out = ds;
  out.norm_stats = stats;
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    for (int f = 0; f < kFeatureCount; ++f) {
      const auto [lo, hi] = stats.min_max[f];
      float& v = out.features[r * kFeatureCount + f];
      v = (hi > lo) ? (v - lo) / (hi - lo) : 0.0f;
      v = std::clamp(v, 0.0f, 1.0f);
    }
  }
  return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double train_fraction,
                                             std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train_fraction must be in (0, 1)");

  std::array<std::vector<std::size_t>, kSubcategoryCount> by_class;
  for (std::size_t r = 0; r < ds.rows(); ++r)
    by_class[ds.labels[r].subcategory].push_back(r);

  for (int c = 0; c < kSubcategoryCount; ++c) {
    if (by_class[c].size() < 2)
      throw DataError("class " + subcategory_name(static_cast<Subcategory>(c)) +
                      " has fewer than 2 rows, cannot split");
  }

  Rng rng(mix_seed(seed, 0x517));
  std::vector<bool> in_train(ds.rows(), false);
  for (int c = 0; c < kSubcategoryCount; ++c) {
    auto& rows = by_class[c];
    rng.shuffle(rows);
    const auto count = rows.size();
    auto take = static_cast<std::size_t>(
        std::llround(static_cast<double>(count) * train_fraction));
    take = std::clamp<std::size_t>(take, 1, count - 1);
    for (std::size_t i = 0; i < take; ++i) in_train[rows[i]] = true;
  }

  Dataset train, test;
  train.provenance = test.provenance = ds.provenance;
  train.norm_stats = test.norm_stats = ds.norm_stats;
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    Dataset& part = in_train[r] ? train : test;
    const auto row = ds.row(r);
    part.features.insert(part.features.end(), row.begin(), row.end());
    part.labels.push_back(ds.labels[r]);
  }
  return {std::move(train), std::move(test)};
}

void SynthSpec::validate() const {
  if (rows < static_cast<std::size_t>(kSubcategoryCount))
    throw ConfigError("synth rows must be >= " + std::to_string(kSubcategoryCount));
  if (!(separation >= 0.0))
    throw ConfigError("synth separation must be non-negative");
  double sum = 0.0;
  for (const double w : class_weights) {
    if (w < 0.0) throw ConfigError("synth class weights must be non-negative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw ConfigError("synth class weights must sum to 1");
}

SynthSpec SynthSpec::uniform(std::size_t rows, double separation, std::uint64_t seed) {
  SynthSpec spec;
  spec.rows = rows;
  spec.separation = separation;
  spec.seed = seed;
  spec.class_weights.fill(1.0 / kSubcategoryCount);
  return spec;
}

// Cluster geometry: with h = separation/2, attack subcategory c sits at
// 2h * axis(c-1); the intrusion-free class is an even mixture of a lobe at
// the origin and a lobe at 2h * (axis0 + axis1). Minimum pairwise center
// distance is exactly `separation`. The two Normal lobes straddle the DoS
// clusters in features 0 and 1, so per-feature marginals alone cannot
// separate Normal from DoS traffic.
Dataset synthesize(const SynthSpec& spec) {
  spec.validate();
  constexpr double kClusterSigma = 0.35;

  Rng rng(mix_seed(spec.seed, 0xe1));
  Dataset ds;
  ds.provenance = Provenance::Synthetic;
  ds.features.reserve(spec.rows * kFeatureCount);
  ds.labels.reserve(spec.rows);

  std::array<double, kSubcategoryCount> cum{};
  double acc = 0.0;
  for (int c = 0; c < kSubcategoryCount; ++c) {
    acc += spec.class_weights[c];
    cum[c] = acc;
  }

  const double h = spec.separation / 2.0;
  for (std::size_t r = 0; r < spec.rows; ++r) {
    const double u = rng.uniform() * acc;
    int cls = 0;
    while (cls < kSubcategoryCount - 1 && u >= cum[cls]) ++cls;

    std::array<double, kFeatureCount> center{};
    if (cls == 0) {
      if (rng.uniform() < 0.5) {
        center[0] = 2.0 * h;
        center[1] = 2.0 * h;
      }
    } else {
      center[cls - 1] = 2.0 * h;
    }

    for (int f = 0; f < kFeatureCount; ++f) {
      const double v = center[f] + kClusterSigma * rng.gaussian();
      ds.features.push_back(static_cast<float>(v));
    }
    ds.labels.push_back(LabelTriple::from_subcategory(static_cast<Subcategory>(cls)));
  }
  return ds;
}

void write_csv(const Dataset& ds, const std::string& path, bool with_labels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write CSV: " + path);
  char buf[64];
  for (int f = 0; f < kFeatureCount; ++f) {
    std::snprintf(buf, sizeof buf, "f%02d", f);
    out << (f ? "," : "") << buf;
  }
  if (with_labels) out << ",attack,category,subcategory";
  out << "\n";
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    const auto row = ds.row(r);
    for (int f = 0; f < kFeatureCount; ++f) {
      std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(row[f]));
      out << (f ? "," : "") << buf;
    }
    if (with_labels) {
      const auto& l = ds.labels[r];
      out << ',' << static_cast<int>(l.attack) << ','
          << category_name(static_cast<Category>(l.category)) << ','
          << subcategory_name(static_cast<Subcategory>(l.subcategory));
    }
    out << "\n";
  }
}

FeatureSchema synthetic_schema() {
  FeatureSchema schema;
  char buf[16];
  for (int f = 0; f < kFeatureCount; ++f) {
    std::snprintf(buf, sizeof buf, "f%02d", f);
    schema.columns.emplace_back(buf, ColumnRole::Feature);
  }
  schema.columns.emplace_back("attack", ColumnRole::LabelAttack);
  schema.columns.emplace_back("category", ColumnRole::LabelCategory);
  schema.columns.emplace_back("subcategory", ColumnRole::LabelSubcategory);
  return schema;
}

} // namespace edgeids
