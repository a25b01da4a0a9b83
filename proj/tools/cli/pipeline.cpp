#include "cli/pipeline.hpp"

#include <cstdio>

#include "edgeids/errors.hpp"

namespace edgeids::cli {

PreparedData prepare_data(const RunConfig& cfg) {
  cfg.require_seed();
  Dataset raw;
  LoadSummary summary;
  if (cfg.csv_path) {
    if (!cfg.schema_path)
      throw ConfigError("data.schema is required when data.csv is set");
    const FeatureSchema schema = FeatureSchema::load(*cfg.schema_path);
    LoadResult res = load_csv(*cfg.csv_path, schema);
    raw = std::move(res.dataset);
    summary = res.summary;
    if (raw.rows() == 0) throw DataError("no usable rows in " + *cfg.csv_path);
  } else {
    SynthSpec spec;
    spec.rows = cfg.synth_rows;
    spec.separation = cfg.synth_separation;
    spec.seed = *cfg.seed;
    if (cfg.synth_weights)
      spec.class_weights = *cfg.synth_weights;
    else
      spec.class_weights.fill(1.0 / kSubcategoryCount);
    raw = synthesize(spec);
  }

  auto [train_raw, test_raw] = stratified_split(raw, cfg.train_fraction, *cfg.seed);
  PreparedData out;
  out.train = fit_normalize(train_raw);
  out.stats = out.train.norm_stats;
  out.test = apply_normalize(test_raw, out.stats);
  out.load_summary = summary;
  return out;
}

std::string model_filename(ModelKind kind, Target target) {
  return kind_name(kind) + "_" + target_name(target) + ".iids";
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

} // namespace edgeids::cli
