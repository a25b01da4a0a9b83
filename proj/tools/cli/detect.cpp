#include "cli/detect.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <ostream>

#include <json.hpp>

#include "cli/pipeline.hpp"
#include "edgeids/csv.hpp"
#include "edgeids/errors.hpp"
#include "edgeids/model.hpp"

namespace edgeids::cli {

namespace {

MlpModel load_head(const std::string& dir, Target expected) {
  const std::string path =
      (std::filesystem::path(dir) / model_filename(ModelKind::Mlp, expected)).string();
  ClassifierModel model = load_model(path);
  if (kind_of(model) != ModelKind::Mlp)
    throw ConfigError(path + " is not an MLP model");
  if (target_of(model) != expected)
    throw ConfigError(path + " targets " + target_name(target_of(model)) + ", expected " +
                      target_name(expected));
  return std::get<MlpModel>(std::move(model));
}

std::string iso8601_utc(bool fixed_clock) {
  std::time_t t = 0;
  if (!fixed_clock)
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

} // namespace

ModelBundle ModelBundle::load(const std::string& dir) {
  ModelBundle bundle;
  bundle.attack = load_head(dir, Target::Attack);
  bundle.category = load_head(dir, Target::Category);
  bundle.subcategory = load_head(dir, Target::Subcategory);
  bundle.stats = NormStats::load((std::filesystem::path(dir) / "norm_stats.txt").string());

  std::vector<std::uint8_t> all;
  for (const MlpModel* m : {&bundle.attack, &bundle.category, &bundle.subcategory}) {
    const auto bytes = serialize(ClassifierModel{*m});
    all.insert(all.end(), bytes.begin(), bytes.end());
  }
  bundle.model_id = content_hash(all);
  return bundle;
}

DetectSummary detect_stream(const ModelBundle& bundle, const FeatureSchema& schema,
                            const std::string& input_csv, std::ostream& alerts,
                            const DetectOptions& opts) {
  DetectSummary summary;
  for (int c = 0; c < kSubcategoryCount; ++c)
    summary.per_subcategory[subcategory_name(static_cast<Subcategory>(c))] = 0;

  const LoadResult res = load_csv_features(input_csv, schema);
  summary.malformed = res.summary.rows_skipped();

  std::uint64_t sequence = 0;
  Dataset row_ds;
  row_ds.features.resize(kFeatureCount);
  row_ds.labels.resize(1);
  for (std::size_t r = 0; r < res.dataset.rows(); ++r) {
    const auto row = res.dataset.row(r);
    std::copy(row.begin(), row.end(), row_ds.features.begin());
    row_ds.norm_stats = {};
    const Dataset norm = apply_normalize(row_ds, bundle.stats);
    const auto x = norm.row(0);

    const Prediction att = mlp_predict(bundle.attack, x);
    const Prediction cat = mlp_predict(bundle.category, x);
    const Prediction sub = mlp_predict(bundle.subcategory, x);

    ++summary.records;
    const auto& sub_name = subcategory_name(static_cast<Subcategory>(sub.class_id));
    ++summary.per_subcategory[sub_name];

    const bool malicious = att.class_id == 1;
    if (!malicious && !opts.log_benign) continue;

    nlohmann::ordered_json alert;
    alert["sequence"] = ++sequence;
    alert["timestamp"] = iso8601_utc(opts.fixed_clock);
    alert["attack"] = malicious;
    alert["category"] = category_name(static_cast<Category>(cat.class_id));
    alert["subcategory"] = sub_name;
    alert["confidence"] = att.scores[att.class_id];
    alert["model_id"] = bundle.model_id;
    alerts << alert.dump() << "\n";
    ++summary.alerts;
  }
  return summary;
}

void write_summary(const DetectSummary& summary, std::ostream& out) {
  out << "records=" << summary.records << " malformed=" << summary.malformed
      << " alerts=" << summary.alerts << "\n";
  for (const auto& [name, count] : summary.per_subcategory)
    out << name << "=" << count << "\n";
}

} // namespace edgeids::cli
