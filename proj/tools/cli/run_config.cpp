#include "cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "edgeids/errors.hpp"
#include "edgeids/kvfile.hpp"

namespace edgeids::cli {

namespace {

double parse_double(const KvEntry& e) {
  const std::string s = trim(e.value);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("line " + std::to_string(e.line) + ": `" + e.key +
                      "` expects a number, got `" + e.value + "`");
  return v;
}

std::uint64_t parse_u64(const KvEntry& e) {
  const double v = parse_double(e);
  if (v < 0 || v != std::floor(v))
    throw ConfigError("line " + std::to_string(e.line) + ": `" + e.key +
                      "` expects a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

bool parse_bool(const KvEntry& e) {
  const std::string v = to_lower(trim(e.value));
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError("line " + std::to_string(e.line) + ": `" + e.key + "` expects a boolean");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) items.push_back(t);
  }
  return items;
}

ModelKind parse_kind(const std::string& name, int line) {
  const std::string n = to_lower(name);
  if (n == "mlp") return ModelKind::Mlp;
  if (n == "nb") return ModelKind::NaiveBayes;
  if (n == "dt") return ModelKind::DecisionTree;
  if (n == "rf" || n == "rfc") return ModelKind::RandomForest;
  if (n == "svm") return ModelKind::Svm;
  throw ConfigError("line " + std::to_string(line) + ": unknown model family `" + name + "`");
}

} // namespace

const std::string& engine_kind_name(EngineKind k) {
  static const std::string seq = "sequential";
  static const std::string flow = "dataflow";
  return k == EngineKind::Sequential ? seq : flow;
}

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig cfg;
  for (const auto& e : parse_kv(in)) {
    const std::string key = to_lower(e.key);
    if (key == "seed") cfg.seed = parse_u64(e);
    else if (key == "data.csv") cfg.csv_path = e.value;
    else if (key == "data.schema") cfg.schema_path = e.value;
    else if (key == "data.train_fraction") cfg.train_fraction = parse_double(e);
    else if (key == "synth.rows") cfg.synth_rows = parse_u64(e);
    else if (key == "synth.separation") cfg.synth_separation = parse_double(e);
    else if (key == "synth.weights") {
      const auto items = split_list(e.value);
      if (items.size() != kSubcategoryCount)
        throw ConfigError("line " + std::to_string(e.line) + ": synth.weights needs " +
                          std::to_string(kSubcategoryCount) + " values");
      std::array<double, kSubcategoryCount> w{};
      for (int i = 0; i < kSubcategoryCount; ++i) {
        KvEntry tmp{e.key, items[i], e.line};
        w[i] = parse_double(tmp);
      }
      cfg.synth_weights = w;
    } else if (key == "train.families") {
      cfg.families.clear();
      for (const auto& f : split_list(e.value)) cfg.families.push_back(parse_kind(f, e.line));
      if (cfg.families.empty())
        throw ConfigError("line " + std::to_string(e.line) + ": empty train.families");
    } else if (key == "train.targets") {
      cfg.targets.clear();
      for (const auto& t : split_list(e.value)) {
        const auto target = target_from_name(t);
        if (!target)
          throw ConfigError("line " + std::to_string(e.line) + ": unknown target `" + t + "`");
        cfg.targets.push_back(*target);
      }
      if (cfg.targets.empty())
        throw ConfigError("line " + std::to_string(e.line) + ": empty train.targets");
    } else if (key == "train.epochs") cfg.train.epochs = static_cast<int>(parse_u64(e));
    else if (key == "train.batch_size") cfg.train.batch_size = static_cast<int>(parse_u64(e));
    else if (key == "train.learning_rate") cfg.train.learning_rate = parse_double(e);
    else if (key == "train.momentum") cfg.train.momentum = parse_double(e);
    else if (key == "train.class_weighting") {
      const std::string v = to_lower(trim(e.value));
      if (v == "auto") {
        cfg.class_weighting_auto = true;
      } else if (v == "none") {
        cfg.class_weighting_auto = false;
        cfg.train.class_weighting = ClassWeighting::None;
      } else if (v == "inverse-frequency" || v == "inverse") {
        cfg.class_weighting_auto = false;
        cfg.train.class_weighting = ClassWeighting::InverseFrequency;
      } else {
        throw ConfigError("line " + std::to_string(e.line) +
                          ": class_weighting is auto|none|inverse-frequency");
      }
    } else if (key == "train.tree_max_depth") cfg.train.tree_max_depth = static_cast<int>(parse_u64(e));
    else if (key == "train.forest_size") cfg.train.forest_size = static_cast<int>(parse_u64(e));
    else if (key == "train.rf_bootstrap") cfg.train.rf_bootstrap = parse_bool(e);
    else if (key == "train.rf_feature_subsample") cfg.train.rf_feature_subsample = static_cast<int>(parse_u64(e));
    else if (key == "train.svm_epochs") cfg.train.svm_epochs = static_cast<int>(parse_u64(e));
    else if (key == "train.svm_learning_rate") cfg.train.svm_learning_rate = parse_double(e);
    else if (key == "train.svm_lambda") cfg.train.svm_lambda = parse_double(e);
    else if (key == "train.nb_variance_floor") cfg.train.nb_variance_floor = parse_double(e);
    else if (key == "engine.kind") {
      const std::string v = to_lower(trim(e.value));
      if (v == "sequential") cfg.engine.kind = EngineKind::Sequential;
      else if (v == "dataflow") cfg.engine.kind = EngineKind::Dataflow;
      else
        throw ConfigError("line " + std::to_string(e.line) +
                          ": engine.kind is sequential|dataflow");
    } else if (key == "engine.lanes") cfg.engine.lanes = static_cast<int>(parse_u64(e));
    else if (key == "engine.queue_depth") cfg.engine.queue_depth = static_cast<int>(parse_u64(e));
    else if (key == "engine.reuse_factor") cfg.engine.reuse_factor = static_cast<int>(parse_u64(e));
    else if (key == "bench.repetitions") cfg.bench_repetitions = static_cast<int>(parse_u64(e));
    else if (key == "bench.rows") cfg.bench_rows = parse_u64(e);
    else if (key.starts_with("bench.power_watts.")) cfg.power_watts[key.substr(18)] = parse_double(e);
    else if (key.starts_with("bench.lut.")) cfg.lut_counts[key.substr(10)] = parse_double(e);
    else if (key == "cost.f_clk_hz") cfg.cost.f_clk_hz = parse_double(e);
    else if (key == "cost.dsp_per_mac") cfg.cost.dsp_per_mac = parse_double(e);
    else if (key == "cost.lut_per_mac") cfg.cost.lut_per_mac = parse_double(e);
    else if (key == "cost.lut_per_softmax_class") cfg.cost.lut_per_softmax_class = parse_double(e);
    else if (key == "cost.lut_fixed") cfg.cost.lut_fixed = parse_double(e);
    else if (key == "cost.overhead_cycles") cfg.cost.overhead_cycles = parse_double(e);
    else if (key == "select.f1_floor") cfg.selection.f1_floor = parse_double(e);
    else
      throw ConfigError("line " + std::to_string(e.line) + ": unknown configuration key `" +
                        e.key + "`");
  }
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
    throw ConfigError("data.train_fraction must be in (0, 1)");
  if (cfg.selection.f1_floor < 0.0 || cfg.selection.f1_floor > 1.0)
    throw ConfigError("select.f1_floor must be in [0, 1]");
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse(in);
}

TrainConfig RunConfig::train_for(Target t) const {
  TrainConfig out = train;
  out.seed = seed.value_or(0);
  if (class_weighting_auto)
    out.class_weighting =
        t == Target::Attack ? ClassWeighting::None : ClassWeighting::InverseFrequency;
  return out;
}

void RunConfig::require_seed() const {
  if (!seed) throw ConfigError("seed is mandatory: set `seed =` in the config or pass --seed");
}

} // namespace edgeids::cli
