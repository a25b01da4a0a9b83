#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/detect.hpp"
#include "cli/pipeline.hpp"
#include "cli/run_config.hpp"
#include "edgeids/engine.hpp"
#include "edgeids/errors.hpp"
#include "support/subprocess.hpp"
#include "support/temp_dir.hpp"

using namespace edgeids;
using namespace edgeids::cli;
namespace fs = std::filesystem;

namespace {

const std::string kIds = EDGEIDS_CLI_PATH;
const std::string kData = EDGEIDS_DATA_DIR;

/// MLP whose output bias pins the argmax to `forced_class`.
MlpModel forced_model(Target t, int forced_class) {
  MlpModel m;
  m.topology = MlpTopology::for_target(t);
  m.target = t;
  const auto& sizes = m.topology.layer_sizes;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    m.weights.emplace_back(static_cast<std::size_t>(sizes[l]) * sizes[l + 1], 0.0f);
    m.biases.emplace_back(sizes[l + 1], 0.0f);
  }
  m.biases.back()[forced_class] = 10.0f;
  return m;
}

/// Writes a bundle of forced models plus identity norm stats and a schema.
void write_stub_bundle(const testutil::TempDir& tmp, int attack_class, int category_class,
                       int subcategory_class) {
  save_model(ClassifierModel{forced_model(Target::Attack, attack_class)},
             tmp.file("mlp_attack.iids"));
  save_model(ClassifierModel{forced_model(Target::Category, category_class)},
             tmp.file("mlp_category.iids"));
  save_model(ClassifierModel{forced_model(Target::Subcategory, subcategory_class)},
             tmp.file("mlp_subcategory.iids"));
  NormStats stats;
  stats.min_max.assign(kFeatureCount, {0.0f, 1.0f});
  stats.save(tmp.file("norm_stats.txt"));
  synthetic_schema().save(tmp.file("schema.txt"));
}

std::string write_feature_csv(const testutil::TempDir& tmp, const std::string& name,
                              std::size_t rows, std::uint64_t seed) {
  Dataset ds = synthesize(SynthSpec::uniform(std::max<std::size_t>(rows, 7), 3.0, seed));
  ds.features.resize(rows * kFeatureCount);
  ds.labels.resize(rows);
  write_csv(ds, tmp.file(name), /*with_labels=*/false);
  return tmp.file(name);
}

std::string small_config(const testutil::TempDir& tmp, const std::string& extra = "") {
  return tmp.write("run.cfg",
                   "seed = 77\n"
                   "synth.rows = 1600\n"
                   "synth.separation = 3.0\n"
                   "train.families = mlp\n"
                   "train.epochs = 4\n"
                   "train.learning_rate = 0.05\n" +
                       extra);
}

} // namespace

TEST_CASE("run config: defaults, overrides, validation") {
  std::istringstream in(
      "seed = 9\n"
      "synth.rows = 500\n"
      "train.families = mlp, dt\n"
      "train.targets = attack\n"
      "engine.lanes = 8\n"
      "bench.power_watts.sequential = 2.34\n"
      "select.f1_floor = 0.8\n");
  const RunConfig cfg = RunConfig::parse(in);
  CHECK(cfg.seed == 9);
  CHECK(cfg.synth_rows == 500);
  CHECK(cfg.families == std::vector{ModelKind::Mlp, ModelKind::DecisionTree});
  CHECK(cfg.targets == std::vector{Target::Attack});
  CHECK(cfg.engine.lanes == 8);
  CHECK(cfg.power_watts.at("sequential") == 2.34);
  CHECK(cfg.selection.f1_floor == 0.8);

  std::istringstream bad("mystery.key = 1\n");
  CHECK_THROWS_AS(RunConfig::parse(bad), ConfigError);
  std::istringstream bad_frac("data.train_fraction = 1.5\n");
  CHECK_THROWS_AS(RunConfig::parse(bad_frac), ConfigError);

  RunConfig no_seed;
  CHECK_THROWS_AS(no_seed.require_seed(), ConfigError);
}

TEST_CASE("run config: per-target class weighting default") {
  RunConfig cfg;
  cfg.seed = 1;
  CHECK(cfg.train_for(Target::Attack).class_weighting == ClassWeighting::None);
  CHECK(cfg.train_for(Target::Category).class_weighting ==
        ClassWeighting::InverseFrequency);
  std::istringstream in("train.class_weighting = none\n");
  RunConfig pinned = RunConfig::parse(in);
  pinned.seed = 1;
  CHECK(pinned.train_for(Target::Subcategory).class_weighting == ClassWeighting::None);
}

TEST_CASE("detect_stream: forced DoS_TCP classifier alerts on every record") {
  testutil::TempDir tmp;
  write_stub_bundle(tmp, 1, static_cast<int>(Category::DoS),
                    static_cast<int>(Subcategory::DoS_TCP));
  const std::string input = write_feature_csv(tmp, "in.csv", 5, 3);

  const ModelBundle bundle = ModelBundle::load(tmp.path().string());
  std::ostringstream alerts;
  DetectOptions opts;
  opts.fixed_clock = true;
  const DetectSummary summary =
      detect_stream(bundle, synthetic_schema(), input, alerts, opts);

  CHECK(summary.records == 5);
  CHECK(summary.alerts == 5);
  CHECK(summary.malformed == 0);
  CHECK(summary.per_subcategory.at("DoS_TCP") == 5);

  std::istringstream lines(alerts.str());
  std::string line;
  std::uint64_t expected_seq = 0;
  while (std::getline(lines, line)) {
    const auto alert = nlohmann::json::parse(line);
    CHECK(alert["sequence"] == ++expected_seq);
    CHECK(alert["attack"] == true);
    CHECK(alert["category"] == "DoS");
    CHECK(alert["subcategory"] == "DoS_TCP");
    CHECK(alert["timestamp"] == "1970-01-01T00:00:00Z");
    CHECK(alert["confidence"].get<double>() > 0.99);
    CHECK(alert["model_id"] == bundle.model_id);
    // field order is pinned by the alert schema
    CHECK(line.rfind("{\"sequence\":", 0) == 0);
  }
  CHECK(expected_seq == 5);
}

TEST_CASE("detect_stream: benign stream emits no alerts unless asked") {
  testutil::TempDir tmp;
  write_stub_bundle(tmp, 0, 0, 0);
  const std::string input = write_feature_csv(tmp, "in.csv", 7, 4);
  const ModelBundle bundle = ModelBundle::load(tmp.path().string());

  std::ostringstream alerts;
  DetectOptions opts;
  opts.fixed_clock = true;
  const DetectSummary summary =
      detect_stream(bundle, synthetic_schema(), input, alerts, opts);
  CHECK(summary.alerts == 0);
  CHECK(alerts.str().empty());
  CHECK(summary.per_subcategory.at("Normal") == 7);

  opts.log_benign = true;
  std::ostringstream all;
  const DetectSummary logged =
      detect_stream(bundle, synthetic_schema(), input, all, opts);
  CHECK(logged.alerts == 7);
  std::istringstream lines(all.str());
  std::string line;
  std::getline(lines, line);
  const auto alert = nlohmann::json::parse(line);
  CHECK(alert["attack"] == false);
}

TEST_CASE("detect_stream: malformed rows are counted and skipped") {
  testutil::TempDir tmp;
  write_stub_bundle(tmp, 1, 1, 1);
  std::string csv = testutil::read_file(write_feature_csv(tmp, "in.csv", 4, 5));
  csv += "not,a,flow\n";
  const std::string input = tmp.write("dirty.csv", csv);

  const ModelBundle bundle = ModelBundle::load(tmp.path().string());
  std::ostringstream alerts;
  const DetectSummary summary =
      detect_stream(bundle, synthetic_schema(), input, alerts, DetectOptions{});
  CHECK(summary.records == 4);
  CHECK(summary.malformed == 1);
}

TEST_CASE("detect_stream alert count equals an offline recount") {
  testutil::TempDir tmp;
  // real (small) trained bundle
  const Dataset train = fit_normalize(synthesize(SynthSpec::uniform(1500, 3.0, 50)));
  TrainConfig cfg;
  cfg.seed = 5;
  cfg.epochs = 4;
  cfg.learning_rate = 0.05;
  for (const Target t : {Target::Attack, Target::Category, Target::Subcategory}) {
    TrainConfig c = cfg;
    c.class_weighting =
        t == Target::Attack ? ClassWeighting::None : ClassWeighting::InverseFrequency;
    save_model(ClassifierModel{train_mlp(train, t, c)},
               tmp.file(model_filename(ModelKind::Mlp, t)));
  }
  train.norm_stats.save(tmp.file("norm_stats.txt"));

  const Dataset stream = synthesize(SynthSpec::uniform(500, 3.0, 51));
  write_csv(stream, tmp.file("stream.csv"), /*with_labels=*/false);

  const ModelBundle bundle = ModelBundle::load(tmp.path().string());
  std::ostringstream alerts;
  const DetectSummary summary = detect_stream(bundle, synthetic_schema(),
                                              tmp.file("stream.csv"), alerts, DetectOptions{});

  // offline recount through the sequential engine
  const Dataset norm = apply_normalize(stream, bundle.stats);
  const PredictionBatch batch = run_sequential(bundle.attack, norm);
  std::uint64_t malicious = 0;
  for (const int c : batch.class_ids) malicious += c == 1 ? 1 : 0;
  CHECK(summary.alerts == malicious);
  CHECK(summary.records == 500);
}

TEST_CASE("ids: usage errors exit 1") {
  CHECK(testutil::run_process({kIds}).exit_code == 1);
  CHECK(testutil::run_process({kIds, "--bogus-flag", "train"}).exit_code == 1);
  CHECK(testutil::run_process({kIds, "--help"}).exit_code == 0);
}

TEST_CASE("ids: config and data errors map to exit codes") {
  testutil::TempDir tmp;
  // missing config file -> 3
  CHECK(testutil::run_process({kIds, "--config", tmp.file("nope.cfg"), "train"}).exit_code ==
        3);
  // missing seed -> 3
  const std::string cfg = tmp.write("no_seed.cfg", "synth.rows = 100\n");
  CHECK(testutil::run_process({kIds, "--config", cfg, "--out", tmp.file("out"), "train"})
            .exit_code == 3);
  // eval without trained models -> 2
  CHECK(testutil::run_process(
            {kIds, "--seed", "1", "--out", tmp.file("empty"), "eval"})
            .exit_code == 2);
  // report on an empty bundle -> 2 with the documented message
  const auto rep = testutil::run_process(
      {kIds, "--seed", "1", "--out", tmp.file("empty2"), "report"});
  CHECK(rep.exit_code == 2);
  CHECK(rep.err.find("nothing to report") != std::string::npos);
}

TEST_CASE("ids: incompatible model file aborts detect with exit 3") {
  testutil::TempDir tmp;
  write_stub_bundle(tmp, 1, 1, 1);
  // overwrite the attack head with a category-target model
  save_model(ClassifierModel{forced_model(Target::Category, 0)}, tmp.file("mlp_attack.iids"));
  const std::string input = write_feature_csv(tmp, "in.csv", 3, 6);
  const auto res = testutil::run_process({kIds, "--seed", "1", "detect", "--models",
                                          tmp.path().string(), "--input", input});
  CHECK(res.exit_code == 3);
}

TEST_CASE("ids: train -> eval -> select -> report round trip") {
  testutil::TempDir tmp;
  const std::string cfg = small_config(tmp);
  const std::string out = tmp.file("out");

  CHECK(testutil::run_process({kIds, "--config", cfg, "--out", out, "train"}).exit_code == 0);
  CHECK(fs::exists(fs::path(out) / "mlp_attack.iids"));
  CHECK(fs::exists(fs::path(out) / "norm_stats.txt"));

  CHECK(testutil::run_process({kIds, "--config", cfg, "--out", out, "eval"}).exit_code == 0);
  const std::string eval_csv = testutil::read_file((fs::path(out) / "eval.csv").string());
  CHECK(eval_csv.find("mlp,attack,") != std::string::npos);

  CHECK(testutil::run_process({kIds, "--config", cfg, "--out", out, "select"}).exit_code ==
        0);
  CHECK(fs::exists(fs::path(out) / "selection.txt"));

  const auto rep = testutil::run_process(
      {kIds, "--config", cfg, "--out", out, "--fixtures", kData, "report"});
  CHECK(rep.exit_code == 0);
  const std::string md = testutil::read_file((fs::path(out) / "report.md").string());
  CHECK(md.find("## Model quality vs size") != std::string::npos);
  // bench was never run: the throughput section is omitted
  CHECK(md.find("## Throughput") == std::string::npos);
  CHECK(md.find("| published | mlp | attack | 1.00 | 1.00 | 1.00 | 15565 |") !=
        std::string::npos);
  // markdown and CSV carry identical values
  const std::string metrics_csv =
      testutil::read_file((fs::path(out) / "report_metrics.csv").string());
  CHECK(metrics_csv.find("published,mlp,attack,1.00,1.00,1.00,15565") != std::string::npos);
}

TEST_CASE("ids select on the published fixture eliminates NB and ranks MLP first") {
  testutil::TempDir tmp;
  const std::string out = tmp.file("out");
  const auto res =
      testutil::run_process({kIds, "--seed", "1", "--out", out, "select", "--fixture",
                             kData + "/table2_fixture.csv"});
  REQUIRE(res.exit_code == 0);
  const std::string sel = testutil::read_file((fs::path(out) / "selection.txt").string());
  CHECK(sel.find("[attack]\neliminated nb\nrank1 mlp\nrank2 xgb\n") != std::string::npos);
  // NB falls below the floor on every target
  CHECK(sel.find("[category]\neliminated nb\n") != std::string::npos);
}

TEST_CASE("ids cost sweep and calibration") {
  testutil::TempDir tmp;
  const std::string out = tmp.file("out");
  CHECK(testutil::run_process(
            {kIds, "--seed", "1", "--out", out, "cost", "--sweep-max-rf", "8"})
            .exit_code == 0);
  const std::string cost_csv = testutil::read_file((fs::path(out) / "cost.csv").string());
  CHECK(cost_csv.find("attack,4,2944,736,") != std::string::npos);

  // two-point fit reproduces the closed-form constants exactly
  const std::string two_points = tmp.write("two_points.csv",
                                           "model,reuse_factor,lut,dsp,throughput_pps\n"
                                           "attack,4,47514,,\n"
                                           "category,4,48413,,\n");
  const auto cal = testutil::run_process({kIds, "--seed", "1", "--out", out, "cost",
                                          "--calibrate", two_points, "--free",
                                          "lut_per_mac,lut_fixed"});
  CHECK(cal.exit_code == 0);
  const std::string calib =
      testutil::read_file((fs::path(out) / "calibration.txt").string());
  CHECK(calib.find("cost.lut_per_mac = 28.093") != std::string::npos);
  CHECK(calib.find("cost.lut_fixed = 26837") != std::string::npos);

  // the shipped observation file calibrates the full free set: 3 LUT plus
  // 3 throughput equations, overhead lands on the mean cycle residue
  const auto full = testutil::run_process({kIds, "--seed", "1", "--out", out, "cost",
                                           "--calibrate", kData + "/dfp_observations.csv"});
  CHECK(full.exit_code == 0);
  const std::string full_calib =
      testutil::read_file((fs::path(out) / "calibration.txt").string());
  CHECK(full_calib.find("cost.overhead_cycles = 83.73") != std::string::npos);
  CHECK(full_calib.find("# residual[5]") != std::string::npos);
}

TEST_CASE("ids detect end to end over NDJSON") {
  testutil::TempDir tmp;
  write_stub_bundle(tmp, 1, static_cast<int>(Category::Theft),
                    static_cast<int>(Subcategory::Theft_Keylogging));
  const std::string input = write_feature_csv(tmp, "in.csv", 6, 7);
  const std::string alerts_path = tmp.file("alerts.ndjson");
  const auto res = testutil::run_process(
      {kIds, "--seed", "1", "--fixed-clock", "detect", "--models", tmp.path().string(),
       "--input", input, "--alerts", alerts_path, "--schema", tmp.file("schema.txt")});
  REQUIRE(res.exit_code == 0);
  CHECK(res.err.find("records=6 malformed=0 alerts=6") != std::string::npos);

  std::istringstream lines(testutil::read_file(alerts_path));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto alert = nlohmann::json::parse(line);
    CHECK(alert["subcategory"] == "Theft_Keylogging");
    ++count;
  }
  CHECK(count == 6);
}
