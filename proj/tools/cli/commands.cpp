#include "cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "cli/detect.hpp"
#include "cli/pipeline.hpp"
#include "cli/report.hpp"
#include "edgeids/csv.hpp"
#include "edgeids/errors.hpp"

namespace edgeids::cli {

namespace {

namespace fs = std::filesystem;

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

struct EvalOutcome {
  std::vector<EvalReport> reports; // one per trained model file
  std::vector<std::vector<ClassMetrics>> per_class;
};

EvalOutcome evaluate_directory(const CommandContext& ctx, const PreparedData& data) {
  EvalOutcome outcome;
  for (const Target target : ctx.cfg.targets) {
    const auto truth = data.test.targets(target);
    for (const ModelKind kind : ctx.cfg.families) {
      const fs::path path = fs::path(ctx.out_dir) / model_filename(kind, target);
      if (!fs::exists(path)) continue;
      const ClassifierModel model = load_model(path.string());
      if (kind_of(model) != kind || target_of(model) != target)
        throw ConfigError(path.string() + " does not match its filename");

      std::vector<int> preds(data.test.rows());
      for (std::size_t r = 0; r < data.test.rows(); ++r)
        preds[r] = predict(model, data.test.row(r)).class_id;

      EvalReport report = metrics(confusion(preds, truth, class_count(target)));
      report.model_name = kind_name(kind);
      report.target = target;
      report.model_size_bytes = model_size(model);
      outcome.per_class.push_back(report.per_class);
      outcome.reports.push_back(std::move(report));
    }
  }
  if (outcome.reports.empty())
    throw DataError("no trained models in " + ctx.out_dir + "; run `ids train` first");
  return outcome;
}

} // namespace

int cmd_train(const CommandContext& ctx) {
  ctx.cfg.require_seed();
  ensure_out_dir(ctx.out_dir);
  const PreparedData data = prepare_data(ctx.cfg);

  auto summary = open_out(fs::path(ctx.out_dir) / "train_summary.txt");
  summary << "rows_train = " << data.train.rows() << "\n";
  summary << "rows_test = " << data.test.rows() << "\n";
  summary << "rows_skipped_parse = " << data.load_summary.rows_skipped_parse << "\n";
  summary << "rows_skipped_label = " << data.load_summary.rows_skipped_label << "\n";

  data.stats.save((fs::path(ctx.out_dir) / "norm_stats.txt").string());
  if (!ctx.cfg.csv_path)
    synthetic_schema().save((fs::path(ctx.out_dir) / "schema.txt").string());
  else
    fs::copy_file(*ctx.cfg.schema_path, fs::path(ctx.out_dir) / "schema.txt",
                  fs::copy_options::overwrite_existing);

  for (const Target target : ctx.cfg.targets) {
    const TrainConfig train_cfg = ctx.cfg.train_for(target);
    for (const ModelKind kind : ctx.cfg.families) {
      const ClassifierModel model = train_baseline(kind, data.train, target, train_cfg);
      const std::string name = model_filename(kind, target);
      save_model(model, (fs::path(ctx.out_dir) / name).string());
      summary << name << " = " << model_size(model) << " bytes\n";
      std::cerr << "trained " << name << "\n";
    }
  }
  return 0;
}

int cmd_eval(const CommandContext& ctx) {
  ctx.cfg.require_seed();
  ensure_out_dir(ctx.out_dir);
  const PreparedData data = prepare_data(ctx.cfg);
  const EvalOutcome outcome = evaluate_directory(ctx, data);

  auto eval_csv = open_out(fs::path(ctx.out_dir) / "eval.csv");
  eval_csv << "model,target,macro_precision,macro_recall,macro_f1,accuracy,size_bytes\n";
  auto per_class_csv = open_out(fs::path(ctx.out_dir) / "eval_per_class.csv");
  per_class_csv << "model,target,class,precision,recall,f1\n";

  for (std::size_t i = 0; i < outcome.reports.size(); ++i) {
    const EvalReport& r = outcome.reports[i];
    eval_csv << r.model_name << "," << target_name(r.target) << ","
             << format_number(r.macro.precision) << "," << format_number(r.macro.recall)
             << "," << format_number(r.macro.f1) << "," << format_number(r.accuracy) << ","
             << r.model_size_bytes << "\n";
    for (std::size_t c = 0; c < outcome.per_class[i].size(); ++c) {
      const ClassMetrics& m = outcome.per_class[i][c];
      per_class_csv << r.model_name << "," << target_name(r.target) << "," << c << ","
                    << format_number(m.precision) << "," << format_number(m.recall) << ","
                    << format_number(m.f1) << "\n";
    }
  }
  return 0;
}

int cmd_select(const CommandContext& ctx, const std::optional<std::string>& fixture) {
  ensure_out_dir(ctx.out_dir);
  auto out = open_out(fs::path(ctx.out_dir) / "selection.txt");

  for (const Target target : ctx.cfg.targets) {
    std::vector<EvalReport> reports;
    if (fixture) {
      reports = load_metrics_fixture(*fixture, target);
    } else {
      const fs::path eval_path = fs::path(ctx.out_dir) / "eval.csv";
      if (!fs::exists(eval_path))
        throw DataError("no eval.csv in " + ctx.out_dir + "; run `ids eval` first");
      // eval.csv shares the fixture column layout apart from the header names
      CsvReader reader(eval_path.string());
      std::vector<std::string> cells;
      while (reader.next(cells)) {
        if (cells.size() < 7) continue;
        const auto t = target_from_name(cells[1]);
        if (!t || *t != target) continue;
        EvalReport r;
        r.model_name = cells[0];
        r.target = target;
        r.macro.precision = std::stod(cells[2]);
        r.macro.recall = std::stod(cells[3]);
        r.macro.f1 = std::stod(cells[4]);
        r.model_size_bytes = static_cast<std::uint64_t>(std::stoull(cells[6]));
        reports.push_back(std::move(r));
      }
      if (reports.empty()) continue;
    }
    const Selection sel = select(reports, ctx.cfg.selection);
    out << "[" << target_name(target) << "]\n";
    for (const auto& name : sel.eliminated) out << "eliminated " << name << "\n";
    for (std::size_t i = 0; i < sel.ranked.size(); ++i)
      out << "rank" << (i + 1) << " " << sel.ranked[i] << "\n";
  }
  return 0;
}

int cmd_bench(const CommandContext& ctx) {
  ctx.cfg.require_seed();
  ensure_out_dir(ctx.out_dir);

  // synthetic workload sized for benching; CSV data reuses the test split
  Dataset workload;
  if (ctx.cfg.csv_path) {
    workload = prepare_data(ctx.cfg).test;
  } else {
    RunConfig wl_cfg = ctx.cfg;
    wl_cfg.synth_rows = ctx.cfg.bench_rows;
    SynthSpec spec;
    spec.rows = wl_cfg.synth_rows;
    spec.separation = wl_cfg.synth_separation;
    spec.seed = *ctx.cfg.seed;
    spec.class_weights.fill(1.0 / kSubcategoryCount);
    workload = fit_normalize(synthesize(spec));
  }

  auto csv = open_out(fs::path(ctx.out_dir) / "bench.csv");
  csv << "engine,model,lanes,queue_depth,reuse_factor,packets,wall_seconds,"
         "throughput_pps\n";

  EngineConfig sequential;
  for (const Target target : ctx.cfg.targets) {
    const fs::path path = fs::path(ctx.out_dir) / model_filename(ModelKind::Mlp, target);
    if (!fs::exists(path)) continue;
    const ClassifierModel loaded = load_model(path.string());
    const MlpModel& model = std::get<MlpModel>(loaded);

    const std::array<const EngineConfig*, 2> engines = {&sequential, &ctx.cfg.engine};
    for (const EngineConfig* engine : engines) {
      const BenchResult res =
          bench(*engine, model, workload, ctx.cfg.bench_repetitions, target_name(target));
      csv << engine_kind_name(engine->kind) << "," << res.model_name << "," << engine->lanes
          << "," << engine->queue_depth << "," << engine->reuse_factor << ","
          << res.packets_total << "," << format_number(res.wall_seconds) << ","
          << format_number(res.throughput_pps) << "\n";
      std::cerr << engine_kind_name(engine->kind) << " " << res.model_name << ": "
                << format_number(res.throughput_pps) << " pps\n";
    }
  }
  return 0;
}

int cmd_detect(const CommandContext& ctx, const DetectArgs& args) {
  const ModelBundle bundle = ModelBundle::load(args.models_dir);

  std::string schema_path;
  if (args.schema_path) schema_path = *args.schema_path;
  else if (ctx.cfg.schema_path) schema_path = *ctx.cfg.schema_path;
  else schema_path = (fs::path(args.models_dir) / "schema.txt").string();
  const FeatureSchema schema = FeatureSchema::load(schema_path);

  DetectOptions opts;
  opts.log_benign = args.log_benign;
  opts.fixed_clock = ctx.fixed_clock;

  DetectSummary summary;
  if (args.alerts_path) {
    auto alerts = open_out(*args.alerts_path);
    summary = detect_stream(bundle, schema, args.input_csv, alerts, opts);
  } else {
    summary = detect_stream(bundle, schema, args.input_csv, std::cout, opts);
  }
  write_summary(summary, std::cerr);
  return 0;
}

int cmd_report(const CommandContext& ctx) {
  ensure_out_dir(ctx.out_dir);
  const ReportBundle bundle = collect_bundle(ctx.out_dir, ctx.cfg);
  write_report(bundle, ctx.out_dir, ctx.fixtures_dir);
  return 0;
}

int cmd_cost(const CommandContext& ctx, const CostArgs& args) {
  ensure_out_dir(ctx.out_dir);
  const std::vector<std::pair<std::string, std::vector<int>>> models = {
      {"attack", {24, 32, 64, 2}},
      {"category", {24, 32, 64, 4}},
      {"subcategory", {24, 32, 64, 7}},
  };

  if (args.calibrate_csv) {
    const auto observations = load_observations(*args.calibrate_csv);
    std::vector<CostConstant> free;
    for (const auto& name : args.free_constants) {
      const auto c = cost_constant_from_name(name);
      if (!c) throw ConfigError("unknown cost constant `" + name + "`");
      free.push_back(*c);
    }
    if (free.empty())
      free = {CostConstant::LutPerMac, CostConstant::LutFixed, CostConstant::OverheadCycles};
    const CalibrationResult fit = calibrate(observations, free, ctx.cfg.cost);

    auto out = open_out(fs::path(ctx.out_dir) / "calibration.txt");
    // emitted as config keys so the result can be pasted into a run config
    out << "cost.f_clk_hz = " << format_number(fit.constants.f_clk_hz) << "\n";
    out << "cost.dsp_per_mac = " << format_number(fit.constants.dsp_per_mac) << "\n";
    out << "cost.lut_per_mac = " << format_number(fit.constants.lut_per_mac) << "\n";
    out << "cost.lut_per_softmax_class = "
        << format_number(fit.constants.lut_per_softmax_class) << "\n";
    out << "cost.lut_fixed = " << format_number(fit.constants.lut_fixed) << "\n";
    out << "cost.overhead_cycles = " << format_number(fit.constants.overhead_cycles) << "\n";
    for (std::size_t i = 0; i < fit.residuals.size(); ++i)
      out << "# residual[" << i << "] = " << format_number(fit.residuals[i]) << "\n";
    std::cerr << "calibration written to " << ctx.out_dir << "/calibration.txt\n";
    return 0;
  }

  const int max_rf = args.sweep_max_rf.value_or(args.single_rf ? 0 : 64);
  auto csv = open_out(fs::path(ctx.out_dir) / "cost.csv");
  csv << "model,reuse_factor,macs_total,units_total,ii_cycles,throughput_pps,dsp,lut,"
         "bram_bits\n";
  auto emit = [&](const std::string& name, const std::vector<int>& layers, int rf) {
    const CostEstimate est = estimate(layers, rf, ctx.cfg.cost);
    std::int64_t macs = 0, units = 0;
    for (const auto m : est.per_layer_macs) macs += m;
    for (const auto u : est.compute_units) units += u;
    csv << name << "," << rf << "," << macs << "," << units << ","
        << format_number(est.ii_cycles) << "," << format_number(est.throughput_pps) << ","
        << est.dsp << "," << est.lut << "," << est.bram_bits << "\n";
  };
  for (const auto& [name, layers] : models) {
    if (args.single_rf) emit(name, layers, *args.single_rf);
    for (int rf = 1; rf <= max_rf; ++rf) emit(name, layers, rf);
  }
  return 0;
}

} // namespace edgeids::cli
