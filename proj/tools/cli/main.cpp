#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "edgeids/errors.hpp"

using namespace edgeids;
using namespace edgeids::cli;

int main(int argc, char** argv) {
  CLI::App app{"Intelligent IDS workbench: train flow classifiers, evaluate and "
               "select them, benchmark the inference engines and project FPGA costs"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  CommandContext ctx;
  app.add_option("--config", config_path, "run configuration file (section.key = value)");
  app.add_option("--seed", seed, "seed override (mandatory here or in the config)");
  app.add_option("--out", ctx.out_dir, "output directory")->capture_default_str();
  app.add_option("--fixtures", ctx.fixtures_dir, "directory with the shipped fixture CSVs")
      ->capture_default_str();
  app.add_flag("--fixed-clock", ctx.fixed_clock, "freeze timestamps (golden-file tests)");

  auto* train = app.add_subcommand("train", "train the configured model families");
  auto* eval = app.add_subcommand("eval", "evaluate trained models on the held-out split");

  std::optional<std::string> select_fixture;
  auto* sel = app.add_subcommand("select", "apply the F1-floor/size selection rule");
  sel->add_option("--fixture", select_fixture,
                  "rank a published metrics fixture instead of eval.csv");

  auto* bench_cmd = app.add_subcommand("bench", "measure engine throughput");

  DetectArgs detect_args;
  auto* detect = app.add_subcommand("detect", "classify a flow CSV and emit NDJSON alerts");
  detect->add_option("--models", detect_args.models_dir, "directory with mlp_*.iids")
      ->required();
  detect->add_option("--input", detect_args.input_csv, "flow records CSV")->required();
  detect->add_option("--alerts", detect_args.alerts_path, "alert sink (default stdout)");
  detect->add_option("--schema", detect_args.schema_path, "schema mapping file");
  detect->add_flag("--log-benign", detect_args.log_benign, "also log benign records");

  auto* report = app.add_subcommand("report", "render markdown + CSV comparison tables");

  CostArgs cost_args;
  auto* cost = app.add_subcommand("cost", "cost-model sweeps and calibration");
  cost->add_option("--sweep-max-rf", cost_args.sweep_max_rf, "sweep reuse factors 1..N");
  cost->add_option("--rf", cost_args.single_rf, "estimate a single reuse factor");
  cost->add_option("--calibrate", cost_args.calibrate_csv, "observation CSV to fit against");
  cost->add_option("--free", cost_args.free_constants, "constants the fit may move")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (!config_path.empty()) ctx.cfg = RunConfig::load(config_path);
    if (seed) ctx.cfg.seed = seed;

    if (*train) return cmd_train(ctx);
    if (*eval) return cmd_eval(ctx);
    if (*sel) return cmd_select(ctx, select_fixture);
    if (*bench_cmd) return cmd_bench(ctx);
    if (*detect) return cmd_detect(ctx, detect_args);
    if (*report) return cmd_report(ctx);
    if (*cost) return cmd_cost(ctx, cost_args);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TrainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) { // ConfigError, FormatError
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
