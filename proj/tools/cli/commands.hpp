#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cli/run_config.hpp"

namespace edgeids::cli {

/// Everything a subcommand needs; assembled in main() from global flags.
struct CommandContext {
  RunConfig cfg;
  std::string out_dir = "out";
  std::string fixtures_dir = "data";
  bool fixed_clock = false;
};

struct DetectArgs {
  std::string models_dir;
  std::string input_csv;
  std::optional<std::string> alerts_path; // stdout when unset
  std::optional<std::string> schema_path; // overrides config/models dir
  bool log_benign = false;
};

struct CostArgs {
  std::optional<int> sweep_max_rf;
  std::optional<int> single_rf;
  std::optional<std::string> calibrate_csv;
  std::vector<std::string> free_constants;
};

int cmd_train(const CommandContext& ctx);
int cmd_eval(const CommandContext& ctx);
int cmd_select(const CommandContext& ctx, const std::optional<std::string>& fixture);
int cmd_bench(const CommandContext& ctx);
int cmd_detect(const CommandContext& ctx, const DetectArgs& args);
int cmd_report(const CommandContext& ctx);
int cmd_cost(const CommandContext& ctx, const CostArgs& args);

} // namespace edgeids::cli
