#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cli/run_config.hpp"

namespace edgeids::cli {

/// One row of the metrics table. Cells are pre-rendered strings so the
/// markdown and CSV outputs carry identical values, and fixture rows stay
/// byte-for-byte as shipped.
struct MetricsRow {
  std::string source; // trained | published
  std::string algorithm;
  std::string target;
  std::string precision, recall, f1, size_bytes;
};

struct PerfRow {
  std::string source; // measured | modeled | published
  std::string engine;
  std::string model;
  std::string throughput_pps;
  std::string efficiency_pps_per_w; // empty when power is not supplied
  std::string density_pps_per_lut;  // empty when LUTs are not supplied
};

struct ReportBundle {
  std::vector<MetricsRow> metrics; // trained rows from eval.csv
  std::vector<PerfRow> perf;       // measured rows from bench.csv
  bool has_eval = false;
  bool has_bench = false;
  bool has_cost = false;
  std::vector<PerfRow> modeled; // cost-model rows
};

/// Collects eval.csv / bench.csv / cost.csv from the output directory
/// (absent files simply drop their section).
ReportBundle collect_bundle(const std::string& out_dir, const RunConfig& cfg);

/// Renders report.md plus CSV siblings (report_metrics.csv,
/// report_perf.csv) into the output directory. Fixture files are appended
/// as `published` rows verbatim. Throws DataError("nothing to report") when
/// the bundle carries no section at all.
void write_report(const ReportBundle& bundle, const std::string& out_dir,
                  const std::string& fixtures_dir);

} // namespace edgeids::cli
