#include "cli/report.hpp"

#include <filesystem>
#include <fstream>

#include "cli/pipeline.hpp"
#include "edgeids/csv.hpp"
#include "edgeids/errors.hpp"
#include "edgeids/kvfile.hpp"

namespace edgeids::cli {

namespace {

namespace fs = std::filesystem;

std::optional<std::vector<std::vector<std::string>>> read_table(const std::string& path,
                                                                std::vector<std::string>& header) {
  if (!fs::exists(path)) return std::nullopt;
  CsvReader reader(path);
  header = reader.header();
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> cells;
  while (reader.next(cells)) {
    if (cells.size() < header.size()) continue;
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name,
                   const std::string& path) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (to_lower(trim(header[i])) == name) return i;
  throw DataError(path + " is missing column `" + name + "`");
}

void write_markdown_table(std::ostream& out, const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
  out << "|";
  for (const auto& h : header) out << " " << h << " |";
  out << "\n|";
  for (std::size_t i = 0; i < header.size(); ++i) out << " --- |";
  out << "\n";
  for (const auto& row : rows) {
    out << "|";
    for (const auto& cell : row) out << " " << cell << " |";
    out << "\n";
  }
}

void write_csv_table(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

const char* kFlexibilityNarrative =
    "The two execution targets absorb change very differently. The dataflow\n"
    "processor accepts float, fixed-point and integer arithmetic because every\n"
    "design is resynthesized from scratch, but that same property makes change\n"
    "expensive: a topology update means generating and deploying a new hardware\n"
    "design, trained parameters can only be swapped when the design ships an\n"
    "external weight-loading mechanism, and the update turnaround is dominated\n"
    "by synthesis and reconfiguration.\n"
    "\n"
    "The soft-core processor has a fixed datapath, so precision is limited to\n"
    "float plus the integer widths the core implements (INT8/16/32 here) and\n"
    "fixed-point is out. In exchange, both the model topology and its trained\n"
    "parameters update with an ordinary recompile-and-reload cycle, which keeps\n"
    "the turnaround short. High-churn deployments favor the soft core; stable,\n"
    "throughput-bound deployments favor the dataflow design.\n";

} // namespace

ReportBundle collect_bundle(const std::string& out_dir, const RunConfig& cfg) {
  ReportBundle bundle;
  std::vector<std::string> header;

  if (const auto rows = read_table((fs::path(out_dir) / "eval.csv").string(), header)) {
    const std::string path = (fs::path(out_dir) / "eval.csv").string();
    const auto c_model = column(header, "model", path);
    const auto c_target = column(header, "target", path);
    const auto c_p = column(header, "macro_precision", path);
    const auto c_r = column(header, "macro_recall", path);
    const auto c_f1 = column(header, "macro_f1", path);
    const auto c_size = column(header, "size_bytes", path);
    for (const auto& row : *rows)
      bundle.metrics.push_back(MetricsRow{"trained", row[c_model], row[c_target], row[c_p],
                                          row[c_r], row[c_f1], row[c_size]});
    bundle.has_eval = true;
  }

  if (const auto rows = read_table((fs::path(out_dir) / "bench.csv").string(), header)) {
    const std::string path = (fs::path(out_dir) / "bench.csv").string();
    const auto c_engine = column(header, "engine", path);
    const auto c_model = column(header, "model", path);
    const auto c_pps = column(header, "throughput_pps", path);
    for (const auto& row : *rows) {
      PerfRow perf{"measured", row[c_engine], row[c_model], row[c_pps], "", ""};
      const double pps = std::stod(row[c_pps]);
      if (const auto it = cfg.power_watts.find(row[c_engine]); it != cfg.power_watts.end())
        perf.efficiency_pps_per_w = format_number(energy_efficiency(pps, it->second));
      if (const auto it = cfg.lut_counts.find(row[c_engine]); it != cfg.lut_counts.end())
        perf.density_pps_per_lut = format_number(logic_density(pps, it->second));
      bundle.perf.push_back(std::move(perf));
      bundle.has_bench = true;
    }
  }

  // modeled rows come straight from the configured cost constants
  for (const Target t : {Target::Attack, Target::Category, Target::Subcategory}) {
    const std::vector<int> layers = {24, 32, 64, class_count(t)};
    const CostEstimate est = estimate(layers, cfg.engine.reuse_factor, cfg.cost);
    PerfRow row{"modeled", "dfp", target_name(t), format_number(est.throughput_pps), "", ""};
    if (const auto it = cfg.power_watts.find("dfp"); it != cfg.power_watts.end())
      row.efficiency_pps_per_w =
          format_number(energy_efficiency(est.throughput_pps, it->second));
    row.density_pps_per_lut =
        format_number(logic_density(est.throughput_pps, static_cast<double>(est.lut)));
    bundle.modeled.push_back(std::move(row));
  }

  bundle.has_cost = fs::exists(fs::path(out_dir) / "cost.csv");
  return bundle;
}

void write_report(const ReportBundle& bundle, const std::string& out_dir,
                  const std::string& fixtures_dir) {
  if (!bundle.has_eval && !bundle.has_bench && !bundle.has_cost)
    throw DataError("nothing to report: run eval, bench or cost first");

  const std::vector<std::string> metrics_header = {
      "source", "algorithm", "target", "precision", "recall", "f1", "size_bytes"};
  const std::vector<std::string> perf_header = {
      "source",         "engine",           "model",
      "throughput_pps", "efficiency_pps_per_w", "density_pps_per_lut"};

  std::vector<std::vector<std::string>> metrics_rows;
  for (const auto& m : bundle.metrics)
    metrics_rows.push_back(
        {m.source, m.algorithm, m.target, m.precision, m.recall, m.f1, m.size_bytes});

  // published rows ship verbatim from the fixture files
  std::vector<std::string> header;
  if (const auto rows =
          read_table((fs::path(fixtures_dir) / "table2_fixture.csv").string(), header)) {
    for (const auto& row : *rows) {
      std::vector<std::string> cells = {"published"};
      cells.insert(cells.end(), row.begin(), row.end());
      metrics_rows.push_back(std::move(cells));
    }
  }

  std::vector<std::vector<std::string>> perf_rows;
  for (const auto& p : bundle.perf)
    perf_rows.push_back({p.source, p.engine, p.model, p.throughput_pps,
                         p.efficiency_pps_per_w, p.density_pps_per_lut});
  for (const auto& p : bundle.modeled)
    perf_rows.push_back({p.source, p.engine, p.model, p.throughput_pps,
                         p.efficiency_pps_per_w, p.density_pps_per_lut});
  if (const auto rows =
          read_table((fs::path(fixtures_dir) / "table3_fixture.csv").string(), header)) {
    for (const auto& row : *rows) {
      std::vector<std::string> cells = {"published"};
      cells.insert(cells.end(), row.begin(), row.end());
      perf_rows.push_back(std::move(cells));
    }
  }

  std::ofstream md((fs::path(out_dir) / "report.md").string());
  if (!md) throw DataError("cannot write report.md");
  md << "# Edge IDS report\n";

  if (bundle.has_eval || !metrics_rows.empty()) {
    md << "\n## Model quality vs size\n\n";
    if (bundle.has_eval)
      md << "Trained rows are macro-averaged over the held-out split; published"
            " rows restate the reference results shipped in the fixtures.\n\n";
    write_markdown_table(md, metrics_header, metrics_rows);
    write_csv_table((fs::path(out_dir) / "report_metrics.csv").string(), metrics_header,
                    metrics_rows);
  }

  if (bundle.has_bench) {
    md << "\n## Throughput, energy efficiency, logic density\n\n";
    md << "Measured rows come from this machine; efficiency and density use the"
          " configured power and LUT figures when present. Modeled rows apply"
          " the configured cost constants at the configured reuse factor.\n\n";
    write_markdown_table(md, perf_header, perf_rows);
    write_csv_table((fs::path(out_dir) / "report_perf.csv").string(), perf_header, perf_rows);
  }

  if (bundle.has_cost) {
    std::vector<std::string> cost_header;
    if (const auto rows =
            read_table((fs::path(out_dir) / "cost.csv").string(), cost_header)) {
      md << "\n## Cost-model sweep\n\n";
      write_markdown_table(md, cost_header, *rows);
    }
  }

  if (const auto rows =
          read_table((fs::path(fixtures_dir) / "table5_fixture.csv").string(), header)) {
    md << "\n## Published per-model FPGA figures\n\n";
    write_markdown_table(md, header, *rows);
  }

  md << "\n## Flexibility\n\n" << kFlexibilityNarrative;
}

} // namespace edgeids::cli
