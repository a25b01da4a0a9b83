#include "edgeids/eval.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "edgeids/csv.hpp"
#include "edgeids/errors.hpp"
#include "edgeids/kvfile.hpp"

namespace edgeids {

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> truth, int k) {
  if (preds.size() != truth.size())
    throw DataError("confusion: prediction/truth length mismatch");
  if (k <= 0) throw DataError("confusion: class count must be positive");
  ConfusionMatrix cm(k);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int t = truth[i];
    const int p = preds[i];
    if (t < 0 || t >= k || p < 0 || p >= k)
      throw DataError("confusion: class id out of range at sample " + std::to_string(i));
    ++cm.at(t, p);
  }
  return cm;
}

EvalReport metrics(const ConfusionMatrix& cm) {
  EvalReport report;
  report.per_class.resize(cm.k);

  std::uint64_t diagonal = 0;
  for (int c = 0; c < cm.k; ++c) {
    std::uint64_t tp = cm.at(c, c);
    std::uint64_t fp = 0, fn = 0;
    for (int other = 0; other < cm.k; ++other) {
      if (other == c) continue;
      fp += cm.at(other, c);
      fn += cm.at(c, other);
    }
    diagonal += tp;

    ClassMetrics& m = report.per_class[c];
    m.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = (m.precision + m.recall > 0.0)
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;

    report.macro.precision += m.precision;
    report.macro.recall += m.recall;
    report.macro.f1 += m.f1;
  }
  if (cm.k > 0) {
    report.macro.precision /= cm.k;
    report.macro.recall /= cm.k;
    report.macro.f1 /= cm.k;
  }
  const std::uint64_t total = cm.total();
  report.accuracy = total ? static_cast<double>(diagonal) / static_cast<double>(total) : 0.0;
  return report;
}

Selection select(std::span<const EvalReport> reports, const SelectionRule& rule) {
  if (reports.empty()) throw DataError("select: no reports");
  for (const auto& r : reports)
    if (r.target != reports.front().target)
      throw DataError("select: reports mix targets");

  Selection out;
  std::vector<const EvalReport*> survivors;
  for (const auto& r : reports) {
    if (r.macro.f1 < rule.f1_floor)
      out.eliminated.push_back(r.model_name);
    else
      survivors.push_back(&r);
  }
  std::sort(survivors.begin(), survivors.end(), [](const EvalReport* a, const EvalReport* b) {
    if (a->macro.f1 != b->macro.f1) return a->macro.f1 > b->macro.f1;
    if (a->model_size_bytes != b->model_size_bytes)
      return a->model_size_bytes < b->model_size_bytes;
    return a->model_name < b->model_name;
  });
  for (const auto* r : survivors) out.ranked.push_back(r->model_name);
  return out;
}

std::vector<EvalReport> load_metrics_fixture(const std::string& path, Target target) {
  CsvReader reader(path);
  const auto& header = reader.header();
  auto col = [&](const char* name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (to_lower(trim(header[i])) == name) return i;
    throw DataError("metrics fixture missing column `" + std::string(name) + "`");
  };
  const std::size_t c_alg = col("algorithm");
  const std::size_t c_target = col("target");
  const std::size_t c_p = col("precision");
  const std::size_t c_r = col("recall");
  const std::size_t c_f1 = col("f1");
  const std::size_t c_size = col("size_bytes");

  auto num = [](const std::string& cell) {
    const std::string s = trim(cell);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw DataError("bad numeric cell `" + s + "` in metrics fixture");
    return v;
  };

  std::vector<EvalReport> reports;
  std::vector<std::string> cells;
  while (reader.next(cells)) {
    if (cells.size() < header.size()) continue;
    const auto t = target_from_name(trim(cells[c_target]));
    if (!t) throw DataError("bad target `" + cells[c_target] + "` in metrics fixture");
    if (*t != target) continue;
    EvalReport r;
    r.model_name = to_lower(trim(cells[c_alg]));
    r.target = target;
    r.macro.precision = num(cells[c_p]);
    r.macro.recall = num(cells[c_r]);
    r.macro.f1 = num(cells[c_f1]);
    r.model_size_bytes = static_cast<std::uint64_t>(num(cells[c_size]));
    reports.push_back(std::move(r));
  }
  if (reports.empty())
    throw DataError("no rows for target " + target_name(target) + " in " + path);
  return reports;
}

} // namespace edgeids
