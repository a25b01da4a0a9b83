#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edgeids/labels.hpp"

namespace edgeids {

/// counts[truth][predicted], k x k.
struct ConfusionMatrix {
  int k = 0;
  std::vector<std::uint64_t> counts;

  explicit ConfusionMatrix(int classes = 0)
      : k(classes), counts(static_cast<std::size_t>(classes) * classes, 0) {}

  std::uint64_t& at(int truth, int pred) { return counts[truth * k + pred]; }
  std::uint64_t at(int truth, int pred) const { return counts[truth * k + pred]; }
  std::uint64_t total() const;
};

ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> truth, int k);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Precision, recall, F1 per class plus their unweighted (macro) means.
/// Divisions by zero yield 0 so degenerate matrices stay NaN-free.
struct EvalReport {
  std::vector<ClassMetrics> per_class;
  ClassMetrics macro;
  double accuracy = 0.0;
  std::uint64_t model_size_bytes = 0;
  std::string model_name;
  Target target = Target::Attack;
};

EvalReport metrics(const ConfusionMatrix& cm);

/// Keeps models whose macro F1 reaches the floor and ranks the survivors by
/// F1 (descending), then size (ascending), then name.
struct SelectionRule {
  double f1_floor = 0.90;
};

struct Selection {
  std::vector<std::string> eliminated; // input order
  std::vector<std::string> ranked;
};

Selection select(std::span<const EvalReport> reports, const SelectionRule& rule);

/// Published-results fixture: CSV `algorithm,target,precision,recall,f1,
/// size_bytes`. Returns the rows for one target as selection-ready reports
/// (macro metrics only).
std::vector<EvalReport> load_metrics_fixture(const std::string& path, Target target);

} // namespace edgeids
