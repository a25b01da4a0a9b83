#pragma once

#include <string>

#include "cli/run_config.hpp"

namespace edgeids::cli {

/// Normalized train/test split derived deterministically from the config:
/// CSV (when configured) or the synthetic generator, min-max fit on the
/// train part, stats applied to the test part.
struct PreparedData {
  Dataset train;
  Dataset test;
  NormStats stats;
  LoadSummary load_summary; // zeros for synthetic data
};

PreparedData prepare_data(const RunConfig& cfg);

/// Model files are named <family>_<target>.iids inside the output directory.
std::string model_filename(ModelKind kind, Target target);

/// Formats a double with enough digits to round-trip printed reports
/// consistently between markdown and CSV.
std::string format_number(double v);

} // namespace edgeids::cli
