#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace edgeids {

/// First-order dataflow-processor cost model constants. The LUT and cycle
/// constants default to values fitted against the shipped observation file
/// (data/dfp_observations.csv); dsp_per_mac is a plain placeholder for a
/// 32-bit float multiply-accumulate unit. Calibrate against your own
/// platform numbers via calibrate().
struct CostConstants {
  double f_clk_hz = 100e6;
  double dsp_per_mac = 5.0;
  double lut_per_mac = 28.09375;
  double lut_per_softmax_class = 0.0;
  double lut_fixed = 26837.0;
  double overhead_cycles = 81.7000105411;

  void validate() const; // throws ConfigError on negative values
};

struct CostEstimate {
  std::vector<std::int64_t> per_layer_macs;
  std::vector<std::int64_t> compute_units;
  double ii_cycles = 0.0;
  double throughput_pps = 0.0;
  std::int64_t dsp = 0;
  std::int64_t lut = 0;
  std::int64_t bram_bits = 0;
};

/// macs[l] = in_l * out_l for each consecutive layer pair.
std::vector<std::int64_t> mac_count(std::span<const int> layer_sizes);

std::size_t dense_parameter_count(std::span<const int> layer_sizes);

/// compute_units[l] = ceil(macs[l] / reuse_factor);
/// dsp = dsp_per_mac * sum(units); lut = lut_per_mac * sum(units)
///       + lut_per_softmax_class * output classes + lut_fixed;
/// bram_bits = 32 * parameter count (all weights resident).
CostEstimate resource_estimate(std::span<const int> layer_sizes, int reuse_factor,
                               const CostConstants& consts);

/// ii = max(reuse_factor over the dense stages, 1 for the unrolled softmax)
/// + overhead_cycles; throughput = f_clk / ii.
struct LatencyEstimate {
  double ii_cycles = 0.0;
  double throughput_pps = 0.0;
};
LatencyEstimate latency_model(std::span<const int> layer_sizes, int reuse_factor,
                              const CostConstants& consts);

/// resource_estimate + latency_model in one record.
CostEstimate estimate(std::span<const int> layer_sizes, int reuse_factor,
                      const CostConstants& consts);

double energy_efficiency(double throughput_pps, double power_watts); // pps/W
double logic_density(double throughput_pps, double lut_count);       // pps/LUT

/// One measured design point; absent fields contribute no equations.
struct CostObservation {
  std::string name;
  std::vector<int> layer_sizes;
  int reuse_factor = 4;
  std::optional<double> lut;
  std::optional<double> dsp;
  std::optional<double> throughput_pps;
};

enum class CostConstant {
  DspPerMac,
  LutPerMac,
  LutPerSoftmaxClass,
  LutFixed,
  OverheadCycles,
};

std::optional<CostConstant> cost_constant_from_name(std::string_view name);
const std::string& cost_constant_name(CostConstant c);

struct CalibrationResult {
  CostConstants constants;
  /// Signed residual (model - observed) per equation, observation order:
  /// lut, dsp, throughput-derived-cycles for each observation that has them.
  std::vector<double> residuals;
};

/// Least-squares fit of the chosen free constants against the observations
/// (minimum-norm solution when the system is rank deficient). Throughput
/// observations enter in the cycle domain, where the model is linear.
/// Throws ConfigError when there are fewer equations than free constants.
CalibrationResult calibrate(std::span<const CostObservation> observations,
                            std::span<const CostConstant> free_constants,
                            const CostConstants& base);

/// Observation file: CSV `model,reuse_factor,lut,dsp,throughput_pps` with
/// empty cells for unmeasured fields; `model` is attack/category/subcategory
/// or K=<n> for a custom output width.
std::vector<CostObservation> load_observations(const std::string& path);

} // namespace edgeids
