#include "edgeids/costmodel.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include <Eigen/Dense>

#include "edgeids/csv.hpp"
#include "edgeids/errors.hpp"
#include "edgeids/kvfile.hpp"
#include "edgeids/labels.hpp"

namespace edgeids {

void CostConstants::validate() const {
  if (!(f_clk_hz > 0.0))
    throw ConfigError("f_clk_hz must be positive");
  if (dsp_per_mac < 0.0 || lut_per_mac < 0.0 || lut_per_softmax_class < 0.0 ||
      lut_fixed < 0.0 || overhead_cycles < 0.0)
    throw ConfigError("cost constants must be non-negative");
}

std::vector<std::int64_t> mac_count(std::span<const int> layer_sizes) {
  if (layer_sizes.size() < 2) throw ConfigError("topology needs at least two layers");
  for (const int s : layer_sizes)
    if (s < 1) throw ConfigError("layer sizes must be positive");
  std::vector<std::int64_t> macs;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
    macs.push_back(static_cast<std::int64_t>(layer_sizes[l]) * layer_sizes[l + 1]);
  return macs;
}

std::size_t dense_parameter_count(std::span<const int> layer_sizes) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
    n += static_cast<std::size_t>(layer_sizes[l]) * layer_sizes[l + 1] + layer_sizes[l + 1];
  return n;
}

CostEstimate resource_estimate(std::span<const int> layer_sizes, int reuse_factor,
                               const CostConstants& consts) {
  if (reuse_factor < 1) throw ConfigError("reuse_factor must be >= 1");
  consts.validate();

  CostEstimate est;
  est.per_layer_macs = mac_count(layer_sizes);
  std::int64_t units_total = 0;
  for (const auto macs : est.per_layer_macs) {
    const std::int64_t units = (macs + reuse_factor - 1) / reuse_factor;
    est.compute_units.push_back(units);
    units_total += units;
  }
  const int classes = layer_sizes.back();
  est.dsp = std::llround(consts.dsp_per_mac * static_cast<double>(units_total));
  est.lut = std::llround(consts.lut_per_mac * static_cast<double>(units_total) +
                         consts.lut_per_softmax_class * classes + consts.lut_fixed);
  est.bram_bits = static_cast<std::int64_t>(32 * dense_parameter_count(layer_sizes));
  return est;
}

LatencyEstimate latency_model(std::span<const int> layer_sizes, int reuse_factor,
                              const CostConstants& consts) {
  if (reuse_factor < 1) throw ConfigError("reuse_factor must be >= 1");
  consts.validate();
  mac_count(layer_sizes); // validates the topology
  LatencyEstimate lat;
  // dense stages stream one MAC per unit per cycle; the softmax stage is
  // fully unrolled and pipelines at one cycle
  lat.ii_cycles = static_cast<double>(std::max(reuse_factor, 1)) + consts.overhead_cycles;
  lat.throughput_pps = consts.f_clk_hz / lat.ii_cycles;
  return lat;
}

CostEstimate estimate(std::span<const int> layer_sizes, int reuse_factor,
                      const CostConstants& consts) {
  CostEstimate est = resource_estimate(layer_sizes, reuse_factor, consts);
  const LatencyEstimate lat = latency_model(layer_sizes, reuse_factor, consts);
  est.ii_cycles = lat.ii_cycles;
  est.throughput_pps = lat.throughput_pps;
  return est;
}

double energy_efficiency(double throughput_pps, double power_watts) {
  if (!(power_watts > 0.0)) throw ConfigError("power must be positive");
  return throughput_pps / power_watts;
}

double logic_density(double throughput_pps, double lut_count) {
  if (!(lut_count > 0.0)) throw ConfigError("LUT count must be positive");
  return throughput_pps / lut_count;
}

namespace {

const std::array<std::pair<std::string, CostConstant>, 5> kConstantNames = {{
    {"dsp_per_mac", CostConstant::DspPerMac},
    {"lut_per_mac", CostConstant::LutPerMac},
    {"lut_per_softmax_class", CostConstant::LutPerSoftmaxClass},
    {"lut_fixed", CostConstant::LutFixed},
    {"overhead_cycles", CostConstant::OverheadCycles},
}};

double constant_value(const CostConstants& c, CostConstant which) {
  switch (which) {
    case CostConstant::DspPerMac: return c.dsp_per_mac;
    case CostConstant::LutPerMac: return c.lut_per_mac;
    case CostConstant::LutPerSoftmaxClass: return c.lut_per_softmax_class;
    case CostConstant::LutFixed: return c.lut_fixed;
    case CostConstant::OverheadCycles: return c.overhead_cycles;
  }
  return 0.0;
}

void set_constant(CostConstants& c, CostConstant which, double v) {
  switch (which) {
    case CostConstant::DspPerMac: c.dsp_per_mac = v; break;
    case CostConstant::LutPerMac: c.lut_per_mac = v; break;
    case CostConstant::LutPerSoftmaxClass: c.lut_per_softmax_class = v; break;
    case CostConstant::LutFixed: c.lut_fixed = v; break;
    case CostConstant::OverheadCycles: c.overhead_cycles = v; break;
  }
}

} // namespace

std::optional<CostConstant> cost_constant_from_name(std::string_view name) {
  const std::string n = to_lower(name);
  for (const auto& [label, c] : kConstantNames)
    if (n == label) return c;
  return std::nullopt;
}

const std::string& cost_constant_name(CostConstant c) {
  return kConstantNames[static_cast<int>(c)].first;
}

CalibrationResult calibrate(std::span<const CostObservation> observations,
                            std::span<const CostConstant> free_constants,
                            const CostConstants& base) {
  base.validate();
  if (free_constants.empty()) throw ConfigError("calibrate: no free constants");

  // Every equation is linear in the constants:
  //   lut: lut_per_mac * units + lut_per_softmax_class * K + lut_fixed = lut_obs
  //   dsp: dsp_per_mac * units = dsp_obs
  //   cycles: overhead_cycles = f_clk / throughput_obs - max(RF, 1)
  struct Equation {
    std::array<double, 5> coeff{}; // indexed by CostConstant
    double rhs = 0.0;
  };
  std::vector<Equation> equations;
  for (const auto& obs : observations) {
    const auto macs = mac_count(obs.layer_sizes);
    if (obs.reuse_factor < 1) throw ConfigError("observation reuse_factor must be >= 1");
    double units = 0.0;
    for (const auto m : macs)
      units += static_cast<double>((m + obs.reuse_factor - 1) / obs.reuse_factor);
    const double classes = obs.layer_sizes.back();

    if (obs.lut) {
      Equation eq;
      eq.coeff[static_cast<int>(CostConstant::LutPerMac)] = units;
      eq.coeff[static_cast<int>(CostConstant::LutPerSoftmaxClass)] = classes;
      eq.coeff[static_cast<int>(CostConstant::LutFixed)] = 1.0;
      eq.rhs = *obs.lut;
      equations.push_back(eq);
    }
    if (obs.dsp) {
      Equation eq;
      eq.coeff[static_cast<int>(CostConstant::DspPerMac)] = units;
      eq.rhs = *obs.dsp;
      equations.push_back(eq);
    }
    if (obs.throughput_pps) {
      if (!(*obs.throughput_pps > 0.0))
        throw ConfigError("observed throughput must be positive");
      Equation eq;
      eq.coeff[static_cast<int>(CostConstant::OverheadCycles)] = 1.0;
      eq.rhs = base.f_clk_hz / *obs.throughput_pps -
               static_cast<double>(std::max(obs.reuse_factor, 1));
      equations.push_back(eq);
    }
  }

  if (equations.size() < free_constants.size())
    throw ConfigError("calibrate: underdetermined system (" +
                      std::to_string(equations.size()) + " equations for " +
                      std::to_string(free_constants.size()) + " free constants)");

  std::array<bool, 5> is_free{};
  for (const auto c : free_constants) is_free[static_cast<int>(c)] = true;

  Eigen::MatrixXd a(static_cast<Eigen::Index>(equations.size()),
                    static_cast<Eigen::Index>(free_constants.size()));
  Eigen::VectorXd b(static_cast<Eigen::Index>(equations.size()));
  for (std::size_t r = 0; r < equations.size(); ++r) {
    double rhs = equations[r].rhs;
    for (int c = 0; c < 5; ++c)
      if (!is_free[c]) rhs -= equations[r].coeff[c] * constant_value(base, static_cast<CostConstant>(c));
    b(static_cast<Eigen::Index>(r)) = rhs;
    for (std::size_t c = 0; c < free_constants.size(); ++c)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          equations[r].coeff[static_cast<int>(free_constants[c])];
  }

  // minimum-norm least squares; tolerates the rank-deficient fits that
  // aliased constants (compute units vs. softmax width) produce
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const Eigen::VectorXd x = cod.solve(b);

  CalibrationResult result;
  result.constants = base;
  for (std::size_t c = 0; c < free_constants.size(); ++c)
    set_constant(result.constants, free_constants[c], x(static_cast<Eigen::Index>(c)));

  const Eigen::VectorXd fitted = a * x;
  result.residuals.resize(equations.size());
  for (std::size_t r = 0; r < equations.size(); ++r)
    result.residuals[r] = fitted(static_cast<Eigen::Index>(r)) - b(static_cast<Eigen::Index>(r));
  return result;
}

std::vector<CostObservation> load_observations(const std::string& path) {
  CsvReader reader(path);
  const auto& header = reader.header();
  auto col = [&](const char* name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (to_lower(trim(header[i])) == name) return i;
    throw DataError("observation file missing column `" + std::string(name) + "`");
  };
  const std::size_t c_model = col("model");
  const std::size_t c_rf = col("reuse_factor");
  const std::size_t c_lut = col("lut");
  const std::size_t c_dsp = col("dsp");
  const std::size_t c_pps = col("throughput_pps");

  auto parse_opt = [](const std::string& cell) -> std::optional<double> {
    const std::string s = trim(cell);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw DataError("bad numeric cell `" + s + "` in observation file");
    return v;
  };

  std::vector<CostObservation> observations;
  std::vector<std::string> cells;
  while (reader.next(cells)) {
    if (cells.size() < header.size()) continue;
    CostObservation obs;
    obs.name = trim(cells[c_model]);
    if (const auto t = target_from_name(obs.name)) {
      obs.layer_sizes = {24, 32, 64, class_count(*t)};
    } else if (to_lower(obs.name).starts_with("k=")) {
      int k = 0;
      const std::string tail = obs.name.substr(2);
      const auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), k);
      if (ec != std::errc() || k < 1)
        throw DataError("bad model spec `" + obs.name + "` in observation file");
      obs.layer_sizes = {24, 32, 64, k};
    } else {
      throw DataError("unknown model `" + obs.name + "` in observation file");
    }
    const auto rf = parse_opt(cells[c_rf]);
    obs.reuse_factor = rf ? static_cast<int>(*rf) : 4;
    obs.lut = parse_opt(cells[c_lut]);
    obs.dsp = parse_opt(cells[c_dsp]);
    obs.throughput_pps = parse_opt(cells[c_pps]);
    observations.push_back(std::move(obs));
  }
  return observations;
}

} // namespace edgeids
