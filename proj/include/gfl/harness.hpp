#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfl/exponents.hpp"
#include "gfl/fractal.hpp"
#include "gfl/kernels.hpp"
#include "gfl/sampler.hpp"
#include "json.hpp"

namespace gfl {

// Interval predictions for graph and range box dimensions from the local
// exponent pair (alpha_tilde <= alpha_under), parameter dimension N and value
// dimension d. Throws on nonpositive or unordered exponents.
struct PredictedBounds {
  double graph_lo = 0.0, graph_hi = 0.0;
  double range_lo = 0.0, range_hi = 0.0;
};
PredictedBounds predicted_bounds(double alpha_tilde, double alpha_under, int n, int d);

struct Tolerances {
  double graph_dim = 0.10;   // 1-D default; 2-D presets widen to 0.30
  double range_dim = 0.05;
  double exponent = 0.05;
};

// Declarative experiment: process kernel, sampling grid, probe points,
// ladders, seed list, tolerances. JSON schema documented in the README
// ("schema": 1).
struct ExperimentConfig {
  std::string name = "experiment";
  nlohmann::json process;          // kernel description, see kernel_from_json
  int d = 1;
  GridSpec grid;
  std::vector<Point> t0_list;
  std::vector<double> rho_ladder;
  std::size_t pairs_per_rho = 4000;
  std::vector<double> scale_ladder;
  WindowPolicy window;
  std::optional<double> localized_rho;  // set: dims measured in B(t0, rho)
  std::vector<std::uint64_t> seeds;
  Tolerances tol;
  double sandwich_epsilon = 0.1;
  std::string sampler = "auto";    // auto | exact | hosking | gw | mbm_spectral
  bool run_dimensions = true;      // exponents and sandwich always run
  std::optional<double> expected_graph_dim;  // extra pinned checks, optional
  std::optional<double> expected_range_dim;
  double freq_cutoff = 0.0;        // mbm_spectral only; 0 = auto
  int freq_bins = 2048;
  std::string out_dir = "out";

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

// Outcome for one probe point: estimated exponents, predicted dimension
// intervals, measured per-seed dimensions with medians, and verdicts.
struct CaseReport {
  Point t0;
  ExponentEstimate exponents;
  PredictedBounds bounds;
  std::optional<double> sandwich_rho0;
  std::vector<double> graph_dims;   // per seed
  std::vector<double> range_dims;
  double graph_median = 0.0, range_median = 0.0;
  bool order_ok = false;     // alpha_tilde <= alpha_under + 1e-6
  bool sandwich_ok = false;  // a positive rho0 was found
  bool graph_ok = false;     // median inside [lo - tol, hi + tol]
  bool range_ok = false;
};

struct FitRecord {
  std::size_t case_idx = 0;
  std::uint64_t seed = 0;
  DimensionEstimate est;
};

struct TheoremReport {
  ExperimentConfig config;
  std::vector<CaseReport> cases;
  std::vector<FitRecord> fits;  // per (case, seed, target), plot data
  bool all_ok = false;
  nlohmann::json to_json() const;
};

TheoremReport run_experiment(const ExperimentConfig& config);

// Single-path dimension measurements with the config's ladder and window
// policy (floor auto-selected when the config leaves it at zero). These are
// the building blocks run_experiment aggregates over seeds.
DimensionEstimate config_graph_dimension(const ExperimentConfig& config,
                                         const SamplePath& path);
DimensionEstimate config_range_dimension(const SamplePath& path);

enum class ReportFormat { json, csv, plotdata };
// Writes report.json / report.csv / plot_*.csv into out_dir.
void emit_report(const TheoremReport& report, ReportFormat format,
                 const std::string& out_dir);

// Named ready-made configs covering every acceptance scenario.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

double median(std::vector<double> v);

// Build the kernel described by config.process and the sampler it implies.
IncrementKernel config_kernel(const ExperimentConfig& config);
SamplePath config_sample(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace gfl
