#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "antex/core.hpp"
#include "antex/metrics.hpp"
#include "antex/sampling.hpp"
#include "antex/solver.hpp"

namespace antex {

/// A full simulation study: randomized truth designs of one antenna family,
/// one sampling layout, a noise ladder, and the solver, with CSV outputs.
struct ExperimentConfig {
  std::string family = "rect";  // rect | general | horn | dish
  int rows = 3;
  int cols = 3;
  int elements = 4;  // general family

  // truth-randomization envelopes
  double max_spacing = 0.5;      // rect element spacing, wavelengths
  double coord_bound = 0.5;      // general element coordinate bound
  double horn_min_dim = 0.1;
  double horn_max_dim = 6.0;
  double dish_min_radius = 0.5;
  double dish_max_radius = 6.0;
  double dish_max_curvature = 6.0;
  double dish_feed_range = 6.0;
  int dish_n_angular = 20;
  int dish_n_radial = 10;
  /// Radius of the measurement sphere for the general (near-field) family.
  double sample_radius = 100.0;

  SamplingSpec sampling = SamplingSpec::random_sphere(200);
  std::vector<double> sigmas{0.0, 0.01, 0.03, 0.1};
  int trials = 100;
  int trial_first = 0;  // absolute index of the first trial (seeds follow it)
  MeasurementKind kind = MeasurementKind::ComplexField;
  SolverParams solver;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  double dense_step_deg = kDefaultLatticeStepDeg;

  // model-selection mode: scan shapes against trial_first's observations
  bool order_scan = false;
  int scan_max_rows = 5;
  int scan_max_cols = 5;

  std::filesystem::path out_dir;  // empty: nothing written

  void validate() const;
};

struct ScatterRow {
  int trial = 0;
  std::string sampling;
  double sigma = 0.0;
  double residual = 0.0;
  double total_error = 0.0;
  int iterations_used = 0;
  bool converged = false;
};

struct TraceRow {
  int trial = 0;
  double sigma = 0.0;
  int iteration = 0;
  double residual = 0.0;
};

struct ExperimentResult {
  std::vector<ScatterRow> scatter;
  std::vector<TraceRow> trace;
  OrderScanResult order;  // populated in order-scan mode
};

/// The antenna family the experiment draws truths from and fits with.
DesignSpaceModel experiment_model(const ExperimentConfig& config);

/// Runs all trials (work pool over trials; outputs assembled in trial order
/// so thread count never changes bytes) and writes scatter.csv /
/// residual_trace.csv (or order_scan.csv) into out_dir when set.
ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentConfig read_experiment_config(const std::filesystem::path& path);

// Pinned CSV schemas (golden-file guarded).
std::string scatter_csv_text(std::span<const ScatterRow> rows);
std::string trace_csv_text(std::span<const TraceRow> rows);
std::string order_scan_csv_text(std::span<const OrderScanEntry> rows);

}  // namespace antex
