#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "antex/core.hpp"
#include "antex/solver.hpp"

namespace antex {

/// Regular azimuth x elevation lattice with values over it.
/// values(i, j) corresponds to (azimuths[i], elevations[j]).
struct DensePattern {
  Eigen::VectorXd azimuths;
  Eigen::VectorXd elevations;
  Eigen::MatrixXcd values;
  MeasurementKind kind = MeasurementKind::ComplexField;

  void validate() const;
};

/// Default truth lattice: 2 degree steps over the full sphere.
inline constexpr double kDefaultLatticeStepDeg = 2.0;

/// Full-sphere lattice with the given step: azimuths cover [-pi, pi),
/// elevations [-pi/2, pi/2] inclusive.
std::pair<Eigen::VectorXd, Eigen::VectorXd> full_sphere_lattice(double step_deg);

/// Evaluates a design's pattern over a lattice in the given kind.
DensePattern evaluate_dense(const DesignSpaceModel& model,
                            const Eigen::VectorXd& config,
                            const Eigen::VectorXcd& excitation,
                            const Eigen::VectorXd& azimuths,
                            const Eigen::VectorXd& elevations,
                            MeasurementKind kind);

/// Root-mean-square difference over identical lattices (complex kind: RMS of
/// moduli of differences).  Lattice or kind mismatch is an argument error.
double total_error(const DensePattern& predicted, const DensePattern& truth);

struct ScatterSummary {
  /// Spearman rank correlation; absent when either axis is constant.
  std::optional<double> spearman_rho;
  /// {min, q25, median, q75, max} per axis.
  std::array<double, 5> residual_quantiles{};
  std::array<double, 5> total_error_quantiles{};
};

/// Rank correlation and quantiles of (residual, total_error) trial pairs.
ScatterSummary residual_total_scatter(
    std::span<const std::pair<double, double>> trials);

// Model-order selection: residual threshold band above the global minimum.
// A factor-2 band separates the order-of-magnitude plateau/under-sized gap
// robustly; the epsilon guard is relative to the observed pattern norm.
inline constexpr double kSelectionFactor = 2.0;
inline constexpr double kSelectionEpsRel = 1e-9;

struct OrderScanEntry {
  int rows = 0;
  int cols = 0;
  double min_residual = 0.0;
  bool selected = false;
};

struct OrderScanResult {
  std::vector<OrderScanEntry> table;  // row-major over (rows, cols)
  int selected_rows = 0;
  int selected_cols = 0;
};

/// Fits rectangular-array models of every shape in the inclusive ranges to
/// the observed pattern and records the minimal residual per shape.  Larger
/// shapes are additionally warm-started from the best design of the shape
/// with one fewer row / column (embedded by a zero extra spacing), which
/// keeps the residual table non-increasing along each capacity axis.
/// Selected is the entry with the smallest rows*cols among those with
/// residual <= kSelectionFactor * (global min + kSelectionEpsRel * ||p||).
OrderScanResult model_order_scan(const SampledPattern& observed,
                                 std::pair<int, int> rows_range,
                                 std::pair<int, int> cols_range,
                                 const SolverParams& params, std::uint64_t seed,
                                 double max_spacing = 0.5);

}  // namespace antex
