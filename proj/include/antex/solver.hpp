#pragma once

#include <optional>
#include <span>
#include <vector>

#include "antex/core.hpp"

namespace antex {

enum class GridScheme { Factorial3, Compass };
enum class ExcitationConstraint { UnitNorm, Unconstrained };

/// Knobs of the recursive grid-search / least-squares solver.
struct SolverParams {
  int max_iterations = 10;
  /// Unset: Factorial3 for config_dim <= 5, Compass above (3^d forward
  /// evaluations per iteration are wasteful in high dimension).
  std::optional<GridScheme> grid_scheme{};
  double initial_spacing_frac = 0.25;  // of each bound interval, in (0, 1]
  double decay = 0.7;                  // geometric spacing decay, in (0, 1)
  int restarts = 4;
  ExcitationConstraint excitation_constraint = ExcitationConstraint::UnitNorm;
  double convergence_tol = 1e-6;  // relative residual change

  void validate() const;
  GridScheme scheme_for(int config_dim) const;
};

struct LsSolution {
  Eigen::VectorXcd excitation;
  double residual = 0.0;  // ||M a - p||_2
  double lambda = 0.0;    // multiplier of the norm constraint (0 if unconstrained)
};

/// Linear excitation fit.  Unconstrained: minimum-norm least squares.
/// UnitNorm: minimizes ||M a - p|| subject to ||a|| = 1 through the
/// stationarity system (M^H M + lambda I) a = M^H p, with lambda located by
/// bisection of the strictly decreasing map lambda -> ||a(lambda)|| on
/// (-sigma_min^2, inf).  When p has no component against the smallest
/// singular subspace and the regular solution is short (in particular
/// p orthogonal to range(M)), the minimizer gains a component along the
/// smallest right-singular vector instead.
LsSolution solve_excitation(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& p,
                            ExcitationConstraint constraint);

/// Column n is the forward pattern of unit excitation e_n, so that
/// design_matrix(...) * a reproduces the pattern map for any excitation.
Eigen::MatrixXcd design_matrix(const DesignSpaceModel& model,
                               const Eigen::VectorXd& config,
                               std::span<const SamplePoint> points);

/// Search stencil around `center`, clipped to bounds and deduplicated
/// (first occurrence kept, so the center is always present).
///   Factorial3: all 3^d combinations of {c_i - s_i, c_i, c_i + s_i}
///   Compass:    center plus the 2d single-coordinate perturbations
std::vector<Eigen::VectorXd> candidate_grid(const Eigen::VectorXd& center,
                                            const Eigen::VectorXd& spacing,
                                            GridScheme scheme,
                                            std::span<const Bounds> bounds);

struct ExtrapolationResult {
  Eigen::VectorXd config;
  Eigen::VectorXcd excitation;
  /// Residual at the initial design and after each iteration of the winning
  /// start; non-increasing because the current iterate stays on the grid.
  std::vector<double> residual_history;
  Eigen::VectorXcd predicted;  // forward values at the query points
  bool converged = false;
  int iterations_used = 0;
  bool undersampled = false;   // K below the minimum sample count
  int skipped_candidates = 0;  // forward-model failures, skipped and counted
};

/// Multi-start recursive extrapolation: each start descends an
/// ever-shrinking candidate grid, refitting the excitation at every
/// candidate and stepping to the residual argmin (ties: lowest candidate
/// index).  `extra_starts` are searched in addition to the seeded random
/// restarts; the best final residual wins (ties: earliest start).
ExtrapolationResult extrapolate(const DesignSpaceModel& model,
                                const SampledPattern& observed,
                                std::span<const SamplePoint> queries,
                                const SolverParams& params, std::uint64_t seed,
                                std::span<const Eigen::VectorXd> extra_starts = {});

/// Misfit of a fully specified design against observations, in the observed
/// measurement kind's value space.
double residual_error(const DesignSpaceModel& model, const Eigen::VectorXd& config,
                      const Eigen::VectorXcd& excitation,
                      const SampledPattern& observed);

}  // namespace antex
