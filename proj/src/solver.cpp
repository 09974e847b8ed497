#include "antex/solver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numeric>

namespace antex {
namespace {

constexpr int kPhaseRetrievalInnerIters = 5;

inline Complex cis(double x) { return {std::cos(x), std::sin(x)}; }

struct SecularTerms {
  Eigen::VectorXd eigenvalues;   // ascending, clamped to >= 0
  Eigen::MatrixXcd eigenvectors;
  Eigen::VectorXcd projections;  // V^H (M^H p)
};

double norm_squared_at(const SecularTerms& t, double lambda) {
  double s = 0;
  for (Eigen::Index i = 0; i < t.eigenvalues.size(); ++i) {
    const double den = t.eigenvalues[i] + lambda;
    const double val = std::norm(t.projections[i]);
    if (val == 0) continue;
    s += val / (den * den);
  }
  return s;
}

Eigen::VectorXcd shifted_solution(const SecularTerms& t, double lambda) {
  Eigen::VectorXcd coeffs(t.eigenvalues.size());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    coeffs[i] = t.projections[i] / (t.eigenvalues[i] + lambda);
  return t.eigenvectors * coeffs;
}

LsSolution unit_norm_solution(const Eigen::MatrixXcd& m,
                              const Eigen::VectorXcd& p,
                              const SecularTerms& t) {
  const Eigen::Index n = t.eigenvalues.size();
  const double d_min = t.eigenvalues[0];
  const double d_max = t.eigenvalues[n - 1];
  const double g_norm = t.projections.norm();

  // Group of (numerically) smallest eigenvalues and the limit of the regular
  // part of ||a(lambda)||^2 as lambda -> -d_min.
  const double group_tol = std::max(d_max, 1.0) * 1e-12;
  double min_group_energy = 0;
  double regular_limit_sq = 0;
  Eigen::VectorXcd regular_coeffs = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double gap = t.eigenvalues[i] - d_min;
    if (gap <= group_tol) {
      min_group_energy += std::norm(t.projections[i]);
    } else {
      regular_coeffs[i] = t.projections[i] / gap;
      regular_limit_sq += std::norm(regular_coeffs[i]);
    }
  }

  LsSolution out;
  if (min_group_energy <= std::pow(1e-13 * std::max(g_norm, 1e-300), 2) &&
      regular_limit_sq <= 1.0) {
    // Degenerate branch: p has no pull along the smallest singular subspace,
    // so the constraint is filled with the smallest right-singular vector.
    const double tau = std::sqrt(std::max(0.0, 1.0 - regular_limit_sq));
    out.excitation = t.eigenvectors * regular_coeffs +
                     tau * t.eigenvectors.col(0);
    out.lambda = -d_min;
  } else {
    // Bracket the root of ||a(lambda)|| = 1.  The map is strictly
    // decreasing on (-d_min, inf): walk lambda toward -d_min until the norm
    // exceeds 1, and away until it drops below 1.
    double delta = std::max(d_max, 1.0) * 1e-15;
    double lo = -d_min + delta;
    for (int i = 0; i < 400 && norm_squared_at(t, lo) <= 1.0; ++i) {
      delta *= 0.25;
      lo = -d_min + delta;
    }
    double hi = std::max({1.0, d_max, g_norm});
    while (norm_squared_at(t, hi) > 1.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (norm_squared_at(t, mid) > 1.0 ? lo : hi) = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    out.excitation = shifted_solution(t, lambda);
    out.excitation /= out.excitation.norm();
    out.lambda = lambda;
  }
  out.residual = (m * out.excitation - p).norm();
  return out;
}

}  // namespace

void SolverParams::validate() const {
  if (max_iterations < 0)
    throw std::invalid_argument("max_iterations must be >= 0");
  if (!(initial_spacing_frac > 0 && initial_spacing_frac <= 1))
    throw std::invalid_argument("initial_spacing_frac must be in (0, 1]");
  if (!(decay > 0 && decay < 1))
    throw std::invalid_argument("decay must be in (0, 1)");
  if (restarts < 0) throw std::invalid_argument("restarts must be >= 0");
  if (convergence_tol < 0)
    throw std::invalid_argument("convergence_tol must be >= 0");
}

GridScheme SolverParams::scheme_for(int config_dim) const {
  if (grid_scheme) return *grid_scheme;
  return config_dim <= 5 ? GridScheme::Factorial3 : GridScheme::Compass;
}

LsSolution solve_excitation(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& p,
                            ExcitationConstraint constraint) {
  if (m.cols() == 0)
    throw std::invalid_argument("excitation dimension must be positive");
  if (m.rows() != p.size())
    throw std::invalid_argument("matrix rows != observation length");

  const Eigen::MatrixXcd gram = m.adjoint() * m;
  const Eigen::VectorXcd rhs = m.adjoint() * p;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigendecomposition failed in solve_excitation");

  SecularTerms t;
  t.eigenvalues = es.eigenvalues().cwiseMax(0.0);
  t.eigenvectors = es.eigenvectors();
  t.projections = t.eigenvectors.adjoint() * rhs;

  if (constraint == ExcitationConstraint::UnitNorm)
    return unit_norm_solution(m, p, t);

  // Minimum-norm least squares through the same decomposition.
  const double d_max = t.eigenvalues[t.eigenvalues.size() - 1];
  const double rank_tol =
      d_max * static_cast<double>(m.cols()) * std::numeric_limits<double>::epsilon();
  Eigen::VectorXcd coeffs(t.eigenvalues.size());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    coeffs[i] = t.eigenvalues[i] > rank_tol ? t.projections[i] / t.eigenvalues[i]
                                            : Complex{0, 0};
  LsSolution out;
  out.excitation = t.eigenvectors * coeffs;
  out.residual = (m * out.excitation - p).norm();
  out.lambda = 0.0;
  return out;
}

Eigen::MatrixXcd design_matrix(const DesignSpaceModel& model,
                               const Eigen::VectorXd& config,
                               std::span<const SamplePoint> points) {
  check_config(model, config);
  return model.basis(config, points);
}

std::vector<Eigen::VectorXd> candidate_grid(const Eigen::VectorXd& center,
                                            const Eigen::VectorXd& spacing,
                                            GridScheme scheme,
                                            std::span<const Bounds> bounds) {
  const int d = static_cast<int>(center.size());
  if (spacing.size() != d) throw std::invalid_argument("spacing size mismatch");
  if (static_cast<int>(bounds.size()) != d)
    throw std::invalid_argument("bounds size mismatch");
  for (int i = 0; i < d; ++i)
    if (!(spacing[i] > 0)) throw std::invalid_argument("spacing must be positive");

  auto clip = [&](Eigen::VectorXd x) {
    for (int i = 0; i < d; ++i) x[i] = std::clamp(x[i], bounds[i][0], bounds[i][1]);
    return x;
  };

  std::vector<Eigen::VectorXd> cands;
  if (scheme == GridScheme::Factorial3) {
    long total = 1;
    for (int i = 0; i < d; ++i) total *= 3;
    cands.reserve(static_cast<std::size_t>(total));
    for (long code = 0; code < total; ++code) {
      Eigen::VectorXd x = center;
      long c = code;
      for (int i = 0; i < d; ++i) {
        x[i] += (static_cast<int>(c % 3) - 1) * spacing[i];
        c /= 3;
      }
      cands.push_back(clip(x));
    }
  } else {
    cands.reserve(2 * d + 1);
    cands.push_back(clip(center));
    for (int i = 0; i < d; ++i) {
      Eigen::VectorXd lo = center, hi = center;
      lo[i] -= spacing[i];
      hi[i] += spacing[i];
      cands.push_back(clip(lo));
      cands.push_back(clip(hi));
    }
  }

  // Clipping can fold distinct stencil points together; keep the first
  // occurrence of each so enumeration order (and with it tie-breaking)
  // stays deterministic.
  const std::size_t n = cands.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto lex_less = [&](std::size_t a, std::size_t b) {
    for (int i = 0; i < d; ++i) {
      if (cands[a][i] < cands[b][i]) return true;
      if (cands[a][i] > cands[b][i]) return false;
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), lex_less);
  auto vec_equal = [&](std::size_t a, std::size_t b) {
    for (int i = 0; i < d; ++i)
      if (cands[a][i] != cands[b][i]) return false;
    return true;
  };
  std::vector<bool> keep(n, true);
  for (std::size_t i = 1; i < n; ++i) {
    if (vec_equal(order[i], order[i - 1])) keep[order[i]] = false;
  }
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (keep[i]) out.push_back(std::move(cands[i]));
  return out;
}

namespace {

struct CandidateFit {
  Eigen::VectorXcd excitation;
  double residual = std::numeric_limits<double>::infinity();
};

// Excitation fit at one configuration.  Complex observations feed the
// constrained LS directly; magnitude-only observations go through a short
// alternating phase-assignment loop, and the reported residual is taken in
// the observed kind's value space.
CandidateFit fit_candidate(const Eigen::MatrixXcd& m,
                           const SampledPattern& observed,
                           const Eigen::VectorXd& magnitudes,
                           ExcitationConstraint constraint) {
  CandidateFit fit;
  if (observed.kind == MeasurementKind::ComplexField) {
    LsSolution sol = solve_excitation(m, observed.values, constraint);
    fit.excitation = std::move(sol.excitation);
    fit.residual = sol.residual;
    return fit;
  }
  Eigen::VectorXcd target = magnitudes.cast<Complex>();
  Eigen::VectorXcd predicted;
  for (int it = 0; it < kPhaseRetrievalInnerIters; ++it) {
    LsSolution sol = solve_excitation(m, target, constraint);
    predicted = m * sol.excitation;
    fit.excitation = std::move(sol.excitation);
    for (Eigen::Index i = 0; i < target.size(); ++i)
      target[i] = magnitudes[i] * cis(std::arg(predicted[i]));
  }
  fit.residual = pattern_misfit(predicted, observed);
  return fit;
}

struct StartOutcome {
  bool valid = false;
  Eigen::VectorXd config;
  Eigen::VectorXcd excitation;
  std::vector<double> history;
  bool converged = false;
  int skipped = 0;
};

}  // namespace

ExtrapolationResult extrapolate(const DesignSpaceModel& model,
                                const SampledPattern& observed,
                                std::span<const SamplePoint> queries,
                                const SolverParams& params, std::uint64_t seed,
                                std::span<const Eigen::VectorXd> extra_starts) {
  model.validate();
  params.validate();
  observed.validate();
  const int total_starts = params.restarts + static_cast<int>(extra_starts.size());
  if (total_starts < 1)
    throw std::invalid_argument("need at least one start (restarts or extra)");

  const GridScheme scheme = params.scheme_for(model.config_dim);
  const Eigen::VectorXd magnitudes =
      observed.kind == MeasurementKind::ComplexField
          ? Eigen::VectorXd()
          : observed_magnitudes(observed);

  Eigen::VectorXd base_spacing(model.config_dim);
  for (int i = 0; i < model.config_dim; ++i)
    base_spacing[i] = params.initial_spacing_frac *
                      (model.config_bounds[i][1] - model.config_bounds[i][0]);

  auto fit_at = [&](const Eigen::VectorXd& x) {
    return fit_candidate(model.basis(x, observed.points), observed, magnitudes,
                         params.excitation_constraint);
  };

  auto run_start = [&](const Eigen::VectorXd& x0) {
    StartOutcome s;
    Eigen::VectorXd x = x0;
    CandidateFit current;
    try {
      current = fit_at(x);
    } catch (const std::exception&) {
      s.skipped += 1;
      return s;  // invalid start
    }
    s.valid = true;
    s.history.push_back(current.residual);
    for (int n = 0; n < params.max_iterations; ++n) {
      const Eigen::VectorXd spacing = base_spacing * std::pow(params.decay, n);
      const auto cands =
          model.config_dim == 0
              ? std::vector<Eigen::VectorXd>{x}
              : candidate_grid(x, spacing, scheme, model.config_bounds);
      int best = -1;
      CandidateFit best_fit;
      for (std::size_t c = 0; c < cands.size(); ++c) {
        CandidateFit f;
        try {
          f = fit_candidate(model.basis(cands[c], observed.points), observed,
                            magnitudes, params.excitation_constraint);
        } catch (const std::exception&) {
          s.skipped += 1;
          continue;
        }
        if (best < 0 || f.residual < best_fit.residual) {
          best = static_cast<int>(c);
          best_fit = std::move(f);
        }
      }
      if (best < 0) break;  // every candidate failed; stay put
      const double prev = current.residual;
      x = cands[best];
      current = std::move(best_fit);
      s.history.push_back(current.residual);
      const double change = prev - current.residual;
      if (change < params.convergence_tol * std::max(prev, DBL_MIN)) {
        s.converged = true;
        break;
      }
    }
    s.config = x;
    s.excitation = current.excitation;
    return s;
  };

  StartOutcome winner;
  int skipped_total = 0;
  for (int r = 0; r < total_starts; ++r) {
    Eigen::VectorXd x0;
    if (r < static_cast<int>(extra_starts.size())) {
      x0 = extra_starts[r];
      check_config(model, x0);
    } else {
      Prng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
      x0 = uniform_config(model, rng);
    }
    StartOutcome s = run_start(x0);
    skipped_total += s.skipped;
    if (!s.valid) continue;
    if (!winner.valid || s.history.back() < winner.history.back()) {
      winner = std::move(s);
    }
  }
  if (!winner.valid)
    throw NumericalError("every solver start failed to evaluate");

  ExtrapolationResult result;
  result.config = winner.config;
  result.excitation = winner.excitation;
  result.residual_history = winner.history;
  result.converged = winner.converged;
  result.iterations_used = static_cast<int>(winner.history.size()) - 1;
  result.undersampled = static_cast<int>(observed.points.size()) <
                        min_sample_count(model, observed.kind);
  result.skipped_candidates = skipped_total;
  if (!queries.empty())
    result.predicted = model.basis(winner.config, queries) * winner.excitation;
  return result;
}

double residual_error(const DesignSpaceModel& model, const Eigen::VectorXd& config,
                      const Eigen::VectorXcd& excitation,
                      const SampledPattern& observed) {
  return pattern_misfit(
      evaluate_pattern(model, config, excitation, observed.points), observed);
}

}  // namespace antex
