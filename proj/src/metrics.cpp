#include "antex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "antex/models.hpp"

namespace antex {

void DensePattern::validate() const {
  if (azimuths.size() < 1 || elevations.size() < 1)
    throw std::invalid_argument("dense pattern lattice is empty");
  if (values.rows() != azimuths.size() || values.cols() != elevations.size())
    throw std::invalid_argument("dense pattern values shape mismatch");
  for (Eigen::Index i = 1; i < azimuths.size(); ++i)
    if (!(azimuths[i] > azimuths[i - 1]))
      throw std::invalid_argument("azimuth lattice must be increasing");
  for (Eigen::Index j = 1; j < elevations.size(); ++j)
    if (!(elevations[j] > elevations[j - 1]))
      throw std::invalid_argument("elevation lattice must be increasing");
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> full_sphere_lattice(double step_deg) {
  if (!(step_deg > 0)) throw std::invalid_argument("lattice step must be > 0");
  const double step = step_deg * std::numbers::pi / 180.0;
  const int n_az = std::max(1, static_cast<int>(std::lround(kTwoPi / step)));
  const int n_el =
      std::max(2, static_cast<int>(std::lround(std::numbers::pi / step)) + 1);
  Eigen::VectorXd az(n_az), el(n_el);
  for (int i = 0; i < n_az; ++i) az[i] = -std::numbers::pi + i * (kTwoPi / n_az);
  for (int j = 0; j < n_el; ++j)
    el[j] = -std::numbers::pi / 2 + j * (std::numbers::pi / (n_el - 1));
  return {az, el};
}

DensePattern evaluate_dense(const DesignSpaceModel& model,
                            const Eigen::VectorXd& config,
                            const Eigen::VectorXcd& excitation,
                            const Eigen::VectorXd& azimuths,
                            const Eigen::VectorXd& elevations,
                            MeasurementKind kind) {
  DensePattern out;
  out.azimuths = azimuths;
  out.elevations = elevations;
  out.kind = kind;
  out.values.resize(azimuths.size(), elevations.size());
  // One basis evaluation per elevation row keeps peak memory small.
  std::vector<SamplePoint> points;
  points.reserve(azimuths.size());
  for (Eigen::Index j = 0; j < elevations.size(); ++j) {
    points.clear();
    for (Eigen::Index i = 0; i < azimuths.size(); ++i)
      points.push_back(
          SamplePoint::far_field(Direction(azimuths[i], elevations[j])));
    out.values.col(j) =
        measure(model.basis(config, points) * excitation, kind);
  }
  return out;
}

double total_error(const DensePattern& predicted, const DensePattern& truth) {
  predicted.validate();
  truth.validate();
  if (predicted.kind != truth.kind)
    throw std::invalid_argument("dense patterns have different kinds");
  const bool same_lattice =
      predicted.azimuths.size() == truth.azimuths.size() &&
      predicted.elevations.size() == truth.elevations.size() &&
      (predicted.azimuths.array() == truth.azimuths.array()).all() &&
      (predicted.elevations.array() == truth.elevations.array()).all();
  if (!same_lattice)
    throw std::invalid_argument("dense patterns have different lattices");
  const double n = static_cast<double>(truth.values.size());
  return std::sqrt((predicted.values - truth.values).squaredNorm() / n);
}

namespace {

// Ranks with ties averaged.
std::vector<double> ranks_of(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::array<double, 5> quantiles_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto at = [&](double q) {
    const double pos = q * (static_cast<double>(v.size()) - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
  };
  return {at(0.0), at(0.25), at(0.5), at(0.75), at(1.0)};
}

std::optional<double> pearson(const std::vector<double>& x,
                              const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

ScatterSummary residual_total_scatter(
    std::span<const std::pair<double, double>> trials) {
  if (trials.size() < 3)
    throw std::invalid_argument("need at least 3 trials for a scatter summary");
  std::vector<double> res(trials.size()), tot(trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    res[i] = trials[i].first;
    tot[i] = trials[i].second;
  }
  ScatterSummary out;
  out.spearman_rho = pearson(ranks_of(res), ranks_of(tot));
  out.residual_quantiles = quantiles_of(res);
  out.total_error_quantiles = quantiles_of(tot);
  return out;
}

OrderScanResult model_order_scan(const SampledPattern& observed,
                                 std::pair<int, int> rows_range,
                                 std::pair<int, int> cols_range,
                                 const SolverParams& params, std::uint64_t seed,
                                 double max_spacing) {
  observed.validate();
  if (rows_range.first < 1 || rows_range.second < rows_range.first ||
      cols_range.first < 1 || cols_range.second < cols_range.first)
    throw std::invalid_argument("shape ranges must be nonempty and >= 1");

  struct ShapeFit {
    Eigen::VectorXd config;
    double residual = 0.0;
  };
  std::map<std::pair<int, int>, ShapeFit> fits;
  OrderScanResult out;

  for (int r = rows_range.first; r <= rows_range.second; ++r) {
    for (int c = cols_range.first; c <= cols_range.second; ++c) {
      const DesignSpaceModel model = make_rect_array_model(r, c, max_spacing);
      const auto res = extrapolate(
          model, observed, {}, params,
          mix_seed(seed, static_cast<std::uint64_t>(r) * 1000 + c));
      ShapeFit best{res.config, res.residual_history.back()};

      // Evaluate the neighbouring optima embedded into this shape (an extra
      // zero spacing stacks the new row/column on the previous one; the
      // excitation is refit, no further search).  The embedded fit can never
      // be worse than its donor, so the table stays non-increasing along
      // each capacity axis without letting larger shapes accumulate extra
      // search depth.
      std::vector<Eigen::VectorXd> embedded;
      if (auto it = fits.find({r - 1, c}); it != fits.end()) {
        Eigen::VectorXd x(model.config_dim);
        const auto& prev = it->second.config;  // (r-2) row + (c-1) col spacings
        x.head(r - 2) = prev.head(r - 2);
        x[r - 2] = 0.0;
        x.tail(c - 1) = prev.tail(c - 1);
        embedded.push_back(x);
      }
      if (auto it = fits.find({r, c - 1}); it != fits.end()) {
        Eigen::VectorXd x(model.config_dim);
        const auto& prev = it->second.config;
        x.head(r - 1) = prev.head(r - 1);
        x.segment(r - 1, c - 2) = prev.tail(c - 2);
        x[model.config_dim - 1] = 0.0;
        embedded.push_back(x);
      }
      if (!embedded.empty()) {
        SolverParams refit_only = params;
        refit_only.max_iterations = 0;
        refit_only.restarts = 0;
        const auto em = extrapolate(model, observed, {}, refit_only,
                                    mix_seed(seed, 7), embedded);
        if (em.residual_history.back() < best.residual)
          best = {em.config, em.residual_history.back()};
      }
      fits[{r, c}] = best;
      out.table.push_back({r, c, best.residual, false});
    }
  }

  double global_min = out.table.front().min_residual;
  for (const auto& e : out.table) global_min = std::min(global_min, e.min_residual);
  const double band =
      kSelectionFactor * (global_min + kSelectionEpsRel * observed.values.norm());

  int best_idx = -1;
  for (std::size_t i = 0; i < out.table.size(); ++i) {
    const auto& e = out.table[i];
    if (e.min_residual > band) continue;
    if (best_idx < 0) {
      best_idx = static_cast<int>(i);
      continue;
    }
    const auto& b = out.table[static_cast<std::size_t>(best_idx)];
    const long ec = static_cast<long>(e.rows) * e.cols;
    const long bc = static_cast<long>(b.rows) * b.cols;
    if (ec < bc || (ec == bc && e.min_residual < b.min_residual))
      best_idx = static_cast<int>(i);
  }
  out.table[static_cast<std::size_t>(best_idx)].selected = true;
  out.selected_rows = out.table[static_cast<std::size_t>(best_idx)].rows;
  out.selected_cols = out.table[static_cast<std::size_t>(best_idx)].cols;
  return out;
}

}  // namespace antex
