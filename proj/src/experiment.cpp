#include "antex/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "antex/io.hpp"
#include "antex/models.hpp"

namespace antex {
namespace {

// Salts for the independent per-trial streams.
constexpr std::uint64_t kTruthSalt = 0x1;
constexpr std::uint64_t kSamplingSalt = 0x2;
constexpr std::uint64_t kNoiseSalt = 0x100;
constexpr std::uint64_t kSolverSalt = 0x200;

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  if (trial_first < 0) throw ConfigError("trial.first", "must be >= 0");
  if (sigmas.empty()) throw ConfigError("noise.sigmas", "must be nonempty");
  for (double s : sigmas)
    if (s < 0) throw ConfigError("noise.sigmas", "entries must be >= 0");
  if (threads < 0) throw ConfigError("threads", "must be >= 0");
  if (!(dense_step_deg > 0)) throw ConfigError("dense.step_deg", "must be > 0");
  if (order_scan && (scan_max_rows < 1 || scan_max_cols < 1))
    throw ConfigError("scan.max_rows", "scan ranges must be >= 1");
  try {
    sampling.validate();
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("sampling/solver", e.what());
  }
  experiment_model(*this);  // family and shape checks
}

DesignSpaceModel experiment_model(const ExperimentConfig& config) {
  if (config.family == "rect") {
    if (config.rows < 1 || config.cols < 1)
      throw ConfigError("model.rows", "must be >= 1");
    return make_rect_array_model(config.rows, config.cols, config.max_spacing);
  }
  if (config.family == "general") {
    if (config.elements < 1) throw ConfigError("model.elements", "must be >= 1");
    return make_general_array_model(config.elements, config.coord_bound);
  }
  if (config.family == "horn")
    return make_horn_model(config.horn_min_dim, config.horn_max_dim);
  if (config.family == "dish")
    return make_dish_model(config.dish_min_radius, config.dish_max_radius,
                           config.dish_max_curvature, config.dish_feed_range,
                           config.dish_n_angular, config.dish_n_radial);
  throw ConfigError("model.family",
                    "expected rect|general|horn|dish, got '" + config.family + "'");
}

namespace {

struct TrialOutput {
  std::vector<ScatterRow> scatter;
  std::vector<TraceRow> trace;
};

Eigen::VectorXcd unit_norm_excitation(int n, Prng& rng) {
  Eigen::VectorXcd a(n);
  for (int i = 0; i < n; ++i) a[i] = rng.complex_normal();
  const double norm = a.norm();
  if (norm == 0) return Eigen::VectorXcd::Unit(n, 0);
  return a / norm;
}

std::vector<SamplePoint> observation_points(const ExperimentConfig& cfg,
                                            std::span<const Direction> dirs) {
  // The general family radiates in the near field; its observations sit on a
  // sphere of sample_radius wavelengths, matching the paper-style circular
  // scans.  Far-field families take the directions as-is.
  if (cfg.family != "general") return to_far_field(dirs);
  std::vector<SamplePoint> points;
  points.reserve(dirs.size());
  for (const auto& d : dirs)
    points.push_back(
        SamplePoint::near_field(cfg.sample_radius * d.unit_vector()));
  return points;
}

TrialOutput run_trial(const ExperimentConfig& cfg, const DesignSpaceModel& model,
                      const Eigen::VectorXd& lattice_az,
                      const Eigen::VectorXd& lattice_el, int absolute_trial) {
  const std::uint64_t trial_seed =
      mix_seed(cfg.seed, static_cast<std::uint64_t>(absolute_trial));

  Prng truth_rng(mix_seed(trial_seed, kTruthSalt));
  const Eigen::VectorXd truth_config =
      model.draw_config ? model.draw_config(truth_rng)
                        : uniform_config(model, truth_rng);
  // Truths are drawn on the unit excitation sphere: the solver's unit-norm
  // constraint can then reproduce them exactly.
  const Eigen::VectorXcd truth_excitation =
      unit_norm_excitation(model.excitation_dim, truth_rng);

  const auto dirs = generate_samples(cfg.sampling, mix_seed(trial_seed, kSamplingSalt));
  const auto points = observation_points(cfg, dirs);
  const Eigen::VectorXcd field =
      model.basis(truth_config, points) * truth_excitation;

  const bool dense_metrics = cfg.family != "general";
  DensePattern dense_truth;
  if (dense_metrics)
    dense_truth = evaluate_dense(model, truth_config, truth_excitation,
                                 lattice_az, lattice_el, cfg.kind);

  TrialOutput out;
  for (std::size_t si = 0; si < cfg.sigmas.size(); ++si) {
    const double sigma = cfg.sigmas[si];
    const Eigen::VectorXcd noisy =
        add_noise(field, sigma, mix_seed(trial_seed, kNoiseSalt + si));
    SampledPattern observed{points, measure(noisy, cfg.kind), cfg.kind};

    const ExtrapolationResult fit = extrapolate(
        model, observed, {}, cfg.solver, mix_seed(trial_seed, kSolverSalt + si));

    double total = std::numeric_limits<double>::quiet_NaN();
    if (dense_metrics) {
      const DensePattern dense_pred =
          evaluate_dense(model, fit.config, fit.excitation, lattice_az,
                         lattice_el, cfg.kind);
      total = total_error(dense_pred, dense_truth);
    }

    out.scatter.push_back({absolute_trial, cfg.sampling.label(), sigma,
                           fit.residual_history.back(), total,
                           fit.iterations_used, fit.converged});
    for (std::size_t it = 0; it < fit.residual_history.size(); ++it)
      out.trace.push_back({absolute_trial, sigma, static_cast<int>(it),
                           fit.residual_history[it]});
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const DesignSpaceModel model = experiment_model(cfg);
  ExperimentResult result;

  if (cfg.order_scan) {
    // Model selection against the first trial's noiseless-or-first-sigma
    // observations.
    const std::uint64_t trial_seed =
        mix_seed(cfg.seed, static_cast<std::uint64_t>(cfg.trial_first));
    Prng truth_rng(mix_seed(trial_seed, kTruthSalt));
    const Eigen::VectorXd truth_config =
        model.draw_config ? model.draw_config(truth_rng)
                          : uniform_config(model, truth_rng);
    const Eigen::VectorXcd truth_excitation =
        unit_norm_excitation(model.excitation_dim, truth_rng);
    const auto dirs =
        generate_samples(cfg.sampling, mix_seed(trial_seed, kSamplingSalt));
    const auto points = observation_points(cfg, dirs);
    Eigen::VectorXcd field = model.basis(truth_config, points) * truth_excitation;
    field = add_noise(field, cfg.sigmas.front(), mix_seed(trial_seed, kNoiseSalt));
    const SampledPattern observed{points, measure(field, cfg.kind), cfg.kind};
    result.order = model_order_scan(observed, {1, cfg.scan_max_rows},
                                    {1, cfg.scan_max_cols}, cfg.solver,
                                    mix_seed(trial_seed, kSolverSalt),
                                    cfg.max_spacing);
    if (!cfg.out_dir.empty()) {
      std::filesystem::create_directories(cfg.out_dir);
      write_text_file(cfg.out_dir / "order_scan.csv",
                      order_scan_csv_text(result.order.table));
    }
    return result;
  }

  const auto [lattice_az, lattice_el] = full_sphere_lattice(cfg.dense_step_deg);

  std::vector<TrialOutput> outputs(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  int n_threads = cfg.threads > 0
                      ? cfg.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, cfg.trials);

  auto worker = [&]() {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= cfg.trials) return;
      try {
        outputs[static_cast<std::size_t>(t)] =
            run_trial(cfg, model, lattice_az, lattice_el, cfg.trial_first + t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (auto& o : outputs) {
    result.scatter.insert(result.scatter.end(), o.scatter.begin(), o.scatter.end());
    result.trace.insert(result.trace.end(), o.trace.begin(), o.trace.end());
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_text_file(cfg.out_dir / "scatter.csv", scatter_csv_text(result.scatter));
    write_text_file(cfg.out_dir / "residual_trace.csv",
                    trace_csv_text(result.trace));
  }
  return result;
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
  const FlatConfig f = FlatConfig::parse_file(path);
  ExperimentConfig cfg;
  cfg.family = f.get_string("model.family", cfg.family);
  cfg.rows = static_cast<int>(f.get_int("model.rows", cfg.rows));
  cfg.cols = static_cast<int>(f.get_int("model.cols", cfg.cols));
  cfg.elements = static_cast<int>(f.get_int("model.elements", cfg.elements));
  cfg.max_spacing = f.get_double("truth.max_spacing", cfg.max_spacing);
  cfg.coord_bound = f.get_double("truth.coord_bound", cfg.coord_bound);
  cfg.horn_min_dim = f.get_double("truth.horn_min_dim", cfg.horn_min_dim);
  cfg.horn_max_dim = f.get_double("truth.horn_max_dim", cfg.horn_max_dim);
  cfg.dish_min_radius = f.get_double("truth.dish_min_radius", cfg.dish_min_radius);
  cfg.dish_max_radius = f.get_double("truth.dish_max_radius", cfg.dish_max_radius);
  cfg.dish_max_curvature =
      f.get_double("truth.dish_max_curvature", cfg.dish_max_curvature);
  cfg.dish_feed_range = f.get_double("truth.dish_feed_range", cfg.dish_feed_range);
  cfg.dish_n_angular = static_cast<int>(f.get_int("dish.n_angular", cfg.dish_n_angular));
  cfg.dish_n_radial = static_cast<int>(f.get_int("dish.n_radial", cfg.dish_n_radial));
  cfg.sample_radius = f.get_double("sample.radius", cfg.sample_radius);

  const std::string sampling_kind = f.get_string("sampling.kind", "random");
  const int sampling_count =
      static_cast<int>(f.get_int("sampling.count", 200));
  SamplingSpec spec = sampling_spec_from_label(sampling_kind, sampling_count);
  spec.az_count = static_cast<int>(f.get_int("sampling.az_count", spec.az_count));
  spec.el_count = static_cast<int>(f.get_int("sampling.el_count", spec.el_count));
  spec.block_count =
      static_cast<int>(f.get_int("sampling.block_count", spec.block_count));
  spec.block_len = static_cast<int>(f.get_int("sampling.block_len", spec.block_len));
  spec.max_elevation = f.get_double("sampling.max_elevation", spec.max_elevation);
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("sampling", e.what());
  }
  cfg.sampling = spec;

  cfg.sigmas = f.get_double_list("noise.sigmas", cfg.sigmas);
  cfg.trials = static_cast<int>(f.get_int("trials", cfg.trials));
  cfg.trial_first = static_cast<int>(f.get_int("trial.first", cfg.trial_first));
  cfg.kind = measurement_kind_from_string(f.get_string("kind", to_string(cfg.kind)));
  cfg.seed = static_cast<std::uint64_t>(f.get_int("seed", static_cast<long long>(cfg.seed)));
  cfg.threads = static_cast<int>(f.get_int("threads", cfg.threads));
  cfg.dense_step_deg = f.get_double("dense.step_deg", cfg.dense_step_deg);

  cfg.solver.max_iterations =
      static_cast<int>(f.get_int("solver.iterations", cfg.solver.max_iterations));
  cfg.solver.restarts =
      static_cast<int>(f.get_int("solver.restarts", cfg.solver.restarts));
  const std::string scheme = f.get_string("solver.scheme", "auto");
  if (scheme == "factorial3")
    cfg.solver.grid_scheme = GridScheme::Factorial3;
  else if (scheme == "compass")
    cfg.solver.grid_scheme = GridScheme::Compass;
  else if (scheme != "auto")
    throw ConfigError("solver.scheme", "expected auto|factorial3|compass");
  const std::string constraint = f.get_string("solver.constraint", "unit");
  if (constraint == "unit")
    cfg.solver.excitation_constraint = ExcitationConstraint::UnitNorm;
  else if (constraint == "free")
    cfg.solver.excitation_constraint = ExcitationConstraint::Unconstrained;
  else
    throw ConfigError("solver.constraint", "expected unit|free");
  cfg.solver.initial_spacing_frac =
      f.get_double("solver.spacing_frac", cfg.solver.initial_spacing_frac);
  cfg.solver.decay = f.get_double("solver.decay", cfg.solver.decay);
  cfg.solver.convergence_tol =
      f.get_double("solver.tol", cfg.solver.convergence_tol);

  cfg.order_scan = f.get_bool("scan.enabled", cfg.order_scan);
  cfg.scan_max_rows = static_cast<int>(f.get_int("scan.max_rows", cfg.scan_max_rows));
  cfg.scan_max_cols = static_cast<int>(f.get_int("scan.max_cols", cfg.scan_max_cols));

  const std::string out = f.get_string("out.dir", "");
  if (!out.empty()) cfg.out_dir = out;

  f.check_all_consumed();
  try {
    cfg.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("solver", e.what());
  }
  cfg.validate();
  return cfg;
}

std::string scatter_csv_text(std::span<const ScatterRow> rows) {
  std::string out = "trial,sampling,sigma,residual,total_error,iterations_used,converged\n";
  for (const auto& r : rows) {
    out += std::to_string(r.trial);
    out += ',';
    out += r.sampling;
    out += ',';
    out += format_double(r.sigma);
    out += ',';
    out += format_double(r.residual);
    out += ',';
    out += format_double(r.total_error);
    out += ',';
    out += std::to_string(r.iterations_used);
    out += ',';
    out += r.converged ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string trace_csv_text(std::span<const TraceRow> rows) {
  std::string out = "trial,sigma,iteration,residual\n";
  for (const auto& r : rows) {
    out += std::to_string(r.trial);
    out += ',';
    out += format_double(r.sigma);
    out += ',';
    out += std::to_string(r.iteration);
    out += ',';
    out += format_double(r.residual);
    out += '\n';
  }
  return out;
}

std::string order_scan_csv_text(std::span<const OrderScanEntry> rows) {
  std::string out = "rows,cols,min_residual,selected\n";
  for (const auto& r : rows) {
    out += std::to_string(r.rows);
    out += ',';
    out += std::to_string(r.cols);
    out += ',';
    out += format_double(r.min_residual);
    out += ',';
    out += r.selected ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace antex
