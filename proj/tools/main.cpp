// antex command line: forward-model evaluation, pattern extrapolation,
// simulation experiments, model-order scans and sample-count queries.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "antex/experiment.hpp"
#include "antex/io.hpp"
#include "antex/metrics.hpp"
#include "antex/models.hpp"
#include "antex/sampling.hpp"
#include "antex/solver.hpp"

namespace {

using namespace antex;

struct ModelFlags {
  std::string family = "rect";
  int rows = 3;
  int cols = 3;
  int elements = 4;
  double max_spacing = 0.5;
  double coord_bound = 0.5;

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", family, "antenna family: rect|general|horn|dish")
        ->required();
    cmd->add_option("--rows", rows, "rect rows");
    cmd->add_option("--cols", cols, "rect cols");
    cmd->add_option("--elements", elements, "general-array element count");
    cmd->add_option("--max-spacing", max_spacing, "rect spacing bound");
    cmd->add_option("--coord-bound", coord_bound, "general coordinate bound");
  }

  DesignSpaceModel build() const {
    if (family == "rect") return make_rect_array_model(rows, cols, max_spacing);
    if (family == "general")
      return make_general_array_model(elements, coord_bound);
    if (family == "horn") return make_horn_model();
    if (family == "dish") return make_dish_model();
    throw ConfigError("model", "expected rect|general|horn|dish, got '" + family + "'");
  }
};

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(field, "'" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(field, "empty list");
  return out;
}

Eigen::VectorXd default_config(const DesignSpaceModel& model) {
  Eigen::VectorXd x(model.config_dim);
  for (int i = 0; i < model.config_dim; ++i)
    x[i] = 0.5 * (model.config_bounds[i][0] + model.config_bounds[i][1]);
  return x;
}

void attach_solver_flags(CLI::App* cmd, SolverParams* params,
                         std::string* scheme, std::string* constraint) {
  cmd->add_option("--iterations", params->max_iterations, "solver iterations");
  cmd->add_option("--restarts", params->restarts, "random restarts");
  cmd->add_option("--scheme", *scheme, "grid scheme: auto|factorial3|compass");
  cmd->add_option("--constraint", *constraint, "excitation constraint: unit|free");
  cmd->add_option("--tol", params->convergence_tol, "relative residual tolerance");
}

void apply_solver_flags(SolverParams* params, const std::string& scheme,
                        const std::string& constraint) {
  if (scheme == "factorial3")
    params->grid_scheme = GridScheme::Factorial3;
  else if (scheme == "compass")
    params->grid_scheme = GridScheme::Compass;
  else if (scheme != "auto")
    throw ConfigError("scheme", "expected auto|factorial3|compass");
  if (constraint == "unit")
    params->excitation_constraint = ExcitationConstraint::UnitNorm;
  else if (constraint == "free")
    params->excitation_constraint = ExcitationConstraint::Unconstrained;
  else
    throw ConfigError("constraint", "expected unit|free");
}

int run(int argc, char** argv) {
  CLI::App app{"knowledge-based antenna pattern extrapolation"};
  app.require_subcommand(1);

  // ---- simulate -----------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "evaluate a forward model at given directions");
  ModelFlags sim_model;
  sim_model.attach(simulate);
  std::string sim_config, sim_excitation, sim_az = "0", sim_el = "0";
  std::string sim_kind = "complex", sim_format = "csv", sim_out;
  simulate->add_option("--config", sim_config,
                       "configuration values, comma separated (default: box midpoint)");
  simulate->add_option("--excitation", sim_excitation,
                       "excitation as re:im pairs, comma separated (default: all ones)");
  simulate->add_option("--az", sim_az, "azimuths in radians, comma separated");
  simulate->add_option("--el", sim_el, "elevations in radians, comma separated");
  simulate->add_option("--kind", sim_kind, "complex|mag|db");
  simulate->add_option("--format", sim_format, "csv|json");
  simulate->add_option("--out", sim_out, "write output to file instead of stdout");

  // ---- extrapolate --------------------------------------------------------
  auto* extrap = app.add_subcommand(
      "extrapolate", "fit a design to a sampled pattern file");
  ModelFlags ext_model;
  ext_model.attach(extrap);
  std::string ext_pattern, ext_queries, ext_out = "result.json";
  std::string ext_scheme = "auto", ext_constraint = "unit";
  SolverParams ext_params;
  std::uint64_t ext_seed = 1;
  extrap->add_option("--pattern", ext_pattern, "sampled pattern JSON file")
      ->required();
  extrap->add_option("--queries", ext_queries,
                     "JSON file with query points for prediction");
  extrap->add_option("--out", ext_out, "result JSON path");
  extrap->add_option("--seed", ext_seed, "solver seed");
  attach_solver_flags(extrap, &ext_params, &ext_scheme, &ext_constraint);

  // ---- experiment ---------------------------------------------------------
  auto* exper = app.add_subcommand("experiment", "run a simulation study");
  std::string exper_file, exper_out;
  exper->add_option("config", exper_file, "experiment config file")->required();
  exper->add_option("--out", exper_out, "override output directory");

  // ---- order-scan ---------------------------------------------------------
  auto* scan = app.add_subcommand(
      "order-scan", "scan rectangular-array shapes against a pattern file");
  std::string scan_pattern, scan_out, scan_scheme = "auto", scan_constraint = "unit";
  int scan_max_rows = 5, scan_max_cols = 5;
  double scan_spacing = 0.5;
  SolverParams scan_params;
  std::uint64_t scan_seed = 1;
  scan->add_option("--pattern", scan_pattern, "sampled pattern JSON file")
      ->required();
  scan->add_option("--max-rows", scan_max_rows, "largest row count");
  scan->add_option("--max-cols", scan_max_cols, "largest column count");
  scan->add_option("--max-spacing", scan_spacing, "rect spacing bound");
  scan->add_option("--out", scan_out, "write order_scan.csv here");
  scan->add_option("--seed", scan_seed, "solver seed");
  attach_solver_flags(scan, &scan_params, &scan_scheme, &scan_constraint);

  // ---- min-samples --------------------------------------------------------
  auto* mins = app.add_subcommand(
      "min-samples", "minimum sample count for injective inversion");
  ModelFlags min_model;
  min_model.attach(mins);
  std::string min_kind = "complex";
  mins->add_option("--kind", min_kind, "complex|mag|db");

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) {
    const DesignSpaceModel model = sim_model.build();
    Eigen::VectorXd config = default_config(model);
    if (!sim_config.empty()) {
      const auto vals = parse_number_list(sim_config, "config");
      if (static_cast<int>(vals.size()) != model.config_dim)
        throw ConfigError("config", "expected " + std::to_string(model.config_dim) +
                                        " values");
      config = Eigen::Map<const Eigen::VectorXd>(vals.data(),
                                                 static_cast<Eigen::Index>(vals.size()));
    }
    check_config(model, config);
    Eigen::VectorXcd excitation = Eigen::VectorXcd::Ones(model.excitation_dim);
    if (!sim_excitation.empty()) {
      std::vector<Complex> vals;
      std::stringstream ss(sim_excitation);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        try {
          if (colon == std::string::npos) {
            vals.emplace_back(std::stod(item), 0.0);
          } else {
            vals.emplace_back(std::stod(item.substr(0, colon)),
                              std::stod(item.substr(colon + 1)));
          }
        } catch (const std::exception&) {
          throw ConfigError("excitation", "'" + item + "' is not re:im");
        }
      }
      if (static_cast<int>(vals.size()) != model.excitation_dim)
        throw ConfigError("excitation",
                          "expected " + std::to_string(model.excitation_dim) +
                              " entries");
      excitation = Eigen::Map<const Eigen::VectorXcd>(
          vals.data(), static_cast<Eigen::Index>(vals.size()));
    }
    auto azs = parse_number_list(sim_az, "az");
    auto els = parse_number_list(sim_el, "el");
    if (azs.size() == 1 && els.size() > 1) azs.assign(els.size(), azs[0]);
    if (els.size() == 1 && azs.size() > 1) els.assign(azs.size(), els[0]);
    if (azs.size() != els.size())
      throw ConfigError("az", "az/el lists must have equal length");
    std::vector<SamplePoint> points;
    for (std::size_t i = 0; i < azs.size(); ++i)
      points.push_back(SamplePoint::far_field(Direction(azs[i], els[i])));
    const MeasurementKind kind = measurement_kind_from_string(sim_kind);
    const Eigen::VectorXcd values =
        measure(model.basis(config, points) * excitation, kind);

    std::ostringstream body;
    if (sim_format == "json") {
      body << "[";
      for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (i) body << ", ";
        if (kind == MeasurementKind::ComplexField)
          body << "[" << format_double(values[i].real()) << ", "
               << format_double(values[i].imag()) << "]";
        else
          body << format_double(values[i].real());
      }
      body << "]\n";
    } else if (sim_format == "csv") {
      for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (kind == MeasurementKind::ComplexField)
          body << format_complex(values[i]) << "\n";
        else
          body << format_double(values[i].real()) << "\n";
      }
    } else {
      throw ConfigError("format", "expected csv|json");
    }
    if (sim_out.empty())
      std::cout << body.str();
    else
      write_text_file(sim_out, body.str());
    return 0;
  }

  if (extrap->parsed()) {
    apply_solver_flags(&ext_params, ext_scheme, ext_constraint);
    const DesignSpaceModel model = ext_model.build();
    const SampledPattern observed = read_pattern_json(ext_pattern);
    std::vector<SamplePoint> queries;
    if (!ext_queries.empty()) queries = read_points_json(ext_queries);
    const ExtrapolationResult result =
        extrapolate(model, observed, queries, ext_params, ext_seed);
    write_result_json(ext_out, result);
    std::cout << "residual " << format_double(result.residual_history.back())
              << " after " << result.iterations_used << " iterations ("
              << (result.converged ? "converged" : "iteration limit") << ")\n";
    return 0;
  }

  if (exper->parsed()) {
    ExperimentConfig cfg = read_experiment_config(exper_file);
    if (!exper_out.empty()) cfg.out_dir = exper_out;
    const ExperimentResult result = run_experiment(cfg);
    if (cfg.order_scan)
      std::cout << "selected " << result.order.selected_rows << " rows x "
                << result.order.selected_cols << " cols\n";
    else
      std::cout << result.scatter.size() << " runs written\n";
    return 0;
  }

  if (scan->parsed()) {
    apply_solver_flags(&scan_params, scan_scheme, scan_constraint);
    const SampledPattern observed = read_pattern_json(scan_pattern);
    const OrderScanResult result =
        model_order_scan(observed, {1, scan_max_rows}, {1, scan_max_cols},
                         scan_params, scan_seed, scan_spacing);
    const std::string csv = order_scan_csv_text(result.table);
    if (scan_out.empty())
      std::cout << csv;
    else
      write_text_file(scan_out, csv);
    std::cout << "selected " << result.selected_rows << " rows x "
              << result.selected_cols << " cols\n";
    return 0;
  }

  if (mins->parsed()) {
    const DesignSpaceModel model = min_model.build();
    std::cout << min_sample_count(model, measurement_kind_from_string(min_kind))
              << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
