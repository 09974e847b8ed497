#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "antex/core.hpp"
#include "antex/fresnel.hpp"
#include "antex/metrics.hpp"
#include "antex/models.hpp"
#include "antex/sampling.hpp"
#include "antex/solver.hpp"

namespace py = pybind11;
using namespace antex;

namespace {

std::vector<SamplePoint> points_from_array(const Eigen::MatrixXd& pts) {
  std::vector<SamplePoint> out;
  out.reserve(static_cast<std::size_t>(pts.rows()));
  if (pts.cols() == 2) {
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
      out.push_back(SamplePoint::far_field(Direction(pts(i, 0), pts(i, 1))));
  } else if (pts.cols() == 3) {
    for (Eigen::Index i = 0; i < pts.rows(); ++i)
      out.push_back(SamplePoint::near_field(pts.row(i).transpose()));
  } else {
    throw std::invalid_argument(
        "points must be (az, el) pairs or 3D positions");
  }
  return out;
}

std::vector<Direction> dirs_from_array(const Eigen::MatrixXd& pts) {
  if (pts.cols() != 2)
    throw std::invalid_argument("directions must be (az, el) pairs");
  std::vector<Direction> out;
  out.reserve(static_cast<std::size_t>(pts.rows()));
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    out.emplace_back(pts(i, 0), pts(i, 1));
  return out;
}

SolverParams params_from_kwargs(int iterations, int restarts,
                                const std::string& scheme,
                                const std::string& constraint, double tol) {
  SolverParams p;
  p.max_iterations = iterations;
  p.restarts = restarts;
  if (scheme == "factorial3")
    p.grid_scheme = GridScheme::Factorial3;
  else if (scheme == "compass")
    p.grid_scheme = GridScheme::Compass;
  else if (scheme != "auto")
    throw std::invalid_argument("scheme must be auto|factorial3|compass");
  if (constraint == "unit")
    p.excitation_constraint = ExcitationConstraint::UnitNorm;
  else if (constraint == "free")
    p.excitation_constraint = ExcitationConstraint::Unconstrained;
  else
    throw std::invalid_argument("constraint must be unit|free");
  p.convergence_tol = tol;
  return p;
}

}  // namespace

PYBIND11_MODULE(_antex, m) {
  m.doc() = "knowledge-based antenna pattern extrapolation (C++ core)";

  py::class_<DesignSpaceModel>(m, "DesignSpaceModel")
      .def_readonly("name", &DesignSpaceModel::name)
      .def_readonly("config_dim", &DesignSpaceModel::config_dim)
      .def_readonly("excitation_dim", &DesignSpaceModel::excitation_dim)
      .def_property_readonly("config_bounds",
                             [](const DesignSpaceModel& self) {
                               return self.config_bounds;
                             })
      .def(
          "basis",
          [](const DesignSpaceModel& self, const Eigen::VectorXd& config,
             const Eigen::MatrixXd& points) {
            return self.basis(config, points_from_array(points));
          },
          py::arg("config"), py::arg("points"))
      .def(
          "pattern",
          [](const DesignSpaceModel& self, const Eigen::VectorXd& config,
             const Eigen::VectorXcd& excitation, const Eigen::MatrixXd& points) {
            return evaluate_pattern(self, config, excitation,
                                    points_from_array(points));
          },
          py::arg("config"), py::arg("excitation"), py::arg("points"));

  m.def("rect_array_model", &make_rect_array_model, py::arg("rows"),
        py::arg("cols"), py::arg("max_spacing") = 0.5);
  m.def("general_array_model", &make_general_array_model, py::arg("elements"),
        py::arg("coord_bound") = 0.5);
  m.def("horn_model", &make_horn_model, py::arg("min_dim") = 0.1,
        py::arg("max_dim") = 6.0);
  m.def("dish_model", &make_dish_model, py::arg("min_radius") = 0.5,
        py::arg("max_radius") = 6.0, py::arg("max_curvature") = 6.0,
        py::arg("feed_range") = 6.0, py::arg("n_angular") = 20,
        py::arg("n_radial") = 10);

  m.def("design_dim", &design_dim, py::arg("model"));
  m.def(
      "min_sample_count",
      [](const DesignSpaceModel& model, const std::string& kind) {
        return min_sample_count(model, measurement_kind_from_string(kind));
      },
      py::arg("model"), py::arg("kind") = "complex");

  m.def("fresnel", &fresnel, py::arg("x"), "Fresnel integrals (C(x), S(x))");

  m.def(
      "generate_samples",
      [](const std::string& kind, int count, std::uint64_t seed) {
        const auto dirs =
            generate_samples(sampling_spec_from_label(kind, count), seed);
        Eigen::MatrixXd out(static_cast<Eigen::Index>(dirs.size()), 2);
        for (std::size_t i = 0; i < dirs.size(); ++i) {
          out(static_cast<Eigen::Index>(i), 0) = dirs[i].azimuth();
          out(static_cast<Eigen::Index>(i), 1) = dirs[i].elevation();
        }
        return out;
      },
      py::arg("kind"), py::arg("count"), py::arg("seed") = 1,
      "Sample directions as an (n, 2) array of (azimuth, elevation); kind is "
      "azimuth|principal|blocks|random");

  m.def("add_noise", &add_noise, py::arg("values"), py::arg("sigma_rel"),
        py::arg("seed") = 1);

  m.def(
      "solve_excitation",
      [](const Eigen::MatrixXcd& mat, const Eigen::VectorXcd& p,
         const std::string& constraint) {
        const LsSolution sol = solve_excitation(
            mat, p,
            constraint == "free" ? ExcitationConstraint::Unconstrained
                                 : ExcitationConstraint::UnitNorm);
        return py::make_tuple(sol.excitation, sol.residual, sol.lambda);
      },
      py::arg("matrix"), py::arg("values"), py::arg("constraint") = "unit",
      "Returns (excitation, residual, lambda)");

  py::class_<ExtrapolationResult>(m, "ExtrapolationResult")
      .def_readonly("config", &ExtrapolationResult::config)
      .def_readonly("excitation", &ExtrapolationResult::excitation)
      .def_readonly("residual_history", &ExtrapolationResult::residual_history)
      .def_readonly("predicted", &ExtrapolationResult::predicted)
      .def_readonly("converged", &ExtrapolationResult::converged)
      .def_readonly("iterations_used", &ExtrapolationResult::iterations_used)
      .def_readonly("undersampled", &ExtrapolationResult::undersampled)
      .def_property_readonly("residual", [](const ExtrapolationResult& r) {
        return r.residual_history.back();
      });

  m.def(
      "extrapolate",
      [](const DesignSpaceModel& model, const Eigen::MatrixXd& points,
         const Eigen::VectorXcd& values, const std::string& kind,
         const Eigen::MatrixXd& queries, int iterations, int restarts,
         const std::string& scheme, const std::string& constraint, double tol,
         std::uint64_t seed) {
        SampledPattern observed;
        observed.points = points_from_array(points);
        observed.values = values;
        observed.kind = measurement_kind_from_string(kind);
        const auto qpts = queries.rows() > 0 ? points_from_array(queries)
                                             : std::vector<SamplePoint>{};
        return extrapolate(
            model, observed, qpts,
            params_from_kwargs(iterations, restarts, scheme, constraint, tol),
            seed);
      },
      py::arg("model"), py::arg("points"), py::arg("values"),
      py::arg("kind") = "complex", py::arg("queries") = Eigen::MatrixXd(0, 2),
      py::arg("iterations") = 10, py::arg("restarts") = 4,
      py::arg("scheme") = "auto", py::arg("constraint") = "unit",
      py::arg("tol") = 1e-6, py::arg("seed") = 1);

  m.def(
      "residual_error",
      [](const DesignSpaceModel& model, const Eigen::VectorXd& config,
         const Eigen::VectorXcd& excitation, const Eigen::MatrixXd& points,
         const Eigen::VectorXcd& values, const std::string& kind) {
        SampledPattern observed;
        observed.points = points_from_array(points);
        observed.values = values;
        observed.kind = measurement_kind_from_string(kind);
        return residual_error(model, config, excitation, observed);
      },
      py::arg("model"), py::arg("config"), py::arg("excitation"),
      py::arg("points"), py::arg("values"), py::arg("kind") = "complex");

  m.def(
      "model_order_scan",
      [](const Eigen::MatrixXd& points, const Eigen::VectorXcd& values,
         const std::string& kind, int max_rows, int max_cols, int iterations,
         int restarts, const std::string& scheme, const std::string& constraint,
         double tol, std::uint64_t seed, double max_spacing) {
        SampledPattern observed;
        observed.points = points_from_array(points);
        observed.values = values;
        observed.kind = measurement_kind_from_string(kind);
        const auto scan = model_order_scan(
            observed, {1, max_rows}, {1, max_cols},
            params_from_kwargs(iterations, restarts, scheme, constraint, tol),
            seed, max_spacing);
        py::list table;
        for (const auto& e : scan.table)
          table.append(py::make_tuple(e.rows, e.cols, e.min_residual, e.selected));
        return py::make_tuple(scan.selected_rows, scan.selected_cols, table);
      },
      py::arg("points"), py::arg("values"), py::arg("kind") = "complex",
      py::arg("max_rows") = 5, py::arg("max_cols") = 5,
      py::arg("iterations") = 10, py::arg("restarts") = 4,
      py::arg("scheme") = "auto", py::arg("constraint") = "unit",
      py::arg("tol") = 1e-6, py::arg("seed") = 1, py::arg("max_spacing") = 0.5,
      "Returns (selected_rows, selected_cols, [(rows, cols, residual, "
      "selected), ...])");

  m.def(
      "rect_array_pattern",
      [](int rows, int cols, const Eigen::VectorXd& row_spacings,
         const Eigen::VectorXd& col_spacings, const Eigen::VectorXcd& excitation,
         const Eigen::MatrixXd& dirs) {
        const auto cfg =
            RectArrayConfig::from_spacings(rows, cols, row_spacings, col_spacings);
        return rect_array_pattern(cfg, excitation, dirs_from_array(dirs));
      },
      py::arg("rows"), py::arg("cols"), py::arg("row_spacings"),
      py::arg("col_spacings"), py::arg("excitation"), py::arg("dirs"));

  m.def(
      "eplane_horn_pattern",
      [](double width, double mouth_height, double slant_radius,
         const Eigen::VectorXcd& excitation, const Eigen::MatrixXd& dirs) {
        return eplane_horn_pattern({width, mouth_height, slant_radius},
                                   excitation, dirs_from_array(dirs));
      },
      py::arg("width"), py::arg("mouth_height"), py::arg("slant_radius"),
      py::arg("excitation"), py::arg("dirs"));

  m.def(
      "dish_pattern",
      [](double radius_x, double radius_z, double curv_a, double curv_b,
         const Eigen::Vector3d& feed, const Eigen::VectorXcd& excitation,
         const Eigen::MatrixXd& dirs, int n_angular, int n_radial) {
        DishConfig cfg;
        cfg.radius_x = radius_x;
        cfg.radius_z = radius_z;
        cfg.curv_a = curv_a;
        cfg.curv_b = curv_b;
        cfg.feed = feed;
        return dish_pattern(cfg, excitation, dirs_from_array(dirs), n_angular,
                            n_radial);
      },
      py::arg("radius_x"), py::arg("radius_z"), py::arg("curv_a"),
      py::arg("curv_b"), py::arg("feed"), py::arg("excitation"),
      py::arg("dirs"), py::arg("n_angular") = 20, py::arg("n_radial") = 10);

  m.def(
      "array_nearfield_pattern",
      [](const Eigen::MatrixXd& positions, const Eigen::VectorXcd& excitation,
         const Eigen::MatrixXd& sample_positions) {
        GeneralArrayConfig cfg;
        for (Eigen::Index i = 0; i < positions.rows(); ++i)
          cfg.positions.push_back(positions.row(i).transpose());
        if (sample_positions.cols() != 3)
          throw std::invalid_argument("sample positions must be (n, 3)");
        return array_nearfield_pattern(cfg, excitation,
                                       points_from_array(sample_positions));
      },
      py::arg("positions"), py::arg("excitation"), py::arg("sample_positions"));
}
