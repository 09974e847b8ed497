#include "antex/models.hpp"

#include <cmath>

#include "antex/fresnel.hpp"

namespace antex {
namespace {

inline Complex cis(double x) { return {std::cos(x), std::sin(x)}; }

std::vector<Eigen::Vector3d> require_positions(
    std::span<const SamplePoint> points) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (p.is_far_field())
      throw std::invalid_argument(
          "near-field array model needs position sample points");
    out.push_back(p.position());
  }
  return out;
}

std::vector<Direction> require_directions(std::span<const SamplePoint> points) {
  std::vector<Direction> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.direction());
  return out;
}

// K x N matrix of exp(i 2 pi |x_m - s_k|).
Eigen::MatrixXcd nearfield_basis(const std::vector<Eigen::Vector3d>& elements,
                                 const std::vector<Eigen::Vector3d>& samples) {
  Eigen::MatrixXcd m(samples.size(), elements.size());
  for (Eigen::Index n = 0; n < m.cols(); ++n)
    for (Eigen::Index k = 0; k < m.rows(); ++k)
      m(k, n) = cis(kTwoPi * (elements[n] - samples[k]).norm());
  return m;
}

// Separable rect-array basis: entry(k, j*cols+c) splits into a row factor in
// sin(theta) and a column factor in sin(phi).
Eigen::MatrixXcd rect_basis(int rows, int cols,
                            const Eigen::VectorXd& row_offsets,
                            const Eigen::VectorXd& col_offsets,
                            std::span<const Direction> dirs) {
  const Eigen::Index k_count = static_cast<Eigen::Index>(dirs.size());
  Eigen::MatrixXcd m(k_count, static_cast<Eigen::Index>(rows) * cols);
  Eigen::VectorXcd row_f(rows), col_f(cols);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const double st = std::sin(dirs[k].elevation());
    const double sp = std::sin(dirs[k].azimuth());
    row_f[0] = 1.0;
    for (int j = 1; j < rows; ++j) row_f[j] = cis(kTwoPi * row_offsets[j - 1] * st);
    col_f[0] = 1.0;
    for (int c = 1; c < cols; ++c) col_f[c] = cis(kTwoPi * col_offsets[c - 1] * sp);
    for (int j = 0; j < rows; ++j)
      for (int c = 0; c < cols; ++c) m(k, j * cols + c) = row_f[j] * col_f[c];
  }
  return m;
}

// E-plane aperture integral in closed form.  Completing the square in
//   int_{-b/2}^{b/2} exp(-i k y^2/(2 rho)) exp(i k y s) dy,   k = 2 pi
// gives exp(i pi rho s^2) sqrt(rho/2) [ (C(t2)-C(t1)) - i (S(t2)-S(t1)) ]
// with t_{1,2} = (-+ b/2 - rho s) sqrt(2/rho).
Complex eplane_integral(double mouth_height, double slant_radius, double s) {
  const double scale = std::sqrt(2.0 / slant_radius);
  const double t1 = (-0.5 * mouth_height - slant_radius * s) * scale;
  const double t2 = (0.5 * mouth_height - slant_radius * s) * scale;
  const auto [c1, s1] = fresnel(t1);
  const auto [c2, s2] = fresnel(t2);
  const Complex f{c2 - c1, -(s2 - s1)};
  return cis(std::numbers::pi * slant_radius * s * s) *
         std::sqrt(slant_radius / 2.0) * f;
}

// H-plane aperture integral of a cosine taper:
//   int_{-w/2}^{w/2} cos(pi x / w) exp(i k x s) dx
//     = 2 pi w cos(t) / (pi^2 - 4 t^2),   t = pi w s
// (real; removable singularity at |t| = pi/2 with value w/2).
double hplane_integral(double width, double s) {
  const double t = std::fabs(std::numbers::pi * width * s);
  const double d = t - std::numbers::pi / 2;
  if (std::fabs(d) < 1e-6) {
    const double sinc = std::fabs(d) < 1e-12 ? 1.0 : std::sin(d) / d;
    return std::numbers::pi * width / 2 * sinc / (std::numbers::pi + d);
  }
  return 2 * std::numbers::pi * width * std::cos(t) /
         (std::numbers::pi * std::numbers::pi - 4 * t * t);
}

Complex horn_value(const HornConfig& cfg, const Direction& dir) {
  const double theta = dir.elevation();
  const double obliquity = 0.5 * (1.0 + std::cos(theta));
  const Complex e_plane =
      obliquity *
      eplane_integral(cfg.mouth_height, cfg.slant_radius, std::sin(theta));
  const double h_plane = hplane_integral(cfg.width, std::sin(dir.azimuth()));
  return e_plane * h_plane;
}

void check_horn(const HornConfig& cfg) {
  if (!(cfg.width > 0) || !(cfg.mouth_height > 0) || !(cfg.slant_radius > 0))
    throw std::invalid_argument("horn dimensions must be positive");
}

void check_dish(const DishConfig& cfg) {
  if (!(cfg.radius_x > 0) || !(cfg.radius_z > 0))
    throw std::invalid_argument("dish radii must be positive");
  if (cfg.curv_a < 0 || cfg.curv_b < 0)
    throw std::invalid_argument("dish curvatures must be nonnegative");
}

}  // namespace

RectArrayConfig RectArrayConfig::from_spacings(
    int rows, int cols, const Eigen::VectorXd& row_spacings,
    const Eigen::VectorXd& col_spacings) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("rows/cols must be >= 1");
  if (row_spacings.size() != rows - 1 || col_spacings.size() != cols - 1)
    throw std::invalid_argument("spacing vector length mismatch");
  RectArrayConfig cfg;
  cfg.rows = rows;
  cfg.cols = cols;
  cfg.row_offsets.resize(rows - 1);
  cfg.col_offsets.resize(cols - 1);
  double acc = 0;
  for (int j = 0; j + 1 < rows; ++j) {
    if (row_spacings[j] < 0) throw std::invalid_argument("negative row spacing");
    acc += row_spacings[j];
    cfg.row_offsets[j] = acc;
  }
  acc = 0;
  for (int c = 0; c + 1 < cols; ++c) {
    if (col_spacings[c] < 0) throw std::invalid_argument("negative col spacing");
    acc += col_spacings[c];
    cfg.col_offsets[c] = acc;
  }
  return cfg;
}

void RectArrayConfig::validate() const {
  if (rows < 1 || cols < 1) throw std::invalid_argument("rows/cols must be >= 1");
  if (row_offsets.size() != rows - 1 || col_offsets.size() != cols - 1)
    throw std::invalid_argument("offset vector length mismatch");
  for (Eigen::Index i = 0; i < row_offsets.size(); ++i)
    if (row_offsets[i] < (i == 0 ? 0.0 : row_offsets[i - 1]))
      throw std::invalid_argument("row offsets must be nonnegative nondecreasing");
  for (Eigen::Index i = 0; i < col_offsets.size(); ++i)
    if (col_offsets[i] < (i == 0 ? 0.0 : col_offsets[i - 1]))
      throw std::invalid_argument("col offsets must be nonnegative nondecreasing");
}

Eigen::VectorXcd array_nearfield_pattern(const GeneralArrayConfig& config,
                                         const Eigen::VectorXcd& excitation,
                                         std::span<const SamplePoint> points) {
  if (config.positions.empty())
    throw std::invalid_argument("array has no elements");
  if (excitation.size() != static_cast<Eigen::Index>(config.positions.size()))
    throw std::invalid_argument("excitation length != element count");
  return nearfield_basis(config.positions, require_positions(points)) *
         excitation;
}

Eigen::VectorXcd rect_array_pattern(const RectArrayConfig& config,
                                    const Eigen::VectorXcd& excitation,
                                    std::span<const Direction> dirs) {
  config.validate();
  if (excitation.size() !=
      static_cast<Eigen::Index>(config.rows) * config.cols)
    throw std::invalid_argument("excitation length != rows * cols");
  return rect_basis(config.rows, config.cols, config.row_offsets,
                    config.col_offsets, dirs) *
         excitation;
}

Eigen::VectorXcd eplane_horn_pattern(const HornConfig& config,
                                     const Eigen::VectorXcd& excitation,
                                     std::span<const Direction> dirs) {
  check_horn(config);
  if (excitation.size() != 1)
    throw std::invalid_argument("horn excitation must have length 1");
  Eigen::VectorXcd out(static_cast<Eigen::Index>(dirs.size()));
  for (Eigen::Index k = 0; k < out.size(); ++k)
    out[k] = excitation[0] * horn_value(config, dirs[k]);
  return out;
}

std::vector<Facet> reflector_grid(const DishConfig& config, int n_angular,
                                  int n_radial) {
  check_dish(config);
  if (n_angular < 3 || n_radial < 1)
    throw std::invalid_argument("reflector grid needs n_angular >= 3, n_radial >= 1");

  const double d_alpha = kTwoPi / n_angular;
  const double d_rho = 1.0 / n_radial;
  const double a = config.curv_a, b = config.curv_b;
  std::vector<Facet> facets;
  facets.reserve(static_cast<std::size_t>(n_angular) * n_radial);

  auto emit = [&](double u, double v, double rho) {
    const double y = a * u * u + b * v * v;
    const double du = 2 * a * u, dv = 2 * b * v;
    const double area = config.radius_x * config.radius_z * rho * d_rho *
                        d_alpha * std::sqrt(1.0 + du * du + dv * dv);
    facets.push_back({{u, y, v}, area});
  };

  for (int i = 0; i < n_radial; ++i) {
    const double rho = (i + 0.5) * d_rho;
    if (n_angular % 4 == 0) {
      // Quadrant mirroring keeps the grid bitwise symmetric in u and v.
      for (int q = 0; q < n_angular / 4; ++q) {
        const double alpha = (q + 0.5) * d_alpha;  // in (0, pi/2)
        const double u = config.radius_x * rho * std::cos(alpha);
        const double v = config.radius_z * rho * std::sin(alpha);
        emit(u, v, rho);
        emit(-u, v, rho);
        emit(-u, -v, rho);
        emit(u, -v, rho);
      }
    } else {
      for (int j = 0; j < n_angular; ++j) {
        const double alpha = (j + 0.5) * d_alpha;
        emit(config.radius_x * rho * std::cos(alpha),
             config.radius_z * rho * std::sin(alpha), rho);
      }
    }
  }
  return facets;
}

Eigen::VectorXcd facet_sum_pattern(std::span<const Facet> facets,
                                   const Eigen::Vector3d& feed,
                                   const Eigen::VectorXcd& excitation,
                                   std::span<const Direction> dirs) {
  if (excitation.size() != 1)
    throw std::invalid_argument("facet sum excitation must have length 1");
  const std::size_t n = facets.size();
  std::vector<double> feed_dist(n);
  for (std::size_t i = 0; i < n; ++i)
    feed_dist[i] = (feed - facets[i].point).norm();

  Eigen::VectorXcd out(static_cast<Eigen::Index>(dirs.size()));
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const Eigen::Vector3d u = dirs[k].unit_vector();
    auto term = [&](std::size_t i) {
      return facets[i].weight *
             cis(kTwoPi * (feed_dist[i] - facets[i].point.dot(u)));
    };
    Complex acc{0, 0};
    if (n % 4 == 0) {
      // Grouped accumulation: mirror images of a quadrant-built grid land in
      // the same group, so u/v mirror symmetry survives rounding exactly.
      for (std::size_t i = 0; i < n; i += 4)
        acc += (term(i) + term(i + 1)) + (term(i + 2) + term(i + 3));
    } else {
      for (std::size_t i = 0; i < n; ++i) acc += term(i);
    }
    out[k] = excitation[0] * acc;
  }
  return out;
}

Eigen::VectorXcd dish_pattern(const DishConfig& config,
                              const Eigen::VectorXcd& excitation,
                              std::span<const Direction> dirs, int n_angular,
                              int n_radial) {
  const auto facets = reflector_grid(config, n_angular, n_radial);
  return facet_sum_pattern(facets, config.feed, excitation, dirs);
}

// --------------------------- model registry -------------------------------

DesignSpaceModel make_general_array_model(int elements, double coord_bound) {
  if (elements < 1) throw std::invalid_argument("elements must be >= 1");
  DesignSpaceModel m;
  m.name = "general";
  m.config_dim = 3 * elements;
  m.excitation_dim = elements;
  m.config_bounds.assign(m.config_dim, Bounds{-coord_bound, coord_bound});
  m.basis = [elements](const Eigen::VectorXd& x,
                       std::span<const SamplePoint> points) {
    std::vector<Eigen::Vector3d> pos(elements);
    for (int e = 0; e < elements; ++e)
      pos[e] = Eigen::Vector3d(x[3 * e], x[3 * e + 1], x[3 * e + 2]);
    return nearfield_basis(pos, require_positions(points));
  };
  return m;
}

DesignSpaceModel make_rect_array_model(int rows, int cols, double max_spacing) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("rows/cols must be >= 1");
  if (!(max_spacing > 0)) throw std::invalid_argument("max_spacing must be > 0");
  DesignSpaceModel m;
  m.name = "rect";
  m.config_dim = rows + cols - 2;
  m.excitation_dim = rows * cols;
  m.config_bounds.assign(m.config_dim, Bounds{0.0, max_spacing});
  m.basis = [rows, cols](const Eigen::VectorXd& x,
                         std::span<const SamplePoint> points) {
    const RectArrayConfig cfg = rect_config_from_vector(rows, cols, x);
    return rect_basis(rows, cols, cfg.row_offsets, cfg.col_offsets,
                      require_directions(points));
  };
  return m;
}

RectArrayConfig rect_config_from_vector(int rows, int cols,
                                        const Eigen::VectorXd& x) {
  if (x.size() != rows + cols - 2)
    throw std::invalid_argument("rect config vector has wrong length");
  return RectArrayConfig::from_spacings(rows, cols, x.head(rows - 1),
                                        x.tail(cols - 1));
}

DesignSpaceModel make_horn_model(double min_dim, double max_dim) {
  if (!(min_dim > 0 && min_dim < max_dim))
    throw std::invalid_argument("horn dimension bounds invalid");
  DesignSpaceModel m;
  m.name = "horn";
  m.config_dim = 3;
  m.excitation_dim = 1;
  m.config_bounds.assign(3, Bounds{min_dim, max_dim});
  m.basis = [](const Eigen::VectorXd& x, std::span<const SamplePoint> points) {
    const HornConfig cfg{x[0], x[1], x[2]};
    check_horn(cfg);
    const auto dirs = require_directions(points);
    Eigen::MatrixXcd mat(static_cast<Eigen::Index>(dirs.size()), 1);
    for (Eigen::Index k = 0; k < mat.rows(); ++k)
      mat(k, 0) = horn_value(cfg, dirs[k]);
    return mat;
  };
  // Truth draws respect geometric realizability (mouth <= 2 * slant).
  m.draw_config = [min_dim, max_dim](Prng& rng) {
    Eigen::VectorXd x(3);
    x[0] = rng.uniform(min_dim, max_dim);
    x[2] = rng.uniform(min_dim, max_dim);
    x[1] = rng.uniform(min_dim, std::min(max_dim, 2.0 * x[2]));
    return x;
  };
  return m;
}

DesignSpaceModel make_dish_model(double min_radius, double max_radius,
                                 double max_curvature, double feed_range,
                                 int n_angular, int n_radial) {
  if (!(min_radius > 0 && min_radius < max_radius))
    throw std::invalid_argument("dish radius bounds invalid");
  DesignSpaceModel m;
  m.name = "dish";
  m.config_dim = 7;
  m.excitation_dim = 1;
  m.config_bounds = {Bounds{min_radius, max_radius},
                     Bounds{min_radius, max_radius},
                     Bounds{0.0, max_curvature},
                     Bounds{0.0, max_curvature},
                     Bounds{-feed_range, feed_range},
                     Bounds{-feed_range, feed_range},
                     Bounds{-feed_range, feed_range}};
  m.basis = [n_angular, n_radial](const Eigen::VectorXd& x,
                                  std::span<const SamplePoint> points) {
    DishConfig cfg;
    cfg.radius_x = x[0];
    cfg.radius_z = x[1];
    cfg.curv_a = x[2];
    cfg.curv_b = x[3];
    cfg.feed = Eigen::Vector3d(x[4], x[5], x[6]);
    const auto dirs = require_directions(points);
    const auto facets = reflector_grid(cfg, n_angular, n_radial);
    Eigen::MatrixXcd mat(static_cast<Eigen::Index>(dirs.size()), 1);
    mat.col(0) = facet_sum_pattern(facets, cfg.feed, Eigen::VectorXcd::Ones(1),
                                   dirs);
    return mat;
  };
  // Feed drawn uniformly inside the ball of radius feed_range.
  m.draw_config = [min_radius, max_radius, max_curvature,
                   feed_range](Prng& rng) {
    Eigen::VectorXd x(7);
    x[0] = rng.uniform(min_radius, max_radius);
    x[1] = rng.uniform(min_radius, max_radius);
    x[2] = rng.uniform(0.0, max_curvature);
    x[3] = rng.uniform(0.0, max_curvature);
    Eigen::Vector3d f;
    do {
      f = {rng.uniform(-feed_range, feed_range),
           rng.uniform(-feed_range, feed_range),
           rng.uniform(-feed_range, feed_range)};
    } while (f.norm() > feed_range);
    x.tail(3) = f;
    return x;
  };
  return m;
}

}  // namespace antex
