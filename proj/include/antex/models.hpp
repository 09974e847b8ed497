#pragma once

#include <span>
#include <vector>

#include "antex/core.hpp"

namespace antex {

/// Phased array with arbitrary element positions (wavelengths).
struct GeneralArrayConfig {
  std::vector<Eigen::Vector3d> positions;
};

/// Rectangular array with M rows and N cols in the xy-plane.  The first row
/// and column sit at the origin; only the remaining offsets are stored
/// (row_offsets = y_2..y_M, col_offsets = x_2..x_N).  Canonical configs have
/// nonnegative, nondecreasing offsets; build them via from_spacings.
struct RectArrayConfig {
  int rows = 1;
  int cols = 1;
  Eigen::VectorXd row_offsets;
  Eigen::VectorXd col_offsets;

  static RectArrayConfig from_spacings(int rows, int cols,
                                       const Eigen::VectorXd& row_spacings,
                                       const Eigen::VectorXd& col_spacings);
  void validate() const;
};

/// E-plane sectoral horn: aperture width (H-plane), mouth height (E-plane
/// aperture) and slant radius, all in wavelengths.  Geometric realizability
/// additionally requires mouth_height <= 2 * slant_radius; the pattern map
/// itself extends smoothly past that, which the solver relies on.
struct HornConfig {
  double width = 1.0;
  double mouth_height = 1.0;
  double slant_radius = 1.0;

  bool is_realizable() const {
    return width > 0 && mouth_height > 0 && slant_radius > 0 &&
           mouth_height <= 2.0 * slant_radius;
  }
};

/// Elliptically rimmed paraboloid reflector y = a x^2 + b z^2 with an
/// isotropic point feed.  radius_x / radius_z are the rim semi-axes.
struct DishConfig {
  double radius_x = 1.0;
  double radius_z = 1.0;
  double curv_a = 0.0;
  double curv_b = 0.0;
  Eigen::Vector3d feed{0.0, 1.0, 0.0};
};

/// One reflector surface sample: position and facet area (lambda^2).
struct Facet {
  Eigen::Vector3d point;
  double weight = 0.0;
};

/// Near-field pattern of a general array at 3D sample positions:
/// entry k = sum_m a_m exp(i 2 pi |x_m - s_k|).  No path-loss term.
Eigen::VectorXcd array_nearfield_pattern(const GeneralArrayConfig& config,
                                         const Eigen::VectorXcd& excitation,
                                         std::span<const SamplePoint> points);

/// Far-field pattern of a rectangular array:
/// value(phi, theta) = sum_jk a_jk exp(i 2 pi (y_j sin theta + x_k sin phi)).
/// Excitation is indexed row-major (j * cols + k).
Eigen::VectorXcd rect_array_pattern(const RectArrayConfig& config,
                                    const Eigen::VectorXcd& excitation,
                                    std::span<const Direction> dirs);

/// Separable aperture model of the E-plane horn, evaluated in closed form
/// through the Fresnel integrals:
///   E(theta) = (1 + cos theta)/2 *
///              int_{-b/2}^{b/2} exp(-i k y^2 / (2 rho)) exp(i k y sin theta) dy
///   H(phi)   = int_{-w/2}^{w/2} cos(pi x / w) exp(i k x sin phi) dx
/// value = a_1 * E(theta) * H(phi), k = 2 pi.  The E-field lies in the
/// elevation plane.
Eigen::VectorXcd eplane_horn_pattern(const HornConfig& config,
                                     const Eigen::VectorXcd& excitation,
                                     std::span<const Direction> dirs);

/// Polar facet grid over the elliptical rim, lifted onto the paraboloid.
/// n_angular * n_radial facets; for n_angular divisible by 4 the grid is
/// exactly symmetric under u -> -u and v -> -v (built by quadrant
/// mirroring), which the mirror-symmetry guarantees of dish_pattern use.
std::vector<Facet> reflector_grid(const DishConfig& config, int n_angular = 20,
                                  int n_radial = 10);

/// Phase-only ray sum over explicit facets:
/// value(u_hat) = a_1 * sum_i w_i exp(i 2 pi (|feed - r_i| - r_i . u_hat)).
Eigen::VectorXcd facet_sum_pattern(std::span<const Facet> facets,
                                   const Eigen::Vector3d& feed,
                                   const Eigen::VectorXcd& excitation,
                                   std::span<const Direction> dirs);

/// facet_sum_pattern over reflector_grid(config).
Eigen::VectorXcd dish_pattern(const DishConfig& config,
                              const Eigen::VectorXcd& excitation,
                              std::span<const Direction> dirs,
                              int n_angular = 20, int n_radial = 10);

// ---------------------------------------------------------------------------
// Design-space registry.  Configuration layouts:
//   general: element positions flattened (x1,y1,z1, x2,...), box +-coord_bound
//   rect:    adjacent row spacings (M-1) then column spacings (N-1), each in
//            [0, max_spacing]; offsets are their prefix sums, so canonical
//            ordering holds for every point of the box
//   horn:    (width, mouth_height, slant_radius) in [min_dim, max_dim]
//   dish:    (radius_x, radius_z, curv_a, curv_b, feed_x, feed_y, feed_z)
// ---------------------------------------------------------------------------

DesignSpaceModel make_general_array_model(int elements,
                                          double coord_bound = 0.5);
DesignSpaceModel make_rect_array_model(int rows, int cols,
                                       double max_spacing = 0.5);
DesignSpaceModel make_horn_model(double min_dim = 0.1, double max_dim = 6.0);
DesignSpaceModel make_dish_model(double min_radius = 0.5,
                                 double max_radius = 6.0,
                                 double max_curvature = 6.0,
                                 double feed_range = 6.0, int n_angular = 20,
                                 int n_radial = 10);

/// Rebuilds the typed config from a rect model's configuration vector.
RectArrayConfig rect_config_from_vector(int rows, int cols,
                                        const Eigen::VectorXd& x);

}  // namespace antex
