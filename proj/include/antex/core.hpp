#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "antex/rng.hpp"

// Conventions used throughout:
//   * all lengths are in wavelengths (lambda = 1, wavenumber k = 2*pi);
//   * azimuth is measured in the horizontal plane about the vertical axis,
//     elevation from the horizontal plane; boresight (0, 0) points along +y.

namespace antex {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

/// Error in a user-supplied file or CLI input; carries the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("field '" + field + "': " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Failure inside a numerical routine (eigensolver breakdown etc.).
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A point on the unit sphere.  Azimuth is normalized into [-pi, pi);
/// elevation must lie in [-pi/2, pi/2].
class Direction {
 public:
  Direction() = default;
  Direction(double azimuth, double elevation);

  double azimuth() const { return azimuth_; }
  double elevation() const { return elevation_; }

  /// (cos e sin a, cos e cos a, sin e); boresight (0,0) -> (0, 1, 0).
  Eigen::Vector3d unit_vector() const;

  static double normalize_azimuth(double a);

 private:
  double azimuth_ = 0.0;
  double elevation_ = 0.0;
};

/// Where a pattern value is measured: a far-field direction or a 3D
/// near-field position (in wavelengths).  Exactly one variant is set.
class SamplePoint {
 public:
  static SamplePoint far_field(const Direction& d) { return SamplePoint(d); }
  static SamplePoint near_field(const Eigen::Vector3d& p) {
    return SamplePoint(p);
  }

  bool is_far_field() const { return std::holds_alternative<Direction>(loc_); }
  const Direction& direction() const;
  const Eigen::Vector3d& position() const;

 private:
  explicit SamplePoint(const Direction& d) : loc_(d) {}
  explicit SamplePoint(const Eigen::Vector3d& p) : loc_(p) {}
  std::variant<Direction, Eigen::Vector3d> loc_;
};

std::vector<SamplePoint> to_far_field(std::span<const Direction> dirs);

/// What a single measurement carries: a complex field value (2 real
/// dimensions) or a magnitude in linear or dB units (1 real dimension).
enum class MeasurementKind { ComplexField, MagnitudeLinear, MagnitudeDb };

int value_dim(MeasurementKind kind);
std::string to_string(MeasurementKind kind);
MeasurementKind measurement_kind_from_string(const std::string& s);

/// Floor for dB magnitudes so nulls stay representable.
inline constexpr double kDbFloor = -300.0;

/// 20*log10|f|, floored at kDbFloor.
double field_db(Complex f);

/// Projects complex field values into the observation space of `kind`
/// (identity, |.| or dB of |.|; magnitudes are stored with zero imaginary
/// part so one vector type serves all kinds).
Eigen::VectorXcd measure(const Eigen::VectorXcd& field, MeasurementKind kind);

/// Sample points paired with measured values.  For magnitude kinds the
/// imaginary parts of `values` are zero.
struct SampledPattern {
  std::vector<SamplePoint> points;
  Eigen::VectorXcd values;
  MeasurementKind kind = MeasurementKind::ComplexField;

  void validate() const;  // sizes match, K >= 1
};

/// || measure(predicted_field) - observed.values ||_2
double pattern_misfit(const Eigen::VectorXcd& predicted_field,
                      const SampledPattern& observed);

/// Observed magnitudes in linear units (used by the magnitude-only fit).
Eigen::VectorXd observed_magnitudes(const SampledPattern& observed);

using Bounds = std::array<double, 2>;  // {lo, hi}, lo < hi

/// A named antenna family: a configuration box (real parameters, one bounds
/// interval per coordinate), an excitation dimension, and the linear-basis
/// map of its pattern.  Column n of `basis(x, points)` is the pattern of the
/// n-th unit excitation, so basis * a evaluates the full pattern map.
struct DesignSpaceModel {
  std::string name;
  int config_dim = 0;
  int excitation_dim = 0;
  std::vector<Bounds> config_bounds;
  std::function<Eigen::MatrixXcd(const Eigen::VectorXd&,
                                 std::span<const SamplePoint>)>
      basis;
  /// Draws a physically plausible configuration for truth randomization;
  /// defaults to uniform over the bounds box when unset.
  std::function<Eigen::VectorXd(Prng&)> draw_config;

  void validate() const;
};

/// Real dimension of the design space: config_dim + 2 * excitation_dim
/// (each complex excitation coordinate contributes two real dimensions).
int design_dim(const DesignSpaceModel& model);

/// Smallest K with K * value_dim(kind) > 2 * design_dim(model).
int min_sample_count(const DesignSpaceModel& model, MeasurementKind kind);
int min_sample_count(int design_dimension, MeasurementKind kind);

/// Checks size and bounds of a configuration vector.
void check_config(const DesignSpaceModel& model, const Eigen::VectorXd& x);

/// Uniform draw over the bounds box.
Eigen::VectorXd uniform_config(const DesignSpaceModel& model, Prng& rng);

/// basis(x, points) * a
Eigen::VectorXcd evaluate_pattern(const DesignSpaceModel& model,
                                  const Eigen::VectorXd& config,
                                  const Eigen::VectorXcd& excitation,
                                  std::span<const SamplePoint> points);

}  // namespace antex
