#include "antex/core.hpp"

#include <cmath>

namespace antex {

double Direction::normalize_azimuth(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("azimuth must be finite");
  // in-range values pass through bitwise, so negating an azimuth negates
  // the stored angle exactly (the mirror-symmetry guarantees rely on this)
  if (a >= -std::numbers::pi && a < std::numbers::pi) return a;
  double r = std::fmod(a + std::numbers::pi, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r - std::numbers::pi;
}

Direction::Direction(double azimuth, double elevation)
    : azimuth_(normalize_azimuth(azimuth)), elevation_(elevation) {
  constexpr double half_pi = std::numbers::pi / 2;
  if (!(elevation >= -half_pi && elevation <= half_pi))
    throw std::invalid_argument("elevation outside [-pi/2, pi/2]");
}

Eigen::Vector3d Direction::unit_vector() const {
  const double ce = std::cos(elevation_);
  return {ce * std::sin(azimuth_), ce * std::cos(azimuth_),
          std::sin(elevation_)};
}

const Direction& SamplePoint::direction() const {
  if (!is_far_field())
    throw std::invalid_argument("sample point is a near-field position");
  return std::get<Direction>(loc_);
}

const Eigen::Vector3d& SamplePoint::position() const {
  if (is_far_field())
    throw std::invalid_argument("sample point is a far-field direction");
  return std::get<Eigen::Vector3d>(loc_);
}

std::vector<SamplePoint> to_far_field(std::span<const Direction> dirs) {
  std::vector<SamplePoint> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) out.push_back(SamplePoint::far_field(d));
  return out;
}

int value_dim(MeasurementKind kind) {
  return kind == MeasurementKind::ComplexField ? 2 : 1;
}

std::string to_string(MeasurementKind kind) {
  switch (kind) {
    case MeasurementKind::ComplexField:
      return "complex";
    case MeasurementKind::MagnitudeLinear:
      return "mag";
    case MeasurementKind::MagnitudeDb:
      return "db";
  }
  return "complex";
}

MeasurementKind measurement_kind_from_string(const std::string& s) {
  if (s == "complex") return MeasurementKind::ComplexField;
  if (s == "mag") return MeasurementKind::MagnitudeLinear;
  if (s == "db") return MeasurementKind::MagnitudeDb;
  throw ConfigError("kind", "expected one of complex|mag|db, got '" + s + "'");
}

double field_db(Complex f) {
  const double m = std::abs(f);
  if (m <= 0) return kDbFloor;
  return std::max(20.0 * std::log10(m), kDbFloor);
}

Eigen::VectorXcd measure(const Eigen::VectorXcd& field, MeasurementKind kind) {
  switch (kind) {
    case MeasurementKind::ComplexField:
      return field;
    case MeasurementKind::MagnitudeLinear:
      return field.array().abs().matrix().cast<Complex>();
    case MeasurementKind::MagnitudeDb: {
      Eigen::VectorXcd out(field.size());
      for (Eigen::Index i = 0; i < field.size(); ++i) out[i] = field_db(field[i]);
      return out;
    }
  }
  return field;
}

void SampledPattern::validate() const {
  if (points.empty()) throw std::invalid_argument("pattern has no points");
  if (static_cast<Eigen::Index>(points.size()) != values.size())
    throw std::invalid_argument("pattern points/values length mismatch");
}

double pattern_misfit(const Eigen::VectorXcd& predicted_field,
                      const SampledPattern& observed) {
  if (predicted_field.size() != observed.values.size())
    throw std::invalid_argument("prediction/observation length mismatch");
  return (measure(predicted_field, observed.kind) - observed.values).norm();
}

Eigen::VectorXd observed_magnitudes(const SampledPattern& observed) {
  Eigen::VectorXd m(observed.values.size());
  switch (observed.kind) {
    case MeasurementKind::ComplexField:
    case MeasurementKind::MagnitudeLinear:
      for (Eigen::Index i = 0; i < m.size(); ++i)
        m[i] = std::abs(observed.values[i]);
      break;
    case MeasurementKind::MagnitudeDb:
      for (Eigen::Index i = 0; i < m.size(); ++i)
        m[i] = std::pow(10.0, observed.values[i].real() / 20.0);
      break;
  }
  return m;
}

void DesignSpaceModel::validate() const {
  if (config_dim < 0 || excitation_dim < 1)
    throw std::invalid_argument("model dimensions invalid");
  if (static_cast<int>(config_bounds.size()) != config_dim)
    throw std::invalid_argument("config_bounds size != config_dim");
  for (const auto& b : config_bounds)
    if (!(b[0] < b[1]))
      throw std::invalid_argument("config bound requires lo < hi");
  if (!basis) throw std::invalid_argument("model has no basis map");
}

int design_dim(const DesignSpaceModel& model) {
  return model.config_dim + 2 * model.excitation_dim;
}

int min_sample_count(int design_dimension, MeasurementKind kind) {
  // smallest K with K * dimV > 2 * dimD
  return (2 * design_dimension) / value_dim(kind) + 1;
}

int min_sample_count(const DesignSpaceModel& model, MeasurementKind kind) {
  return min_sample_count(design_dim(model), kind);
}

void check_config(const DesignSpaceModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.config_dim)
    throw std::invalid_argument("configuration has wrong dimension");
  for (int i = 0; i < model.config_dim; ++i) {
    if (!std::isfinite(x[i]) || x[i] < model.config_bounds[i][0] ||
        x[i] > model.config_bounds[i][1])
      throw std::invalid_argument("configuration coordinate out of bounds");
  }
}

Eigen::VectorXd uniform_config(const DesignSpaceModel& model, Prng& rng) {
  Eigen::VectorXd x(model.config_dim);
  for (int i = 0; i < model.config_dim; ++i)
    x[i] = rng.uniform(model.config_bounds[i][0], model.config_bounds[i][1]);
  return x;
}

Eigen::VectorXcd evaluate_pattern(const DesignSpaceModel& model,
                                  const Eigen::VectorXd& config,
                                  const Eigen::VectorXcd& excitation,
                                  std::span<const SamplePoint> points) {
  if (excitation.size() != model.excitation_dim)
    throw std::invalid_argument("excitation has wrong dimension");
  return model.basis(config, points) * excitation;
}

}  // namespace antex
