#pragma once

#include <string>
#include <vector>

#include "antex/core.hpp"

namespace antex {

/// Default cap on the random block elevations (10 degrees): small enough to
/// be mechanically plausible, large enough to break planar symmetry.
inline constexpr double kDefaultMaxBlockElevation = std::numbers::pi / 18.0;

enum class SamplingKind { AzimuthOnly, PrincipalPlanes, AzimuthBlocks, RandomSphere };

/// One of the four sample-point layouts.  Only the fields of the active
/// kind are meaningful; build via the named factories.
struct SamplingSpec {
  SamplingKind kind = SamplingKind::RandomSphere;
  int count = 200;        // AzimuthOnly / RandomSphere
  int az_count = 360;     // PrincipalPlanes
  int el_count = 181;     // PrincipalPlanes
  int block_count = 8;    // AzimuthBlocks
  int block_len = 25;     // AzimuthBlocks
  double max_elevation = kDefaultMaxBlockElevation;  // AzimuthBlocks, (0, pi/2)

  static SamplingSpec azimuth_only(int count);
  static SamplingSpec principal_planes(int az_count, int el_count);
  static SamplingSpec azimuth_blocks(int block_count, int block_len,
                                     double max_elevation = kDefaultMaxBlockElevation);
  static SamplingSpec random_sphere(int count);

  void validate() const;
  int sample_count() const;
  std::string label() const;  // azimuth | principal | blocks | random
};

SamplingSpec sampling_spec_from_label(const std::string& label, int count);

/// Generates the layout's directions, deterministically per seed.
///   AzimuthOnly     evenly spaced azimuths starting at -pi, elevation 0
///   PrincipalPlanes full azimuth cut at elevation 0, then a full elevation
///                   cut (inclusive of the poles) at azimuth 0
///   AzimuthBlocks   contiguous runs of an evenly spaced azimuth sweep, each
///                   run at an independent random elevation in (0, max]
///   RandomSphere    uniform w.r.t. surface area
std::vector<Direction> generate_samples(const SamplingSpec& spec,
                                        std::uint64_t seed);

/// Adds independent complex Gaussian noise with per-component standard
/// deviation sigma_rel * RMS(values) / sqrt(2).  sigma_rel = 0 returns the
/// input unchanged; deterministic per seed.
Eigen::VectorXcd add_noise(const Eigen::VectorXcd& values, double sigma_rel,
                           std::uint64_t seed);

}  // namespace antex
