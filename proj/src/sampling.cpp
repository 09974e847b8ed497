#include "antex/sampling.hpp"

#include <cmath>

namespace antex {

SamplingSpec SamplingSpec::azimuth_only(int count) {
  SamplingSpec s;
  s.kind = SamplingKind::AzimuthOnly;
  s.count = count;
  s.validate();
  return s;
}

SamplingSpec SamplingSpec::principal_planes(int az_count, int el_count) {
  SamplingSpec s;
  s.kind = SamplingKind::PrincipalPlanes;
  s.az_count = az_count;
  s.el_count = el_count;
  s.validate();
  return s;
}

SamplingSpec SamplingSpec::azimuth_blocks(int block_count, int block_len,
                                          double max_elevation) {
  SamplingSpec s;
  s.kind = SamplingKind::AzimuthBlocks;
  s.block_count = block_count;
  s.block_len = block_len;
  s.max_elevation = max_elevation;
  s.validate();
  return s;
}

SamplingSpec SamplingSpec::random_sphere(int count) {
  SamplingSpec s;
  s.kind = SamplingKind::RandomSphere;
  s.count = count;
  s.validate();
  return s;
}

void SamplingSpec::validate() const {
  switch (kind) {
    case SamplingKind::AzimuthOnly:
    case SamplingKind::RandomSphere:
      if (count < 1) throw std::invalid_argument("sample count must be >= 1");
      break;
    case SamplingKind::PrincipalPlanes:
      if (az_count < 1 || el_count < 1)
        throw std::invalid_argument("cut counts must be >= 1");
      break;
    case SamplingKind::AzimuthBlocks:
      if (block_count < 1 || block_len < 1)
        throw std::invalid_argument("block counts must be >= 1");
      if (!(max_elevation > 0 && max_elevation < std::numbers::pi / 2))
        throw std::invalid_argument("max_elevation must be in (0, pi/2)");
      break;
  }
}

int SamplingSpec::sample_count() const {
  switch (kind) {
    case SamplingKind::AzimuthOnly:
    case SamplingKind::RandomSphere:
      return count;
    case SamplingKind::PrincipalPlanes:
      return az_count + el_count;
    case SamplingKind::AzimuthBlocks:
      return block_count * block_len;
  }
  return 0;
}

std::string SamplingSpec::label() const {
  switch (kind) {
    case SamplingKind::AzimuthOnly:
      return "azimuth";
    case SamplingKind::PrincipalPlanes:
      return "principal";
    case SamplingKind::AzimuthBlocks:
      return "blocks";
    case SamplingKind::RandomSphere:
      return "random";
  }
  return "random";
}

SamplingSpec sampling_spec_from_label(const std::string& label, int count) {
  if (label == "azimuth") return SamplingSpec::azimuth_only(count);
  if (label == "principal") {
    // count is the azimuth cut length; the elevation cut spans pole to pole
    // at roughly the same angular step.
    const int el = count / 2 + 1;
    return SamplingSpec::principal_planes(count, el);
  }
  if (label == "blocks") {
    SamplingSpec s = SamplingSpec::azimuth_blocks(8, std::max(1, count / 8));
    return s;
  }
  if (label == "random") return SamplingSpec::random_sphere(count);
  throw ConfigError("sampling.kind",
                    "expected azimuth|principal|blocks|random, got '" + label + "'");
}

std::vector<Direction> generate_samples(const SamplingSpec& spec,
                                        std::uint64_t seed) {
  spec.validate();
  std::vector<Direction> out;
  out.reserve(static_cast<std::size_t>(spec.sample_count()));
  switch (spec.kind) {
    case SamplingKind::AzimuthOnly: {
      const double step = kTwoPi / spec.count;
      for (int i = 0; i < spec.count; ++i)
        out.emplace_back(-std::numbers::pi + i * step, 0.0);
      break;
    }
    case SamplingKind::PrincipalPlanes: {
      const double az_step = kTwoPi / spec.az_count;
      for (int i = 0; i < spec.az_count; ++i)
        out.emplace_back(-std::numbers::pi + i * az_step, 0.0);
      if (spec.el_count == 1) {
        out.emplace_back(0.0, 0.0);
      } else {
        const double el_step = std::numbers::pi / (spec.el_count - 1);
        for (int i = 0; i < spec.el_count; ++i)
          out.emplace_back(0.0, -std::numbers::pi / 2 + i * el_step);
      }
      break;
    }
    case SamplingKind::AzimuthBlocks: {
      Prng rng(mix_seed(seed, 0x626c6f636bULL));
      const int total = spec.block_count * spec.block_len;
      const double step = kTwoPi / total;
      for (int b = 0; b < spec.block_count; ++b) {
        // uniform in (0, max]: 1 - uniform() lies in (0, 1]
        const double el = spec.max_elevation * (1.0 - rng.uniform());
        for (int i = 0; i < spec.block_len; ++i) {
          const int idx = b * spec.block_len + i;
          out.emplace_back(-std::numbers::pi + idx * step, el);
        }
      }
      break;
    }
    case SamplingKind::RandomSphere: {
      Prng rng(mix_seed(seed, 0x7370686572ULL));
      for (int i = 0; i < spec.count; ++i) {
        const double az = -std::numbers::pi + kTwoPi * rng.uniform();
        // area-preserving: sin(elevation) uniform in [-1, 1)
        const double el = std::asin(2.0 * rng.uniform() - 1.0);
        out.emplace_back(az, el);
      }
      break;
    }
  }
  return out;
}

Eigen::VectorXcd add_noise(const Eigen::VectorXcd& values, double sigma_rel,
                           std::uint64_t seed) {
  if (values.size() == 0) throw std::invalid_argument("values must be nonempty");
  if (sigma_rel < 0) throw std::invalid_argument("sigma_rel must be >= 0");
  if (sigma_rel == 0.0) return values;
  const double rms =
      std::sqrt(values.squaredNorm() / static_cast<double>(values.size()));
  const double sd = sigma_rel * rms / std::numbers::sqrt2;
  Prng rng(mix_seed(seed, 0x6e6f697365ULL));
  Eigen::VectorXcd out(values.size());
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = values[i] + Complex{sd * rng.normal(), sd * rng.normal()};
  return out;
}

}  // namespace antex
