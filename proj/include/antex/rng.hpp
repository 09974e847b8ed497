#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace antex {

/// Mixes two 64-bit values into a fresh seed (splitmix64 finalizer).
/// Derives independent per-trial / per-stage streams from a master seed, so
/// results do not depend on the order in which trials are executed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Deterministic random source.  std::mt19937_64 has a standard-pinned output
/// sequence; the distribution transforms are implemented here because the
/// standard-library ones are implementation-defined and would break
/// byte-identical reproduction across toolchains.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller; the paired value is cached.
  double normal();
  /// Circular complex normal with E|z|^2 = 1.
  std::complex<double> complex_normal();

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace antex
