#include "antex/rng.hpp"

#include <cmath>
#include <numbers>

namespace antex {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer applied to a simple combiner.
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Prng::uniform() {
  // 53 random bits -> [0, 1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Prng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Prng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(t);
  has_cached_ = true;
  return r * std::cos(t);
}

std::complex<double> Prng::complex_normal() {
  const double s = std::numbers::sqrt2;
  const double re = normal() / s;
  const double im = normal() / s;
  return {re, im};
}

}  // namespace antex
