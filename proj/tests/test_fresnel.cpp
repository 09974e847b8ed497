#include <doctest.h>

#include <cmath>
#include <numbers>

#include "antex/fresnel.hpp"
#include "oracles.hpp"

using namespace antex;

namespace {

std::pair<double, double> fresnel_oracle(double x, double tol = 1e-11) {
  const double c = oracles::integrate(
      [](double t) { return std::cos(std::numbers::pi / 2 * t * t); }, 0.0, x, tol);
  const double s = oracles::integrate(
      [](double t) { return std::sin(std::numbers::pi / 2 * t * t); }, 0.0, x, tol);
  return {c, s};
}

}  // namespace

TEST_CASE("fresnel at zero") {
  const auto [c, s] = fresnel(0.0);
  CHECK(c == 0.0);
  CHECK(s == 0.0);
}

TEST_CASE("fresnel odd symmetry is exact") {
  for (const double x : {0.3, 1.3, 2.7, 3.5, 7.0, 24.0}) {
    const auto [cp, sp] = fresnel(x);
    const auto [cn, sn] = fresnel(-x);
    CHECK(cn == -cp);
    CHECK(sn == -sp);
  }
}

TEST_CASE("fresnel(1) matches the quadrature oracle to 1e-8") {
  const auto [c, s] = fresnel(1.0);
  const auto [co, so] = fresnel_oracle(1.0);
  CHECK(std::fabs(c - co) <= 1e-8);
  CHECK(std::fabs(s - so) <= 1e-8);
}

TEST_CASE("fresnel matches the quadrature oracle over |x| <= 50") {
  // dense near the series/asymptotic crossover, sparse elsewhere
  std::vector<double> xs;
  for (double x = 0.1; x <= 2.4; x += 0.23) xs.push_back(x);
  for (double x = 2.4; x <= 4.4; x += 0.1) xs.push_back(x);
  for (double x = 5.0; x <= 12.0; x += 1.7) xs.push_back(x);
  for (const double x : {20.0, 33.0, 41.5, 50.0}) xs.push_back(x);
  for (const double x : xs) {
    const auto [c, s] = fresnel(x);
    const auto [co, so] = fresnel_oracle(x);
    INFO("x = ", x);
    CHECK(std::fabs(c - co) <= 1e-8);
    CHECK(std::fabs(s - so) <= 1e-8);
  }
}

TEST_CASE("fresnel approaches 1/2 at large argument") {
  const auto [c, s] = fresnel(50.0);
  CHECK(std::fabs(c - 0.5) <= 1.0 / (std::numbers::pi * 50.0) + 1e-6);
  CHECK(std::fabs(s - 0.5) <= 1.0 / (std::numbers::pi * 50.0) + 1e-6);
}
