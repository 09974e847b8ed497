#pragma once

#include <utility>

namespace antex {

/// Fresnel integrals C(x) = int_0^x cos(pi t^2 / 2) dt and
/// S(x) = int_0^x sin(pi t^2 / 2) dt, returned as {C, S}.
/// Absolute error is below 1e-8 for |x| <= 50 (in practice ~1e-10).
std::pair<double, double> fresnel(double x);

}  // namespace antex
