#include "antex/fresnel.hpp"

#include <cmath>
#include <numbers>

namespace antex {
namespace {

// Power series
//   C(x) = x * sum_n (-1)^n q^{2n}   / ((2n)!   (4n+1)),  q = (pi/2) x^2
//   S(x) = x * sum_n (-1)^n q^{2n+1} / ((2n+1)! (4n+3))
// The largest term grows like e^q, so the usable range is limited by
// cancellation: double accumulation is good to ~1e-12 for |x| <= 2.5 and
// extended-precision accumulation to ~1e-9 for |x| <= 3.9.
template <typename Real>
std::pair<double, double> series(double x) {
  const Real q = static_cast<Real>(std::numbers::pi) / 2 * x * x;
  const Real q2 = q * q;
  Real uc = 1;      // (-1)^n q^{2n} / (2n)!
  Real us = q;      // (-1)^n q^{2n+1} / (2n+1)!
  Real sc = 0, ss = 0;
  for (int n = 0; n < 120; ++n) {
    sc += uc / (4 * n + 1);
    ss += us / (4 * n + 3);
    uc *= -q2 / Real((2 * n + 1) * (2 * n + 2));
    us *= -q2 / Real((2 * n + 2) * (2 * n + 3));
    if (std::abs(uc) < Real(1e-20) && std::abs(us) < Real(1e-20)) break;
  }
  return {static_cast<double>(x * sc), static_cast<double>(x * ss)};
}

// Auxiliary-function expansion for large |x|:
//   C(x) = 1/2 + f sin(w) - g cos(w),  S(x) = 1/2 - f cos(w) - g sin(w)
// with w = pi x^2 / 2 and the asymptotic series (z = pi x^2)
//   f = (1/(pi x))     sum_n (-1)^n (4n-1)!! / z^{2n}
//   g = (1/(pi x z))   sum_n (-1)^n (4n+1)!! / z^{2n}
// truncated at the smallest term.  Below |x| ~ 3.9 the smallest term
// exceeds the 1e-8 budget, hence the series branch above.
std::pair<double, double> asymptotic(double x) {
  const double z = std::numbers::pi * x * x;
  const double z2 = z * z;
  double tf = 1.0, tg = 1.0;
  double f = 0.0, g = 0.0;
  double sign = 1.0;
  for (int n = 0; n < 24; ++n) {
    f += sign * tf;
    g += sign * tg;
    const double nf = tf * ((4 * n + 1) * (4 * n + 3)) / z2;
    const double ng = tg * ((4 * n + 3) * (4 * n + 5)) / z2;
    if (nf >= tf || ng >= tg) break;  // past the optimal truncation
    tf = nf;
    tg = ng;
    sign = -sign;
    if (tf < 1e-14 && tg < 1e-14) {
      f += sign * tf;
      g += sign * tg;
      break;
    }
  }
  f /= std::numbers::pi * x;
  g /= std::numbers::pi * x * z;
  const double w = std::numbers::pi / 2 * x * x;
  const double sw = std::sin(w), cw = std::cos(w);
  return {0.5 + f * sw - g * cw, 0.5 - f * cw - g * sw};
}

}  // namespace

std::pair<double, double> fresnel(double x) {
  const double ax = std::fabs(x);
  std::pair<double, double> cs;
  if (ax <= 2.5)
    cs = series<double>(ax);
  else if (ax <= 3.9)
    cs = series<long double>(ax);
  else
    cs = asymptotic(ax);
  if (x < 0) return {-cs.first, -cs.second};  // both integrals are odd
  return cs;
}

}  // namespace antex
