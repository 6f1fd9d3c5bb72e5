#include "trstat/bessel.hpp"

#include <cmath>
#include <numbers>

namespace trstat::bessel {
namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;
constexpr double kQuarterPi = std::numbers::pi / 4.0;

// Shared P0/Q0 asymptotic polynomials in y = (8/x)^2.
double p0(double y) {
  return 1.0 + y * (-0.1098628627e-2 + y * (0.2734510407e-4 +
               y * (-0.2073370639e-5 + y * 0.2093887211e-6)));
}

double q0(double y) {
  return -0.1562499995e-1 + y * (0.1430488765e-3 +
         y * (-0.6911147651e-5 + y * (0.7621095161e-6 -
         y * 0.934935152e-7)));
}

}  // namespace

double j0(double x) {
  const double ax = std::fabs(x);
  if (ax < 8.0) {
    const double y = x * x;
    const double num = 57568490574.0 + y * (-13362590354.0 + y * (651619640.7 +
                       y * (-11214424.18 + y * (77392.33017 + y * (-184.9052456)))));
    const double den = 57568490411.0 + y * (1029532985.0 + y * (9494680.718 +
                       y * (59272.64853 + y * (267.8532712 + y))));
    return num / den;
  }
  const double z = 8.0 / ax;
  const double y = z * z;
  const double phase = ax - kQuarterPi;
  return std::sqrt(kTwoOverPi / ax) *
         (std::cos(phase) * p0(y) - z * std::sin(phase) * q0(y));
}

double y0(double x) {
  if (x < 8.0) {
    const double y = x * x;
    const double num = -2957821389.0 + y * (7062834065.0 + y * (-512359803.6 +
                       y * (10879881.29 + y * (-86327.92757 + y * 228.4622733))));
    const double den = 40076544269.0 + y * (745249964.8 + y * (7189466.438 +
                       y * (47447.26470 + y * (226.1030244 + y))));
    return num / den + kTwoOverPi * j0(x) * std::log(x);
  }
  const double z = 8.0 / x;
  const double y = z * z;
  const double phase = x - kQuarterPi;
  return std::sqrt(kTwoOverPi / x) *
         (std::sin(phase) * p0(y) + z * std::cos(phase) * q0(y));
}

}  // namespace trstat::bessel
