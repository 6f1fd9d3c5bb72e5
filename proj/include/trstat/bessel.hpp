#pragma once

namespace trstat::bessel {

// Zeroth-order Bessel functions of the first and second kind for x > 0.
// Rational approximations for x < 8, Hankel asymptotic form above; absolute
// error stays below 1e-7 on (0, inf).
double j0(double x);
double y0(double x);

}  // namespace trstat::bessel
