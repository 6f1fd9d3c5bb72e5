#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "trstat/bessel.hpp"

namespace bes = trstat::bessel;

TEST_CASE("J0 and Y0 at unit argument") {
  CHECK(std::abs(bes::j0(1.0) - 0.7651976866) < 1e-7);
  CHECK(std::abs(bes::y0(1.0) - 0.0882569642) < 1e-7);
  CHECK(oracle::bessel_j0(1.0) == doctest::Approx(0.7651976866).epsilon(1e-10));
  CHECK(oracle::bessel_y0(1.0) == doctest::Approx(0.0882569642).epsilon(1e-9));
}

TEST_CASE("J0 at 5") {
  CHECK(std::abs(bes::j0(5.0) - (-0.1775967713)) < 1e-8);
}

TEST_CASE("matches the multiprecision series oracle on [1e-3, 50]") {
  double worst_j = 0.0, worst_y = 0.0;
  for (int i = 0; i <= 600; ++i) {
    // Log-spaced below 1, linear above.
    const double x = i < 100 ? 1e-3 * std::pow(1e3, i / 100.0) : 1.0 + 49.0 * (i - 100) / 500.0;
    worst_j = std::max(worst_j, std::abs(bes::j0(x) - oracle::bessel_j0(x)));
    worst_y = std::max(worst_y, std::abs(bes::y0(x) - oracle::bessel_y0(x)));
  }
  CHECK(worst_j < 1e-7);
  CHECK(worst_y < 1e-7);
}

TEST_CASE("both sides of the approximation split agree") {
  CHECK(std::abs(bes::j0(8.0 - 1e-12) - bes::j0(8.0 + 1e-12)) < 1e-7);
  CHECK(std::abs(bes::y0(8.0 - 1e-12) - bes::y0(8.0 + 1e-12)) < 1e-7);
}

TEST_CASE("even in the argument for J0") {
  for (double x : {0.3, 2.0, 11.0}) CHECK(bes::j0(-x) == doctest::Approx(bes::j0(x)));
}
