#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the library's own numerics.

#include <cmath>
#include <complex>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "trstat/types.hpp"

namespace oracle {

using trstat::cplx;
using trstat::CMatrix;
using trstat::CVector;
using big = boost::multiprecision::cpp_bin_float_50;

/// J0 by its power series in 50-digit arithmetic.
inline double bessel_j0(double x) {
  const big q = big(x) * big(x) / 4;
  big term = 1, sum = 1;
  for (int k = 1; k < 400; ++k) {
    term *= -q / (big(k) * big(k));
    sum += term;
    if (abs(term) < big("1e-40") * (1 + abs(sum)) && k > q) break;
  }
  return static_cast<double>(sum);
}

/// Y0 = (2/pi) [ln(x/2) + gamma] J0 + (2/pi) sum (-1)^{k+1} H_k (x^2/4)^k / (k!)^2.
inline double bessel_y0(double x) {
  const big q = big(x) * big(x) / 4;
  const big pi = boost::math::constants::pi<big>();
  const big euler = boost::math::constants::euler<big>();
  big j0 = 1, series = 0, term = 1, harmonic = 0;
  for (int k = 1; k < 400; ++k) {
    term *= -q / (big(k) * big(k));
    harmonic += big(1) / k;
    j0 += term;
    series -= term * harmonic;
    if (abs(term) * harmonic < big("1e-40") && k > q) break;
  }
  return static_cast<double>(2 / pi * (log(big(x) / 2) + euler) * j0 + 2 / pi * series);
}

inline CVector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = {g(rng), g(rng)};
  return v;
}

inline CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g;
  CMatrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
  return m;
}

/// Random unitary from the QR factorization of a Gaussian matrix.
inline CMatrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, n, n));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

/// Orthogonal projector onto span{b}, built as an explicit N x N matrix.
inline CMatrix projector(const CVector& b) { return b * b.adjoint() / b.squaredNorm(); }

inline CMatrix complement(const CVector& b) {
  return CMatrix::Identity(b.size(), b.size()) - projector(b);
}

/// Circular complex Gaussian log-density with mean mu and covariance s2 * I.
inline double gaussian_log_pdf(const CVector& x, const CVector& mu, double s2) {
  const double n = static_cast<double>(x.size());
  return -n * std::log(M_PI * s2) - (x - mu).squaredNorm() / s2;
}

/// Empirical mean and its standard error.
template <typename Range>
std::pair<double, double> mean_and_se(const Range& v) {
  double s = 0.0, s2 = 0.0;
  for (double x : v) {
    s += x;
    s2 += x * x;
  }
  const double n = static_cast<double>(v.size());
  const double m = s / n;
  return {m, std::sqrt((s2 / n - m * m) / n)};
}

}  // namespace oracle
