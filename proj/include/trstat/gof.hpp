#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace trstat {

/// Asymptotic 1% critical value of the one-sample Kolmogorov-Smirnov distance.
inline constexpr double kKsCoefficient1pct = 1.628;

double ks_critical_1pct(std::size_t n);
double ks_critical_two_sample_1pct(std::size_t n, std::size_t m);

struct KsResult {
  double distance = 0.0;
  std::size_t n = 0;
  double critical = 0.0;
  bool pass = false;
};

/// sup |F_n - F| against a continuous reference CDF.
KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace trstat
