#include "trstat/gof.hpp"

#include <algorithm>
#include <cmath>

#include "trstat/error.hpp"

namespace trstat {

double ks_critical_1pct(std::size_t n) {
  if (n == 0) throw InvalidArgument("KS test needs at least one sample");
  return kKsCoefficient1pct / std::sqrt(static_cast<double>(n));
}

double ks_critical_two_sample_1pct(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw InvalidArgument("KS test needs nonempty samples");
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return kKsCoefficient1pct * std::sqrt((nd + md) / (nd * md));
}

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  const std::size_t n = samples.size();
  const double crit = ks_critical_1pct(n);
  std::sort(samples.begin(), samples.end());
  const double nd = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(samples[i]);
    const double id = static_cast<double>(i);
    d = std::max({d, (id + 1.0) / nd - f, f - id / nd});
  }
  return {d, n, crit, d <= crit};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  const double crit = ks_critical_two_sample_1pct(a.size(), b.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, a.size() + b.size(), crit, d <= crit};
}

}  // namespace trstat
