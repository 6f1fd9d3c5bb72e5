#include "trstat/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "trstat/error.hpp"

namespace trstat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_poisson(double mean, std::size_t k) {
  const double kd = static_cast<double>(k);
  return -mean + kd * std::log(mean) - std::lgamma(kd + 1.0);
}

double log_sum_exp(const std::vector<double>& terms) {
  double mx = kNegInf;
  for (double t : terms) mx = std::max(mx, t);
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

void ComplexChiSquareLaw::validate() const {
  if (dof < 1) throw InvalidArgument("complex chi-square needs dof >= 1");
  if (!(noncentrality >= 0.0) || !std::isfinite(noncentrality)) {
    throw InvalidArgument("noncentrality must be finite and >= 0");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("scale must be positive");
}

void ComplexFLaw::validate() const {
  if (dof_num < 1 || dof_den < 1) throw InvalidArgument("complex F needs dofs >= 1");
  if (!(nc_num >= 0.0) || !(nc_den >= 0.0) || !std::isfinite(nc_num) || !std::isfinite(nc_den)) {
    throw InvalidArgument("noncentralities must be finite and >= 0");
  }
}

PoissonWindow poisson_window(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw InvalidArgument("Poisson mean must be finite and >= 0");
  }
  if (mean == 0.0) return {0, {1.0}};
  const auto mode = static_cast<std::size_t>(std::floor(mean));
  std::size_t lo = mode;
  std::size_t hi = mode;
  double mass = std::exp(log_poisson(mean, mode));
  auto weight = [mean](std::size_t k) { return std::exp(log_poisson(mean, k)); };
  while (1.0 - mass >= kPoissonTail) {
    const double w_hi = weight(hi + 1);
    const double w_lo = lo > 0 ? weight(lo - 1) : 0.0;
    if (w_hi < kPoissonTail * 1e-4 && w_lo < kPoissonTail * 1e-4) break;
    if (w_lo > w_hi) {
      --lo;
      mass += w_lo;
    } else {
      ++hi;
      mass += w_hi;
    }
    if (hi - lo + 1 > kMaxSeriesTerms) {
      std::ostringstream os;
      os << "Poisson mixture with mean " << mean << " needs more than " << kMaxSeriesTerms
         << " terms";
      throw SeriesNonConvergence(os.str());
    }
  }
  PoissonWindow w;
  w.first = lo;
  w.weights.reserve(hi - lo + 1);
  for (std::size_t k = lo; k <= hi; ++k) w.weights.push_back(weight(k));
  return w;
}

// ---- complex chi-square ------------------------------------------------------

double pdf(const ComplexChiSquareLaw& law, double x) {
  law.validate();
  if (x < 0.0) return 0.0;
  const double y = x / law.scale;
  const PoissonWindow w = poisson_window(law.noncentrality);
  double s = 0.0;
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    const double n = law.dof + static_cast<double>(w.first + i);
    double g;
    if (y == 0.0) {
      g = n == 1.0 ? 1.0 : 0.0;
    } else {
      g = std::exp((n - 1.0) * std::log(y) - y - std::lgamma(n));
    }
    s += w.weights[i] * g;
  }
  return s / law.scale;
}

double cdf(const ComplexChiSquareLaw& law, double x) {
  law.validate();
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double y = x / law.scale;
  const double log_y = std::log(y);
  const PoissonWindow w = poisson_window(law.noncentrality);
  double n = law.dof + static_cast<double>(w.first);
  double p = boost::math::gamma_p(n, y);
  double s = 0.0;
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    s += w.weights[i] * p;
    // P(n + 1, y) = P(n, y) - y^n e^{-y} / Gamma(n + 1)
    p = std::max(0.0, p - std::exp(n * log_y - y - std::lgamma(n + 1.0)));
    n += 1.0;
  }
  return std::clamp(s, 0.0, 1.0);
}

double quantile(const ComplexChiSquareLaw& law, double p) {
  law.validate();
  if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("quantile level must lie in [0, 1)");
  if (p == 0.0) return 0.0;
  double lo = 0.0;
  double hi = law.mean() + 10.0 * law.scale * std::sqrt(law.dof + 2.0 * law.noncentrality);
  while (cdf(law, hi) < p) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(law, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double sample(const ComplexChiSquareLaw& law, RngStream& rng) {
  law.validate();
  const double mu = std::sqrt(law.noncentrality);
  const double s = std::sqrt(0.5);
  double acc = 0.0;
  for (int n = 0; n < law.dof; ++n) {
    const double re = s * rng.gaussian() + (n == 0 ? mu : 0.0);
    const double im = s * rng.gaussian();
    acc += re * re + im * im;
  }
  return law.scale * acc;
}

// ---- complex F ---------------------------------------------------------------

double log_pdf(const ComplexFLaw& law, double x) {
  law.validate();
  if (x < 0.0) return kNegInf;
  const PoissonWindow wn = poisson_window(law.nc_num);
  const PoissonWindow wd = poisson_window(law.nc_den);
  const double log_x = x > 0.0 ? std::log(x) : kNegInf;
  const double log1p_x = std::log1p(x);
  std::vector<double> terms;
  terms.reserve(wn.weights.size() * wd.weights.size());
  for (std::size_t j = 0; j < wn.weights.size(); ++j) {
    const double p = law.dof_num + static_cast<double>(wn.first + j);
    const double lx = p == 1.0 ? 0.0 : (p - 1.0) * log_x;
    if (lx == kNegInf) continue;
    double q = law.dof_den + static_cast<double>(wd.first);
    double lb = log_beta(p, q);
    const double lwj = std::log(wn.weights[j]);
    for (std::size_t k = 0; k < wd.weights.size(); ++k) {
      terms.push_back(lwj + std::log(wd.weights[k]) + lx - (p + q) * log1p_x - lb);
      lb += std::log(q) - std::log(p + q);  // B(p, q+1) = B(p, q) q / (p + q)
      q += 1.0;
    }
  }
  return log_sum_exp(terms);
}

double pdf(const ComplexFLaw& law, double x) { return std::exp(log_pdf(law, x)); }

double cdf(const ComplexFLaw& law, double x) {
  law.validate();
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double z = x / (1.0 + x);
  const double log_z = std::log(x) - std::log1p(x);
  const double log_1mz = -std::log1p(x);
  const PoissonWindow wn = poisson_window(law.nc_num);
  const PoissonWindow wd = poisson_window(law.nc_den);
  double total = 0.0;
  for (std::size_t j = 0; j < wn.weights.size(); ++j) {
    const double p = law.dof_num + static_cast<double>(wn.first + j);
    double q = law.dof_den + static_cast<double>(wd.first);
    double ib = boost::math::ibeta(p, q, z);
    // log of z^p (1-z)^q / B(p, q)
    double log_t = p * log_z + q * log_1mz - log_beta(p, q);
    double inner = 0.0;
    for (std::size_t k = 0; k < wd.weights.size(); ++k) {
      inner += wd.weights[k] * ib;
      // I_z(p, q+1) = I_z(p, q) + z^p (1-z)^q / (q B(p, q))
      ib = std::min(1.0, ib + std::exp(log_t) / q);
      log_t += log_1mz + std::log(p + q) - std::log(q);
      q += 1.0;
    }
    total += wn.weights[j] * inner;
  }
  return std::clamp(total, 0.0, 1.0);
}

double sample(const ComplexFLaw& law, RngStream& rng) {
  law.validate();
  const double u = sample(ComplexChiSquareLaw{law.dof_num, law.nc_num, 1.0}, rng);
  const double v = sample(ComplexChiSquareLaw{law.dof_den, law.nc_den, 1.0}, rng);
  return u / v;
}

// ---- reciprocal product ------------------------------------------------------

double cdf(const ReciprocalProductLaw& law, double x) {
  if (law.factors.size() != 1) {
    throw UnsupportedStatistic("reciprocal-product CDF is only available for a single factor");
  }
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  return 1.0 - cdf(law.factors.front(), 1.0 / x);
}

double sample(const ReciprocalProductLaw& law, RngStream& rng) {
  double prod = 1.0;
  for (const auto& f : law.factors) prod *= sample(f, rng);
  return 1.0 / prod;
}

// ---- variant dispatch --------------------------------------------------------

double cdf(const StatLaw& law, double x) {
  return std::visit([x](const auto& l) { return cdf(l, x); }, law);
}

double sample(const StatLaw& law, RngStream& rng) {
  return std::visit([&rng](const auto& l) { return sample(l, rng); }, law);
}

namespace {

std::string describe_chi(const ComplexChiSquareLaw& l) {
  std::ostringstream os;
  os.precision(6);
  os << "CChi2_" << l.dof << "(" << l.noncentrality << ", " << l.scale << ")";
  return os.str();
}

}  // namespace

std::string describe(const StatLaw& law) {
  if (const auto* c = std::get_if<ComplexChiSquareLaw>(&law)) return describe_chi(*c);
  if (const auto* f = std::get_if<ComplexFLaw>(&law)) {
    std::ostringstream os;
    os.precision(6);
    os << "CF_{" << f->dof_num << "," << f->dof_den << "}(" << f->nc_num << ", " << f->nc_den
       << ")";
    return os.str();
  }
  const auto& r = std::get<ReciprocalProductLaw>(law);
  std::string s = "1/prod[";
  for (std::size_t i = 0; i < r.factors.size(); ++i) {
    if (i) s += " * ";
    s += describe_chi(r.factors[i]);
  }
  return s + "]";
}

}  // namespace trstat
