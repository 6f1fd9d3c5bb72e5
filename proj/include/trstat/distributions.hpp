#pragma once

#include <variant>
#include <vector>

#include "trstat/rng.hpp"

namespace trstat {

/// Law of scale * sum_{n<dof} |z_n + mu_n|^2 with z_n i.i.d. CN(0, 1) and
/// noncentrality = sum |mu_n|^2. Mean = scale * (dof + noncentrality).
/// Equivalent to a Poisson(noncentrality) mixture of Gamma(dof + k, scale).
struct ComplexChiSquareLaw {
  int dof = 1;
  double noncentrality = 0.0;
  double scale = 1.0;

  double mean() const { return scale * (dof + noncentrality); }
  void validate() const;
};

/// Law of U / V with U ~ CChi2_{dof_num}(nc_num), V ~ CChi2_{dof_den}(nc_den)
/// independent and unit scale. No dof normalization: the central case has
/// density Gamma(N+M)/(Gamma(N)Gamma(M)) x^{N-1} / (1+x)^{N+M}.
struct ComplexFLaw {
  int dof_num = 1;
  int dof_den = 1;
  double nc_num = 0.0;
  double nc_den = 0.0;

  void validate() const;
};

/// Law of 1 / prod_l Y_l with Y_l independent, Y_l ~ factors[l]. Describes the
/// likelihood image where Y_l = sigma_l^2 * CChi2_{N-1}(delta_D,l).
struct ReciprocalProductLaw {
  std::vector<ComplexChiSquareLaw> factors;
};

using StatLaw = std::variant<ComplexChiSquareLaw, ComplexFLaw, ReciprocalProductLaw>;

inline constexpr double kPoissonTail = 1e-12;
inline constexpr std::size_t kMaxSeriesTerms = 100000;

/// Contiguous window [first, first + weights.size()) of Poisson(mean) weights
/// carrying all but kPoissonTail of the mass.
struct PoissonWindow {
  std::size_t first = 0;
  std::vector<double> weights;
};
PoissonWindow poisson_window(double mean);

double pdf(const ComplexChiSquareLaw& law, double x);
double cdf(const ComplexChiSquareLaw& law, double x);
double quantile(const ComplexChiSquareLaw& law, double p);
double sample(const ComplexChiSquareLaw& law, RngStream& rng);

double pdf(const ComplexFLaw& law, double x);
double log_pdf(const ComplexFLaw& law, double x);
double cdf(const ComplexFLaw& law, double x);
double sample(const ComplexFLaw& law, RngStream& rng);

/// CDF needs a single factor; sampling works for any count.
double cdf(const ReciprocalProductLaw& law, double x);
double sample(const ReciprocalProductLaw& law, RngStream& rng);

double cdf(const StatLaw& law, double x);
double sample(const StatLaw& law, RngStream& rng);
std::string describe(const StatLaw& law);

}  // namespace trstat
