#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trstat/forward.hpp"
#include "trstat/scene.hpp"
#include "trstat/types.hpp"

namespace trstat {

/// Every decision statistic / imaging function the library can evaluate.
///   glr, rao, wald  adaptive tests, functions of the Xi vector
///   gm, hm          geometric / harmonic mean of Xi
///   na              non-adaptive statistic (needs the noise variances)
///   mf, ml          matched-filter and ML-amplitude imaging (per frequency)
///   li              likelihood imaging, prod 1 / ||P_b^perp x||^2
///   xi              single-frequency Xi itself
enum class Statistic { glr, rao, wald, gm, hm, na, mf, ml, li, xi };

std::string to_string(Statistic s);
Statistic parse_statistic(const std::string& name);
const std::vector<Statistic>& all_statistics();
/// True for statistics that depend on the data only through Xi.
bool is_xi_function(Statistic s);

/// Energy split of x along b: projected = |b^H x|^2 / ||b||^2, energy = ||x||^2.
struct Projection {
  double projected = 0.0;
  double energy = 0.0;

  double residual() const { return energy - projected; }
};

Projection project(const CVector& x, const CVector& b);

/// Xi = x^H P_b x / x^H P_b^perp x from a projection. Residuals at or below
/// 1e-12 * ||x||^2 (including tiny negative rounding) are degenerate.
double xi_from(const Projection& p);
double xi(const CVector& x, const CVector& b);

double glr_stat(std::span<const double> xi);
double rao_stat(std::span<const double> xi);
double wald_stat(std::span<const double> xi);
double gm_stat(std::span<const double> xi);
double hm_stat(std::span<const double> xi);

/// sum_l |b_l^H x_l|^2 / (||b_l||^2 sigma_l^2), with sigma_l^2 taken from the MDM set.
double na_stat(const MdmSet& mdm, std::span<const SteeringSet> steer);
/// Single-frequency bilinear form |a_R^H X a_T^*|^2 / (||a_R||^2 ||a_T||^2 sigma^2).
double na_stat_bilinear(const CMatrix& x, const CVector& a_t, const CVector& a_r,
                        double noise_var);

double mf_image_stat(const CMatrix& x, const CVector& a_t, const CVector& a_r);
double ml_image_stat(const CMatrix& x, const CVector& a_t, const CVector& a_r);
double likelihood_image_stat(const MdmSet& mdm, std::span<const SteeringSet> steer);

/// Unitary U whose first column is b / ||b||.
CMatrix canonical_basis(const CVector& b);

/// Maximal invariant |xbar_1|^2 / ||xbar_{2:N}||^2 with xbar = U^H x.
double mis(const CVector& x, const CVector& b);

}  // namespace trstat
