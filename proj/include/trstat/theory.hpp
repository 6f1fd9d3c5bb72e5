#pragma once

#include <optional>
#include <span>
#include <vector>

#include "trstat/distributions.hpp"
#include "trstat/forward.hpp"
#include "trstat/imaging.hpp"
#include "trstat/scene.hpp"
#include "trstat/statistics.hpp"

namespace trstat {

/// Per-frequency noncentralities of the projected (num) and residual (den)
/// signal energy at one probed location, both normalized by sigma_l^2.
struct NoncentralityPair {
  std::vector<double> delta_n;
  std::vector<double> delta_d;
};

/// Route through the explicit Kronecker array matrix and N x N projectors:
/// xi = (A_T (x) A_R) vec(M_l), delta_n = xi^H P_b xi / sigma^2.
NoncentralityPair noncentrality_projection(const ScattererSet& scene, const ArrayLayout& layout,
                                           const FrequencyPlan& plan, ScatteringModel model,
                                           std::span<const double> noise_var,
                                           const Position2D& probe);

/// Route through the point-spread vectors h = A^H a(r) / ||a(r)||^2:
/// delta_n = ||b(r)||^2 |h_R^H M h_T^*|^2 / sigma^2, delta_d = total - delta_n,
/// total = ||A_R M A_T^T||_F^2 / sigma^2.
NoncentralityPair noncentrality_explicit(const ScattererSet& scene, const ArrayLayout& layout,
                                         const FrequencyPlan& plan, ScatteringModel model,
                                         std::span<const double> noise_var,
                                         const Position2D& probe);

CVector point_spread(const CMatrix& array_to_scatterers, const CVector& probe_green);

struct NoncentralityField {
  ImageGridSpec grid;
  /// L x cells (row-major cell order).
  RMatrix delta_n;
  RMatrix delta_d;
  /// ||A_R M_l A_T^T||_F^2 / sigma_l^2 per frequency.
  std::vector<double> total;
};

NoncentralityField noncentrality_field(const ScattererSet& scene, const ProbeBank& bank,
                                       const ArrayLayout& layout, const FrequencyPlan& plan,
                                       ScatteringModel model, std::span<const double> noise_var);

/// Everything the laws of the imaging statistics depend on at one cell.
struct CellTheory {
  std::vector<double> delta_n;
  std::vector<double> delta_d;
  std::vector<double> b_norm_sq;
  std::vector<double> noise_var;
  std::size_t num_pairs = 0;  // N = N_T * N_R
};

CellTheory cell_theory(const NoncentralityField& field, const ProbeBank& bank,
                       std::size_t cell, std::span<const double> noise_var);

CellTheory cell_theory(const ScattererSet& scene, const ArrayLayout& layout,
                       const FrequencyPlan& plan, ScatteringModel model,
                       std::span<const double> noise_var, const Position2D& probe);

/// Exact law of a statistic at one cell. `freq` selects a single frequency for
/// the per-frequency statistics (mf, ml, xi) and restricts na / li to it; with
/// no frequency, na is CChi2_L(sum delta_n) and li uses every factor.
/// glr / rao / wald / gm / hm are transforms of Xi without closed-form laws.
StatLaw predict_stat_law(Statistic s, const CellTheory& cell,
                         std::optional<std::size_t> freq = std::nullopt);

/// Single-scatterer SNR ||b_l||^2 |tau_l|^2 / sigma_l^2.
std::vector<double> snr_vector(std::span<const double> b_norm_sq, std::span<const cplx> tau,
                               std::span<const double> noise_var);

/// log of prod_l f(Xi_l; CF_{1,M}(snr_l)) / f(Xi_l; CF_{1,M}).
double log_mpi_stat(std::span<const double> xi, std::span<const double> snr, int dof_den);
double mpi_stat(std::span<const double> xi, std::span<const double> snr, int dof_den);

}  // namespace trstat
