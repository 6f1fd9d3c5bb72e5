#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trstat/scene.hpp"
#include "trstat/types.hpp"

namespace trstat {

enum class ScatteringModel { BA, FL };

std::string to_string(ScatteringModel m);
ScatteringModel parse_scattering_model(const std::string& s);

/// Point scatterers. tau(l, m) is the coefficient of scatterer m at frequency l.
struct ScattererSet {
  std::vector<Position2D> positions;
  CMatrix tau;

  std::size_t size() const { return positions.size(); }
  /// Checks M >= 1, distinct positions and tau shape against `num_freqs`.
  void validate(std::size_t num_freqs) const;
};

/// One realization of the per-frequency multistatic data matrices (N_R x N_T).
struct MdmSet {
  std::vector<CMatrix> matrices;
  std::vector<double> noise_var;

  std::size_t num_freqs() const { return matrices.size(); }
};

/// Born: diag(tau_l). Foldy-Lax: [diag(tau_l)^-1 - S_l]^-1 with S_l the
/// inter-scatterer Green matrix (zero diagonal).
CMatrix scattering_matrix(const ScattererSet& scene, std::size_t freq_index, double wavenumber,
                          ScatteringModel model);

/// Same as above with an explicit coupling matrix; used to check the FL -> BA
/// reduction when coupling is switched off.
CMatrix foldy_lax_matrix(const CVector& tau, const CMatrix& coupling);

/// Column-major stacking, so vec(a_R a_T^T) = a_T (x) a_R.
CVector vectorize(const CMatrix& x);

/// Precomputes the noise-free A_R M A_T^T per frequency; realizations only add
/// noise. Each frequency draws from its own stream derived from (seed, l).
class MdmSynthesizer {
public:
  MdmSynthesizer(const ArrayLayout& layout, const ScattererSet& scene, const FrequencyPlan& plan,
                 std::vector<double> noise_var, ScatteringModel model);

  /// Noise-only synthesizer (H0 data) with the layout's dimensions.
  MdmSynthesizer(const ArrayLayout& layout, std::size_t num_freqs, std::vector<double> noise_var);

  MdmSet realize(std::uint64_t seed) const;
  /// Same noise stream as realize(seed) but with every variance multiplied by `scale`.
  MdmSet realize_scaled(std::uint64_t seed, double scale) const;

  const std::vector<CMatrix>& clean() const { return clean_; }
  const std::vector<double>& noise_var() const { return noise_var_; }

private:
  std::vector<CMatrix> clean_;
  std::vector<double> noise_var_;
};

MdmSet synthesize_mdm(const ArrayLayout& layout, const ScattererSet& scene,
                      const FrequencyPlan& plan, const std::vector<double>& noise_var,
                      ScatteringModel model, std::uint64_t seed);

}  // namespace trstat
