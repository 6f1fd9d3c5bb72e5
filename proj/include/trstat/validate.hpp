#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "trstat/gof.hpp"
#include "trstat/imaging.hpp"
#include "trstat/scenario.hpp"
#include "trstat/statistics.hpp"

namespace trstat {

struct McConfig {
  std::size_t runs = 100;
  std::uint64_t base_seed = 1;
  /// Run indices are [first_run, first_run + runs); disjoint ranges pool linearly.
  std::size_t first_run = 0;
  std::vector<Statistic> statistics{Statistic::glr, Statistic::rao, Statistic::wald,
                                    Statistic::li};
  RenderOptions render;
  /// mf / ml become one map per frequency instead of their sum.
  bool per_frequency_maps = false;

  std::vector<double> noise_scalings{0.1, 1.0, 10.0};
  /// Probe cells for the goodness-of-fit and CFAR experiments.
  std::vector<Position2D> ks_cells;
  std::size_t ks_samples = 10000;
  std::size_t ks_frequency = 0;
  std::size_t cfar_trials = 10000;
  std::size_t cfar_calibration = 100000;
  double pfa = 0.1;

  void validate() const;
};

/// Seed of run `run_index` under `base_seed`; independent of execution order.
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run_index);

struct AveragedMaps {
  std::vector<ImageMap> maps;
  /// Per statistic, the number of (cell, run) evaluations that were masked.
  std::vector<std::size_t> masked_evaluations;
  std::size_t runs = 0;
};

/// Per-cell mean over runs of each requested statistic map. glr / li are
/// logged before averaging unless render.log_scale is false. Masked
/// evaluations are left out of that cell's mean.
AveragedMaps run_average(const Scenario& scenario, const McConfig& mc);
AveragedMaps run_average(const MdmSynthesizer& synth, const ProbeBank& bank, const McConfig& mc);
/// Same reduction over realizations supplied by `realize(run_index)`.
AveragedMaps run_average(const std::function<MdmSet(std::size_t)>& realize,
                         const ProbeBank& bank, const McConfig& mc);

struct PfaRow {
  Statistic statistic = Statistic::glr;
  double scaling = 1.0;
  double threshold = 0.0;
  double pfa = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  bool within_3se = false;
};

struct CfarConfig {
  Position2D cell;
  std::vector<double> base_noise_var;
  std::vector<double> scalings{0.1, 1.0, 10.0};
  /// Any of glr, rao, wald, gm, hm, plus na as a negative control. na always
  /// assumes the base variances, i.e. it runs with a stale noise estimate.
  std::vector<Statistic> statistics{Statistic::glr, Statistic::rao, Statistic::wald};
  std::size_t trials = 10000;
  std::size_t calibration_trials = 100000;
  double pfa = 0.1;
  std::uint64_t seed = 1;
};

/// Calibrates each statistic's threshold once on H0 data at the base noise
/// level, then measures the exceedance rate on fresh H0 data for every scaling.
std::vector<PfaRow> cfar_experiment(const ArrayLayout& layout, const FrequencyPlan& plan,
                                    const CfarConfig& cfg);

struct KsExperimentResult {
  Statistic statistic = Statistic::xi;
  Position2D cell;
  std::size_t frequency = 0;
  std::string law;
  std::string scene_label;
  KsResult ks;
};

/// One-sample KS of a per-frequency statistic at `cell` against its exact law.
/// statistic is one of mf, ml, na, xi, li, all evaluated at frequency `freq`
/// alone (li then reduces to 1 / ||P_b^perp x_l||^2).
KsExperimentResult ks_experiment(const Scenario& scenario, const Position2D& cell,
                                 Statistic statistic, std::size_t freq, std::size_t n_samples,
                                 std::uint64_t seed);

/// Two-sample KS of H0 Xi at frequency `freq` drawn under base_noise * s
/// against draws under base_noise, one result per scaling.
std::vector<KsResult> xi_noise_invariance(const ArrayLayout& layout, const FrequencyPlan& plan,
                                          const Position2D& cell,
                                          const std::vector<double>& base_noise,
                                          const std::vector<double>& scalings, std::size_t freq,
                                          std::size_t n_samples, std::uint64_t seed);

struct McReport {
  AveragedMaps averaged;
  std::vector<KsExperimentResult> ks_results;
  std::vector<PfaRow> pfa_table;
};

/// KS families at every ks cell (plus Xi on a zero-tau scene) and the CFAR
/// table at the first ks cell. Averaged maps are filled only if with_maps.
McReport run_validation(const Scenario& scenario, const McConfig& mc, bool with_maps = false);

}  // namespace trstat
