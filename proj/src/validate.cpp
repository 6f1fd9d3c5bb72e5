#include "trstat/validate.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

#include "trstat/distributions.hpp"
#include "trstat/error.hpp"
#include "trstat/parallel.hpp"
#include "trstat/rng.hpp"
#include "trstat/theory.hpp"

namespace trstat {

namespace {

// Stream tags keep the experiments' seed spaces apart.
constexpr std::uint64_t kTagRun = 0x52554eULL;
constexpr std::uint64_t kTagCalibration = 0xCA11ULL;
constexpr std::uint64_t kTagScaled = 0x5CA1EULL;
constexpr std::uint64_t kTagKs = 0x4B53ULL;
constexpr std::uint64_t kTagInvariance = 0x1A7ULL;

/// H0 projections at one cell: x_l ~ CN(0, noise_l I) drawn from (seed, l).
std::vector<CellData> noise_cell_data(std::span<const SteeringSet> steer,
                                      std::span<const double> noise_var, std::uint64_t seed) {
  std::vector<CellData> out(steer.size());
  for (std::size_t l = 0; l < steer.size(); ++l) {
    CVector x(steer[l].b.size());
    RngStream rng(derive_seed(seed, {l}));
    rng.fill_complex_gaussian(x, noise_var[l]);
    out[l] = {steer[l].b.dot(x), steer[l].a_t.squaredNorm(), steer[l].a_r.squaredNorm(),
              x.squaredNorm()};
  }
  return out;
}

std::vector<SteeringSet> steering_at(const ArrayLayout& layout, const FrequencyPlan& plan,
                                     const Position2D& cell) {
  std::vector<SteeringSet> s;
  for (std::size_t l = 0; l < plan.size(); ++l) s.push_back(steering(layout, cell, plan.wavenumber(l)));
  return s;
}

std::vector<double> scaled(const std::vector<double>& v, double s) {
  std::vector<double> out(v);
  for (double& x : out) x *= s;
  return out;
}

RenderOptions linear_options() {
  RenderOptions opt;
  opt.log_scale = false;
  return opt;
}

}  // namespace

void McConfig::validate() const {
  if (runs < 1) throw InvalidArgument("runs must be >= 1");
  if (statistics.empty()) throw InvalidArgument("at least one statistic is required");
  for (double s : noise_scalings) {
    if (!(s > 0.0)) throw InvalidArgument("noise scalings must be positive");
  }
  if (!(pfa > 0.0 && pfa < 1.0)) throw InvalidArgument("pfa must lie in (0, 1)");
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run_index) {
  return derive_seed(base_seed, {kTagRun, run_index});
}

AveragedMaps run_average(const std::function<MdmSet(std::size_t)>& realize,
                         const ProbeBank& bank, const McConfig& mc) {
  mc.validate();
  // One render pass per distinct option set: the combined statistics share a
  // pass, and split mf / ml maps get one pass per frequency.
  struct Pass {
    std::vector<Statistic> stats;
    RenderOptions opt;
  };
  std::vector<Pass> passes(1);
  passes[0].opt = mc.render;
  std::vector<Statistic> split;
  for (Statistic s : mc.statistics) {
    if (mc.per_frequency_maps && (s == Statistic::mf || s == Statistic::ml)) {
      split.push_back(s);
    } else {
      passes[0].stats.push_back(s);
    }
  }
  if (!split.empty()) {
    for (std::size_t l = 0; l < bank.num_freqs(); ++l) {
      Pass p{split, mc.render};
      p.opt.combine = FrequencyCombine::Single;
      p.opt.frequency = l;
      passes.push_back(std::move(p));
    }
  }
  if (passes[0].stats.empty()) passes.erase(passes.begin());

  std::size_t ns = 0;
  for (const Pass& p : passes) ns += p.stats.size();
  const auto ny = static_cast<Eigen::Index>(bank.grid().ny());
  const auto nx = static_cast<Eigen::Index>(bank.grid().nx());
  std::vector<RMatrix> sums(ns, RMatrix::Zero(ny, nx));
  std::vector<Eigen::MatrixXi> counts(ns, Eigen::MatrixXi::Zero(ny, nx));
  AveragedMaps out;
  out.runs = mc.runs;
  out.masked_evaluations.assign(ns, 0);

  // Runs are reduced in index order; each render parallelizes over cells.
  std::vector<ImageMap> templ;
  for (std::size_t r = 0; r < mc.runs; ++r) {
    const MdmSet mdm = realize(mc.first_run + r);
    std::vector<ImageMap> maps;
    for (const Pass& p : passes) {
      for (ImageMap& m : render_maps(p.stats, mdm, bank, p.opt)) maps.push_back(std::move(m));
    }
    for (std::size_t k = 0; k < ns; ++k) {
      for (Eigen::Index i = 0; i < sums[k].size(); ++i) {
        if (maps[k].mask.data()[i]) {
          ++out.masked_evaluations[k];
        } else {
          sums[k].data()[i] += maps[k].values.data()[i];
          ++counts[k].data()[i];
        }
      }
    }
    if (templ.empty()) templ = std::move(maps);
  }
  for (std::size_t k = 0; k < ns; ++k) {
    ImageMap m = templ[k];
    for (Eigen::Index i = 0; i < sums[k].size(); ++i) {
      const int c = counts[k].data()[i];
      m.mask.data()[i] = c == 0;
      m.values.data()[i] = c == 0 ? 0.0 : sums[k].data()[i] / c;
    }
    out.maps.push_back(std::move(m));
  }
  return out;
}

AveragedMaps run_average(const MdmSynthesizer& synth, const ProbeBank& bank, const McConfig& mc) {
  return run_average(
      [&](std::size_t run) { return synth.realize(run_seed(mc.base_seed, run)); }, bank, mc);
}

AveragedMaps run_average(const Scenario& scenario, const McConfig& mc) {
  scenario.validate();
  const MdmSynthesizer synth(scenario.layout, scenario.scene, scenario.plan, scenario.noise_var,
                             scenario.model);
  const ProbeBank bank(scenario.layout, scenario.plan, scenario.grid);
  return run_average(synth, bank, mc);
}

std::vector<PfaRow> cfar_experiment(const ArrayLayout& layout, const FrequencyPlan& plan,
                                    const CfarConfig& cfg) {
  layout.validate();
  if (cfg.base_noise_var.size() != plan.size()) {
    throw InvalidArgument("base noise variances must have one entry per frequency");
  }
  if (cfg.trials == 0 || cfg.calibration_trials == 0) {
    throw InvalidArgument("CFAR experiment needs trials");
  }
  if (!(cfg.pfa > 0.0 && cfg.pfa < 1.0)) throw InvalidArgument("pfa must lie in (0, 1)");
  for (Statistic s : cfg.statistics) {
    if (!is_xi_function(s) && s != Statistic::na) {
      throw UnsupportedStatistic("CFAR experiment supports glr, rao, wald, gm, hm and na");
    }
  }
  const std::vector<SteeringSet> steer = steering_at(layout, plan, cfg.cell);
  const RenderOptions opt = linear_options();
  const std::size_t ns = cfg.statistics.size();

  // values[k][trial]; failed evaluations (probability-zero events) become -inf.
  auto evaluate_batch = [&](std::size_t trials, double scale, auto seed_of) {
    std::vector<std::vector<double>> values(ns, std::vector<double>(trials));
    const std::vector<double> noise = scaled(cfg.base_noise_var, scale);
    parallel_for(trials, [&](std::size_t t) {
      const auto data = noise_cell_data(steer, noise, seed_of(t));
      for (std::size_t k = 0; k < ns; ++k) {
        double v = -std::numeric_limits<double>::infinity();
        try {
          v = evaluate_statistic(cfg.statistics[k], data, cfg.base_noise_var, opt);
        } catch (const NumericalError&) {
        }
        values[k][t] = v;
      }
    });
    return values;
  };

  const auto calib = evaluate_batch(cfg.calibration_trials, 1.0, [&](std::size_t t) {
    return derive_seed(cfg.seed, {kTagCalibration, t});
  });
  std::vector<double> thresholds(ns);
  for (std::size_t k = 0; k < ns; ++k) {
    std::vector<double> v = calib[k];
    const auto idx = static_cast<std::size_t>(
        std::ceil((1.0 - cfg.pfa) * static_cast<double>(v.size()))) - 1;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
    thresholds[k] = v[idx];
  }

  std::vector<PfaRow> rows;
  const double se = std::sqrt(cfg.pfa * (1.0 - cfg.pfa) / static_cast<double>(cfg.trials));
  for (std::size_t si = 0; si < cfg.scalings.size(); ++si) {
    const double s = cfg.scalings[si];
    if (!(s > 0.0)) throw InvalidArgument("noise scalings must be positive");
    const auto vals = evaluate_batch(cfg.trials, s, [&](std::size_t t) {
      return derive_seed(cfg.seed, {kTagScaled, si, t});
    });
    for (std::size_t k = 0; k < ns; ++k) {
      const auto exceed = std::count_if(vals[k].begin(), vals[k].end(),
                                        [&](double v) { return v > thresholds[k]; });
      PfaRow row;
      row.statistic = cfg.statistics[k];
      row.scaling = s;
      row.threshold = thresholds[k];
      row.trials = cfg.trials;
      row.pfa = static_cast<double>(exceed) / static_cast<double>(cfg.trials);
      row.std_error = se;
      row.within_3se = std::abs(row.pfa - cfg.pfa) <= 3.0 * se;
      rows.push_back(row);
    }
  }
  return rows;
}

KsExperimentResult ks_experiment(const Scenario& scenario, const Position2D& cell,
                                 Statistic statistic, std::size_t freq, std::size_t n_samples,
                                 std::uint64_t seed) {
  scenario.validate();
  if (freq >= scenario.plan.size()) throw InvalidArgument("frequency index out of range");
  if (statistic != Statistic::mf && statistic != Statistic::ml && statistic != Statistic::na &&
      statistic != Statistic::xi && statistic != Statistic::li) {
    throw UnsupportedStatistic("KS experiment supports mf, ml, na, xi and li");
  }
  const CellTheory theory = cell_theory(scenario.scene, scenario.layout, scenario.plan,
                                        scenario.model, scenario.noise_var, cell);
  const StatLaw law = predict_stat_law(statistic, theory, freq);

  const MdmSynthesizer synth(scenario.layout, scenario.scene, scenario.plan, scenario.noise_var,
                             scenario.model);
  const std::vector<SteeringSet> steer = steering_at(scenario.layout, scenario.plan, cell);
  RenderOptions opt = linear_options();
  opt.combine = FrequencyCombine::Single;
  opt.frequency = freq;

  std::vector<double> samples(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    const MdmSet mdm = synth.realize(derive_seed(seed, {kTagKs, i}));
    std::vector<CellData> data(steer.size());
    for (std::size_t l = 0; l < steer.size(); ++l) {
      const CVector x = vectorize(mdm.matrices[l]);
      data[l] = {steer[l].b.dot(x), steer[l].a_t.squaredNorm(), steer[l].a_r.squaredNorm(),
                 x.squaredNorm()};
    }
    samples[i] = evaluate_statistic(statistic, data, mdm.noise_var, opt);
  });

  KsExperimentResult r;
  r.statistic = statistic;
  r.cell = cell;
  r.frequency = freq;
  r.law = describe(law);
  r.ks = ks_one_sample(std::move(samples), [&law](double x) { return cdf(law, x); });
  return r;
}

std::vector<KsResult> xi_noise_invariance(const ArrayLayout& layout, const FrequencyPlan& plan,
                                          const Position2D& cell,
                                          const std::vector<double>& base_noise,
                                          const std::vector<double>& scalings, std::size_t freq,
                                          std::size_t n_samples, std::uint64_t seed) {
  layout.validate();
  if (base_noise.size() != plan.size()) {
    throw InvalidArgument("base noise variances must have one entry per frequency");
  }
  if (freq >= plan.size()) throw InvalidArgument("frequency index out of range");
  const std::vector<SteeringSet> steer = steering_at(layout, plan, cell);
  RenderOptions opt = linear_options();
  opt.combine = FrequencyCombine::Single;
  opt.frequency = freq;

  auto draw = [&](double scale, std::uint64_t tag) {
    std::vector<double> v(n_samples);
    const std::vector<double> noise = scaled(base_noise, scale);
    parallel_for(n_samples, [&](std::size_t i) {
      const auto data = noise_cell_data(steer, noise, derive_seed(seed, {kTagInvariance, tag, i}));
      v[i] = evaluate_statistic(Statistic::xi, data, noise, opt);
    });
    return v;
  };
  const std::vector<double> base = draw(1.0, 0);
  std::vector<KsResult> out;
  for (std::size_t i = 0; i < scalings.size(); ++i) {
    if (!(scalings[i] > 0.0)) throw InvalidArgument("noise scalings must be positive");
    out.push_back(ks_two_sample(base, draw(scalings[i], i + 1)));
  }
  return out;
}

McReport run_validation(const Scenario& scenario, const McConfig& mc, bool with_maps) {
  scenario.validate();
  mc.validate();
  McReport report;
  if (with_maps) report.averaged = run_average(scenario, mc);

  std::vector<Position2D> cells = mc.ks_cells;
  if (cells.empty()) cells = scenario.scene.positions;

  const Statistic families[] = {Statistic::mf, Statistic::ml, Statistic::na, Statistic::xi,
                                Statistic::li};
  std::uint64_t experiment = 0;
  for (const Position2D& cell : cells) {
    for (Statistic s : families) {
      auto r = ks_experiment(scenario, cell, s, mc.ks_frequency, mc.ks_samples,
                             derive_seed(mc.base_seed, {kTagKs, experiment++}));
      r.scene_label = "scene";
      report.ks_results.push_back(std::move(r));
    }
  }
  // Xi under H0: same geometry with every coefficient zeroed (Born model).
  Scenario null_scene = scenario;
  null_scene.scene.tau.setZero();
  null_scene.model = ScatteringModel::BA;
  auto h0 = ks_experiment(null_scene, cells.front(), Statistic::xi, mc.ks_frequency,
                          mc.ks_samples, derive_seed(mc.base_seed, {kTagKs, experiment++}));
  h0.scene_label = "h0";
  report.ks_results.push_back(std::move(h0));

  CfarConfig cfar;
  cfar.cell = cells.front();
  cfar.base_noise_var = scenario.noise_var;
  cfar.scalings = mc.noise_scalings;
  cfar.statistics = {Statistic::glr, Statistic::rao, Statistic::wald, Statistic::gm,
                     Statistic::hm, Statistic::na};
  cfar.trials = mc.cfar_trials;
  cfar.calibration_trials = mc.cfar_calibration;
  cfar.pfa = mc.pfa;
  cfar.seed = derive_seed(mc.base_seed, {kTagCalibration});
  report.pfa_table = cfar_experiment(scenario.layout, scenario.plan, cfar);
  return report;
}

}  // namespace trstat
