#include <doctest.h>

#include <cmath>

#include "trstat/error.hpp"
#include "trstat/validate.hpp"

using namespace trstat;

namespace {

Scenario small_scenario() {
  Scenario sc = paper_scenario();
  sc.grid.x_min = -2.0;
  sc.grid.x_max = 2.0;
  sc.grid.y_min = -7.0;
  sc.grid.y_max = -5.0;
  sc.grid.step = 0.25;
  return sc;
}

}  // namespace

TEST_CASE("run seeds are distinct and stable") {
  CHECK(run_seed(1, 0) == run_seed(1, 0));
  CHECK(run_seed(1, 0) != run_seed(1, 1));
  CHECK(run_seed(1, 0) != run_seed(2, 0));
}

TEST_CASE("config validation") {
  McConfig mc;
  mc.runs = 0;
  CHECK_THROWS_AS(mc.validate(), InvalidArgument);
  mc = {};
  mc.pfa = 1.5;
  CHECK_THROWS_AS(mc.validate(), InvalidArgument);
}

TEST_CASE("one run equals a single render") {
  const Scenario sc = small_scenario();
  McConfig mc;
  mc.runs = 1;
  mc.base_seed = 17;
  const AveragedMaps avg = run_average(sc, mc);
  const MdmSynthesizer synth(sc.layout, sc.scene, sc.plan, sc.noise_var, sc.model);
  const MdmSet mdm = synth.realize(run_seed(17, 0));
  const ProbeBank bank(sc.layout, sc.plan, sc.grid);
  REQUIRE(avg.maps.size() == mc.statistics.size());
  for (std::size_t k = 0; k < mc.statistics.size(); ++k) {
    CHECK(avg.maps[k].values == render_map(mc.statistics[k], mdm, bank).values);
  }
}

TEST_CASE("pooling disjoint run ranges is an equal-weight average") {
  const Scenario sc = small_scenario();
  McConfig a;
  a.runs = 3;
  McConfig b = a;
  b.first_run = 3;
  McConfig all = a;
  all.runs = 6;
  const auto ra = run_average(sc, a);
  const auto rb = run_average(sc, b);
  const auto rall = run_average(sc, all);
  for (std::size_t k = 0; k < ra.maps.size(); ++k) {
    const RMatrix pooled = 0.5 * (ra.maps[k].values + rb.maps[k].values);
    CHECK((pooled - rall.maps[k].values).cwiseAbs().maxCoeff() <=
          1e-12 * rall.maps[k].values.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("averaging is reproducible") {
  const Scenario sc = small_scenario();
  McConfig mc;
  mc.runs = 4;
  const auto x = run_average(sc, mc);
  const auto y = run_average(sc, mc);
  for (std::size_t k = 0; k < x.maps.size(); ++k) CHECK(x.maps[k].values == y.maps[k].values);
}

TEST_CASE("per-frequency mf maps") {
  const Scenario sc = small_scenario();
  McConfig mc;
  mc.runs = 2;
  mc.statistics = {Statistic::wald, Statistic::mf};
  mc.per_frequency_maps = true;
  const auto avg = run_average(sc, mc);
  REQUIRE(avg.maps.size() == 4);
  CHECK(avg.maps[0].label() == "wald");
  CHECK(avg.maps[1].label() == "mf_f0");
  CHECK(avg.maps[3].label() == "mf_f2");
  mc.per_frequency_maps = false;
  const auto summed = run_average(sc, mc);
  const RMatrix total = avg.maps[1].values + avg.maps[2].values + avg.maps[3].values;
  CHECK((total - summed.maps[1].values).cwiseAbs().maxCoeff() <=
        1e-12 * total.cwiseAbs().maxCoeff());
}

TEST_CASE("CFAR: self-calibrated rate") {
  const Scenario sc = paper_scenario();
  CfarConfig cfg;
  cfg.cell = {0.0, -5.0};
  cfg.base_noise_var = sc.noise_var;
  cfg.scalings = {1.0};
  cfg.trials = 4000;
  cfg.calibration_trials = 20000;
  const auto rows = cfar_experiment(sc.layout, sc.plan, cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK_MESSAGE(r.within_3se, to_string(r.statistic) << " " << r.pfa);
  cfg.statistics = {Statistic::mf};
  CHECK_THROWS_AS(cfar_experiment(sc.layout, sc.plan, cfg), UnsupportedStatistic);
}

TEST_CASE("KS experiment on the matched-filter image") {
  const Scenario sc = paper_scenario();
  const auto r = ks_experiment(sc, sc.scene.positions[1], Statistic::mf, 0, 2000, 78);
  CHECK(r.ks.n == 2000);
  CHECK(r.ks.pass);
  CHECK(r.law.find("CChi2") != std::string::npos);
  CHECK_THROWS_AS(ks_experiment(sc, sc.scene.positions[1], Statistic::glr, 0, 10, 1),
                  UnsupportedStatistic);
}

TEST_CASE("Xi under H0 does not depend on the noise level") {
  const Scenario sc = paper_scenario();
  const auto r = xi_noise_invariance(sc.layout, sc.plan, {0.5, -6.0}, sc.noise_var, {0.1, 10.0}, 0,
                                     3000, 5);
  REQUIRE(r.size() == 2);
  for (const auto& k : r) CHECK(k.pass);
}
