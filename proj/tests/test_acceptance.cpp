// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "trstat/distributions.hpp"
#include "trstat/rng.hpp"
#include "trstat/scenario.hpp"
#include "trstat/statistics.hpp"
#include "trstat/theory.hpp"
#include "trstat/validate.hpp"

using namespace trstat;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Position2D random_probe(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(-3.5, 3.5), y(-8.5, -3.5);
  return {x(rng), y(rng)};
}

Outcome algebraic_identities() {
  std::mt19937_64 rng(101);
  double worst_a = 0.0, worst_b = 0.0, worst_c = 0.0, worst_d = 0.0;
  for (int t = 0; t < 100; ++t) {
    const CVector a_t = oracle::random_vector(rng, 11);
    const CVector a_r = oracle::random_vector(rng, 17);
    const CMatrix x = oracle::random_matrix(rng, 17, 11);
    const CVector b = kron(a_t, a_r);
    const cplx lhs = b.dot(vectorize(x));
    const cplx rhs = (a_r.adjoint() * x * a_t.conjugate())(0, 0);
    worst_a = std::max(worst_a, std::abs(lhs - rhs) / std::abs(rhs));

    const std::vector<SteeringSet> one{{a_t, a_r, b}};
    worst_b = std::max(worst_b, rel_err(na_stat(MdmSet{{x}, {0.3}}, one),
                                        na_stat_bilinear(x, a_t, a_r, 0.3)));

    std::vector<SteeringSet> steer;
    MdmSet mdm;
    std::vector<double> xis;
    double energy = 1.0;
    for (int l = 0; l < 3; ++l) {
      const CVector t_l = oracle::random_vector(rng, 11);
      const CVector r_l = oracle::random_vector(rng, 17);
      steer.push_back({t_l, r_l, kron(t_l, r_l)});
      mdm.matrices.push_back(oracle::random_matrix(rng, 17, 11));
      mdm.noise_var.push_back(1.0);
      const CVector v = vectorize(mdm.matrices.back());
      xis.push_back(xi(v, steer.back().b));
      energy *= v.squaredNorm();
    }
    worst_c = std::max(worst_c, rel_err(glr_stat(xis), likelihood_image_stat(mdm, steer) * energy));

    const std::vector<double> single{xis[0]};
    const double w = wald_stat(single);
    worst_d = std::max({worst_d, rel_err(glr_stat(single), 1.0 + w),
                        rel_err(rao_stat(single), w / (1.0 + w))});
  }
  Outcome o;
  o.pass = worst_a <= 1e-12 && worst_b <= 1e-12 && worst_c <= 1e-12 && worst_d <= 1e-14;
  o.detail = "vec/bilinear " + fmt("%.1e", worst_a) + ", na forms " + fmt("%.1e", worst_b) +
             ", glr vs li " + fmt("%.1e", worst_c) + ", L=1 relations " + fmt("%.1e", worst_d);
  return o;
}

Outcome noncentrality_equivalence() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> mag(0.5, 4.0), ph(0.0, 2.0 * M_PI);
  const ArrayLayout layout = default_layout();
  double worst = 0.0, worst_sum = 0.0;
  for (int scene = 0; scene < 50; ++scene) {
    const std::size_t nl = scene % 2 == 0 ? 3 : 1;
    const std::size_t m = 1 + static_cast<std::size_t>(scene / 2) % 3;
    const ScatteringModel model = (scene / 6) % 2 == 0 ? ScatteringModel::BA : ScatteringModel::FL;
    const FrequencyPlan plan = nl == 3 ? FrequencyPlan::from_wavelengths({1.0, 0.5, 1.0 / 3.0})
                                       : FrequencyPlan::from_wavelengths({0.8});
    ScattererSet s;
    for (std::size_t i = 0; i < m; ++i) s.positions.push_back(random_probe(rng));
    s.tau = CMatrix(static_cast<Eigen::Index>(nl), static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < s.tau.size(); ++i) s.tau.data()[i] = std::polar(mag(rng), ph(rng));
    const std::vector<double> var(nl, 0.03);
    const Position2D probe = random_probe(rng);

    const auto proj = noncentrality_projection(s, layout, plan, model, var, probe);
    const auto expl = noncentrality_explicit(s, layout, plan, model, var, probe);
    const MdmSynthesizer synth(layout, s, plan, var, model);
    for (std::size_t l = 0; l < nl; ++l) {
      worst = std::max({worst, rel_err(proj.delta_n[l], expl.delta_n[l]),
                        rel_err(proj.delta_d[l], expl.delta_d[l])});
      const double total = synth.clean()[l].squaredNorm() / var[l];
      worst_sum = std::max(worst_sum, rel_err(proj.delta_n[l] + proj.delta_d[l], total));
    }
  }
  return {worst <= 1e-9 && worst_sum <= 1e-10,
          "projection vs point-spread " + fmt("%.1e", worst) + ", Pythagoras " + fmt("%.1e", worst_sum)};
}

Outcome mis_equivalence() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> gamma(0.05, 20.0), ph(0.0, 2.0 * M_PI);
  const Eigen::Index n = 187;
  double worst_eq = 0.0, worst_inv = 0.0;
  for (int t = 0; t < 100; ++t) {
    const CVector b = oracle::random_vector(rng, n);
    const CVector x = oracle::random_vector(rng, n);
    const double m = mis(x, b);
    worst_eq = std::max(worst_eq, rel_err(m, xi(x, b)));

    // Group element acting in canonical coordinates.
    const CMatrix u = canonical_basis(b);
    CVector bar = u.adjoint() * x;
    bar[0] *= std::polar(1.0, ph(rng));
    bar.tail(n - 1) = oracle::random_unitary(rng, n - 1) * bar.tail(n - 1);
    const CVector moved = gamma(rng) * (u * bar);
    worst_inv = std::max(worst_inv, rel_err(mis(moved, b), m));
  }
  return {worst_eq <= 1e-10 && worst_inv <= 1e-10,
          "mis vs xi " + fmt("%.1e", worst_eq) + ", group invariance " + fmt("%.1e", worst_inv)};
}

Outcome glr_rao_oracles() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> mag(0.2, 4.0), ph(0.0, 2.0 * M_PI), lvar(-3.0, 0.0);
  const Scenario sc = paper_scenario();
  double worst_glr = 0.0, worst_rao = 0.0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t l = static_cast<std::size_t>(t) % sc.plan.size();
    const SteeringSet st = steering(sc.layout, random_probe(rng), sc.plan.wavenumber(l));
    const CVector& b = st.b;
    const double s2 = std::pow(10.0, lvar(rng));
    const cplx tau = std::polar(mag(rng), ph(rng)) * std::sqrt(s2 / b.squaredNorm());
    RngStream noise(derive_seed(404, {static_cast<std::uint64_t>(t)}));
    CVector x = b * tau;
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += noise.complex_gaussian(s2);
    const double n = static_cast<double>(x.size());
    const double xi_val = xi(x, b);

    // Generalized likelihood ratio with the closed-form ML estimates plugged in.
    const cplx tau_hat = b.dot(x) / b.squaredNorm();
    const double s1_hat = (x - b * tau_hat).squaredNorm() / n;
    const double s0_hat = x.squaredNorm() / n;
    const CVector zero = CVector::Zero(x.size());
    const double log_lr = oracle::gaussian_log_pdf(x, b * tau_hat, s1_hat) -
                          oracle::gaussian_log_pdf(x, zero, s0_hat);
    const std::vector<double> one{xi_val};
    // Relative error of the ratio itself is the absolute error of its log.
    worst_glr = std::max(worst_glr, std::abs(log_lr - n * std::log(glr_stat(one))));

    // Rao statistic from finite differences at the null estimate theta0 = (0, 0, s0_hat).
    auto log_pdf = [&](double tr, double ti, double var) {
      return oracle::gaussian_log_pdf(x, b * cplx(tr, ti), var);
    };
    auto mean = [&](double tr, double ti) -> CVector { return b * cplx(tr, ti); };
    const double h = 1e-4 * std::sqrt(s0_hat / b.squaredNorm());
    const double hv = 1e-4 * s0_hat;
    const double score[3] = {
        (log_pdf(h, 0, s0_hat) - log_pdf(-h, 0, s0_hat)) / (2 * h),
        (log_pdf(0, h, s0_hat) - log_pdf(0, -h, s0_hat)) / (2 * h),
        (log_pdf(0, 0, s0_hat + hv) - log_pdf(0, 0, s0_hat - hv)) / (2 * hv)};
    // Fisher information for CN(mu(theta), v(theta) I): 2 Re(dmu^H dmu) / v + N dv dv / v^2.
    const CVector dmu[3] = {(mean(h, 0) - mean(-h, 0)) / (2 * h),
                            (mean(0, h) - mean(0, -h)) / (2 * h), CVector::Zero(x.size())};
    const double dv[3] = {0.0, 0.0, 1.0};
    Eigen::Matrix3d fim;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        fim(i, j) = 2.0 * dmu[i].dot(dmu[j]).real() / s0_hat + n * dv[i] * dv[j] / (s0_hat * s0_hat);
      }
    }
    const Eigen::Matrix3d inv = fim.inverse();
    double rao = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) rao += score[i] * inv(i, j) * score[j];
    }
    // Closed form 2 N Xi / (1 + Xi): the t_rao term scaled by 2N.
    worst_rao = std::max(worst_rao, rel_err(rao / (2.0 * n), rao_stat(one)));
  }
  return {worst_glr <= 1e-8 && worst_rao <= 1e-4,
          "GLR " + fmt("%.1e", worst_glr) + ", Rao " + fmt("%.1e", worst_rao) + " over 10 points"};
}

Outcome distribution_suite() {
  const Scenario sc = paper_scenario();
  Scenario null_scene = sc;
  null_scene.scene.tau.setZero();
  const Position2D target = sc.scene.positions[1];
  const std::uint64_t seed = 20240601;
  struct Family {
    const char* name;
    const Scenario* scenario;
    Statistic stat;
  };
  const Family families[] = {{"xi_h0", &null_scene, Statistic::xi},
                             {"xi_h1", &sc, Statistic::xi},
                             {"mf", &sc, Statistic::mf},
                             {"ml", &sc, Statistic::ml},
                             {"na", &sc, Statistic::na}};
  int passed = 0;
  std::string detail;
  std::uint64_t k = 0;
  for (const Family& f : families) {
    const auto r = ks_experiment(*f.scenario, target, f.stat, 0, 10000, derive_seed(seed, {k++}));
    passed += r.ks.pass;
    detail += std::string(f.name) + " D=" + fmt("%.4f", r.ks.distance) + (r.ks.pass ? " ok" : " REJECT") + "; ";
  }
  detail += "critical " + fmt("%.4f", ks_critical_1pct(10000)) + ", " + std::to_string(passed) + "/5";
  return {passed == 5, detail};
}

Outcome cfar() {
  const Scenario sc = paper_scenario();
  CfarConfig cfg;
  cfg.cell = {0.0, -6.0};
  cfg.base_noise_var = sc.noise_var;
  cfg.scalings = {0.1, 10.0};
  cfg.statistics = {Statistic::glr, Statistic::rao, Statistic::wald, Statistic::na};
  cfg.trials = 10000;
  cfg.calibration_trials = 100000;
  cfg.pfa = 0.1;
  cfg.seed = 606;
  const auto rows = cfar_experiment(sc.layout, sc.plan, cfg);
  bool ok = true;
  std::string detail;
  for (const auto& r : rows) {
    const bool control = r.statistic == Statistic::na;
    ok = ok && (control ? !r.within_3se : r.within_3se);
    detail += to_string(r.statistic) + "@" + fmt("%g", r.scaling) + "=" + fmt("%.4f", r.pfa) + " ";
  }
  detail += "(band 0.1 +/- " + fmt("%.4f", 3.0 * rows.front().std_error) + ")";
  return {ok, detail};
}

Outcome scene_reproduction() {
  bool ok = true;
  std::string detail;
  for (auto model : {ScatteringModel::BA, ScatteringModel::FL}) {
    const Scenario sc = paper_scenario(model);
    McConfig mc;
    mc.runs = 100;
    mc.base_seed = 1;
    mc.statistics = {Statistic::glr, Statistic::rao, Statistic::wald, Statistic::li};
    const AveragedMaps avg = run_average(sc, mc);
    const double li_contrast = peak_to_median_contrast(avg.maps[3]);
    detail += to_string(model) + ":";
    for (std::size_t k = 0; k < 3; ++k) {
      const auto peaks = find_peaks(avg.maps[k], 2, 0.5);
      bool located = peaks.size() == 2;
      std::vector<bool> hit(sc.scene.size(), false);
      for (const Peak& p : peaks) {
        bool near = false;
        for (std::size_t m = 0; m < sc.scene.size(); ++m) {
          if (!hit[m] && distance(p.position, sc.scene.positions[m]) <= sc.grid.step + 1e-9) {
            hit[m] = near = true;
            break;
          }
        }
        located = located && near;
      }
      const double contrast = peak_to_median_contrast(avg.maps[k]);
      ok = ok && located && contrast > li_contrast;
      detail += " " + avg.maps[k].label() + (located ? " peaks ok" : " peaks MISS") +
                fmt(" c=%.3g", contrast) + ";";
    }
    detail += " log_li c=" + fmt("%.3g", li_contrast) + ". ";
  }
  return {ok, detail};
}

Outcome moments() {
  const Scenario sc = paper_scenario();
  std::string detail;
  bool ok = true;
  const ComplexChiSquareLaw laws[] = {{1, 20.5, 0.03}, {3, 4.0, 0.5}, {186, 0.0, 1.0}};
  std::uint64_t seed = 808;
  for (const auto& law : laws) {
    RngStream rng(seed++);
    std::vector<double> v(100000);
    for (double& x : v) x = sample(law, rng);
    const auto [m, se] = oracle::mean_and_se(v);
    const double z = std::abs(m - law.mean()) / se;
    ok = ok && z < 4.0;
    detail += "CChi2 mean z=" + fmt("%.2f", z) + "; ";
  }
  // Xi under H0 at the paper geometry.
  const SteeringSet st = steering(sc.layout, {0.0, -6.0}, sc.plan.wavenumber(0));
  std::vector<double> v(100000);
  for (std::size_t i = 0; i < v.size(); ++i) {
    RngStream rng(derive_seed(909, {i}));
    CVector x(st.b.size());
    rng.fill_complex_gaussian(x, sc.noise_var[0]);
    v[i] = xi(x, st.b);
  }
  const auto [m, se] = oracle::mean_and_se(v);
  const double z = std::abs(m - 1.0 / 185.0) / se;
  ok = ok && z < 4.0;
  detail += "E[Xi|H0]=" + fmt("%.6f", m) + " vs " + fmt("%.6f", 1.0 / 185.0) + " z=" + fmt("%.2f", z);
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "algebraic identities", 1.0, algebraic_identities},
      {2, "noncentrality equivalence", 5.0, noncentrality_equivalence},
      {3, "maximal invariant equivalence", 5.0, mis_equivalence},
      {4, "GLR / Rao oracles", 10.0, glr_rao_oracles},
      {5, "distribution suite", 120.0, distribution_suite},
      {6, "CFAR", 120.0, cfar},
      {7, "scene reproduction", 600.0, scene_reproduction},
      {8, "moment checks", 30.0, moments},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s  #%d %-30s %7.2fs (budget %gs%s)  %s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                secs, c.budget_s, in_time ? "" : ", exceeded", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu acceptance criteria passed\n",
              static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
