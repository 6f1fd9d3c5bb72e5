#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "trstat/error.hpp"
#include "trstat/forward.hpp"
#include "trstat/rng.hpp"

using namespace trstat;

namespace {

ScattererSet two_scatterers(std::size_t nl) {
  ScattererSet s;
  s.positions = {{-1.0, -6.0}, {1.0, -6.0}};
  s.tau = CMatrix(static_cast<Eigen::Index>(nl), 2);
  for (Eigen::Index l = 0; l < s.tau.rows(); ++l) {
    s.tau(l, 0) = 3.0;
    s.tau(l, 1) = 4.0;
  }
  return s;
}

}  // namespace

TEST_CASE("single scatterer: Born and Foldy-Lax coincide") {
  ScattererSet s;
  s.positions = {{0.5, -4.0}};
  s.tau = CMatrix::Constant(1, 1, cplx(2.0, -1.0));
  const CMatrix ba = scattering_matrix(s, 0, 2.0 * M_PI, ScatteringModel::BA);
  const CMatrix fl = scattering_matrix(s, 0, 2.0 * M_PI, ScatteringModel::FL);
  CHECK(ba(0, 0) == cplx(2.0, -1.0));
  CHECK(std::abs(fl(0, 0) - ba(0, 0)) < 1e-14);
}

TEST_CASE("Foldy-Lax with zero coupling is Born") {
  CVector tau(3);
  tau << 1.0, cplx(0.0, 2.0), 5.0;
  const CMatrix fl = foldy_lax_matrix(tau, CMatrix::Zero(3, 3));
  CHECK((fl - CMatrix(tau.asDiagonal())).norm() < 1e-14);
}

TEST_CASE("two coupled scatterers: Foldy-Lax residual") {
  const ScattererSet s = two_scatterers(1);
  const double k = 2.0 * M_PI;
  const CMatrix fl = scattering_matrix(s, 0, k, ScatteringModel::FL);
  CHECK((fl - CMatrix(s.tau.row(0).transpose().asDiagonal())).norm() > 1e-3);
  CMatrix system(2, 2);
  system << 1.0 / 3.0, -green(s.positions[0], s.positions[1], k),
      -green(s.positions[1], s.positions[0], k), 1.0 / 4.0;
  CHECK((system * fl - CMatrix::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("Foldy-Lax error cases") {
  ScattererSet s = two_scatterers(1);
  s.tau(0, 1) = 0.0;
  CHECK_THROWS_AS(scattering_matrix(s, 0, 1.0, ScatteringModel::FL), ZeroTau);
  CHECK_NOTHROW(scattering_matrix(s, 0, 1.0, ScatteringModel::BA));
  // 1/tau - S singular by construction.
  CVector tau(2);
  tau << 1.0, 1.0;
  CMatrix coupling(2, 2);
  coupling << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(foldy_lax_matrix(tau, coupling), SingularFoldyLax);
}

TEST_CASE("vectorize is column-major") {
  CMatrix x(2, 2);
  x << 1.0, 3.0, 2.0, 4.0;
  const CVector v = vectorize(x);
  CHECK(v[0] == cplx(1.0));
  CHECK(v[1] == cplx(2.0));
  CHECK(v[2] == cplx(3.0));
  CHECK(v[3] == cplx(4.0));
}

TEST_CASE("vec of an outer product is the Kronecker product") {
  std::mt19937_64 rng(5);
  const CVector a_t = oracle::random_vector(rng, 4);
  const CVector a_r = oracle::random_vector(rng, 3);
  const CVector v = vectorize(a_r * a_t.transpose());
  CHECK((v - kron(a_t, a_r)).norm() < 1e-14);
}

TEST_CASE("adjoint identity b^H vec(X) = a_R^H X conj(a_T)") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector a_t = oracle::random_vector(rng, 5);
    const CVector a_r = oracle::random_vector(rng, 7);
    const CMatrix x = oracle::random_matrix(rng, 7, 5);
    const cplx lhs = kron(a_t, a_r).dot(vectorize(x));
    const cplx rhs = (a_r.adjoint() * x * a_t.conjugate())(0, 0);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
  }
}

TEST_CASE("noise-free single scatterer reproduces b tau") {
  const ArrayLayout layout = default_layout();
  ScattererSet s;
  s.positions = {{0.7, -5.2}};
  s.tau = CMatrix(2, 1);
  s.tau << cplx(3.0, 1.0), cplx(-2.0, 0.5);
  const FrequencyPlan plan = FrequencyPlan::from_wavelengths({1.0, 0.5});
  const MdmSet mdm = synthesize_mdm(layout, s, plan, {0.0, 0.0}, ScatteringModel::BA, 9);
  for (std::size_t l = 0; l < 2; ++l) {
    const SteeringSet st = steering(layout, s.positions[0], plan.wavenumber(l));
    const CVector expect = st.b * s.tau(static_cast<Eigen::Index>(l), 0);
    CHECK((vectorize(mdm.matrices[l]) - expect).norm() <= 1e-12 * expect.norm());
  }
}

TEST_CASE("synthesis is deterministic in the seed") {
  const ArrayLayout layout = default_layout();
  const FrequencyPlan plan = FrequencyPlan::from_wavelengths({1.0, 0.5, 1.0 / 3.0});
  const ScattererSet s = two_scatterers(3);
  const MdmSynthesizer synth(layout, s, plan, {0.03, 0.3, 0.03}, ScatteringModel::FL);
  const MdmSet a = synth.realize(42);
  const MdmSet b = synth.realize(42);
  const MdmSet c = synth.realize(43);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(a.matrices[l] == b.matrices[l]);
    CHECK(a.matrices[l] != c.matrices[l]);
  }
}

TEST_CASE("noise second moments") {
  const ArrayLayout layout{{{0.0, 0.0}, {1.0, 0.0}}, {{0.0, 1.0}}};
  const double var = 0.7;
  const MdmSynthesizer synth(layout, 2, {var, var});
  const int draws = 100000;
  std::vector<double> power;
  cplx cross = 0.0, between = 0.0;
  power.reserve(draws);
  for (int n = 0; n < draws; ++n) {
    const MdmSet m = synth.realize(derive_seed(3, {static_cast<std::uint64_t>(n)}));
    power.push_back(std::norm(m.matrices[0](0, 0)));
    cross += m.matrices[0](0, 0) * std::conj(m.matrices[0](0, 1));
    between += m.matrices[0](0, 0) * std::conj(m.matrices[1](0, 0));
  }
  const auto [mean, se] = oracle::mean_and_se(power);
  CHECK(std::abs(mean - var) < 3.0 * se);
  // Off-diagonal covariances: standard error var / sqrt(draws) per entry.
  const double off_se = var / std::sqrt(static_cast<double>(draws));
  CHECK(std::abs(cross / static_cast<double>(draws)) < 4.0 * off_se);
  CHECK(std::abs(between / static_cast<double>(draws)) < 4.0 * off_se);
}

TEST_CASE("scaled realization shares the noise stream") {
  const ArrayLayout layout = default_layout();
  const MdmSynthesizer synth(layout, 1, {0.5});
  const MdmSet base = synth.realize(11);
  const MdmSet scaled = synth.realize_scaled(11, 4.0);
  CHECK((scaled.matrices[0] - 2.0 * base.matrices[0]).norm() < 1e-12);
  CHECK(scaled.noise_var[0] == doctest::Approx(2.0));
}
