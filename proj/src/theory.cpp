#include "trstat/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trstat/error.hpp"
#include "trstat/parallel.hpp"

namespace trstat {

namespace {

struct FrequencyModel {
  CMatrix a_t;  // N_T x M
  CMatrix a_r;  // N_R x M
  CMatrix m;    // M x M
  double total = 0.0;  // ||A_R M A_T^T||_F^2 / sigma^2
};

std::vector<FrequencyModel> frequency_models(const ScattererSet& scene, const ArrayLayout& layout,
                                             const FrequencyPlan& plan, ScatteringModel model,
                                             std::span<const double> noise_var) {
  layout.validate();
  scene.validate(plan.size());
  if (noise_var.size() != plan.size()) {
    throw InvalidArgument("noise variance list must have one entry per frequency");
  }
  std::vector<FrequencyModel> out(plan.size());
  for (std::size_t l = 0; l < plan.size(); ++l) {
    if (!(noise_var[l] > 0.0)) throw InvalidArgument("noncentrality needs positive noise variances");
    const double k = plan.wavenumber(l);
    auto& f = out[l];
    f.a_t = array_matrix(layout.tx, scene.positions, k);
    f.a_r = array_matrix(layout.rx, scene.positions, k);
    f.m = scattering_matrix(scene, l, k, model);
    f.total = (f.a_r * f.m * f.a_t.transpose()).squaredNorm() / noise_var[l];
  }
  return out;
}

double clamp_residual(double total, double dn) {
  return std::max(0.0, total - dn);
}

}  // namespace

NoncentralityPair noncentrality_projection(const ScattererSet& scene, const ArrayLayout& layout,
                                           const FrequencyPlan& plan, ScatteringModel model,
                                           std::span<const double> noise_var,
                                           const Position2D& probe) {
  const auto models = frequency_models(scene, layout, plan, model, noise_var);
  NoncentralityPair out;
  for (std::size_t l = 0; l < plan.size(); ++l) {
    const auto& f = models[l];
    const Eigen::Index nt = f.a_t.rows();
    const Eigen::Index nr = f.a_r.rows();
    const Eigen::Index m = f.m.rows();
    // Kronecker array matrix (N x M^2): column (p * M + q) = A_T[:, p] (x) A_R[:, q].
    CMatrix k(nt * nr, m * m);
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = 0; q < m; ++q) {
        k.col(p * m + q) = kron(f.a_t.col(p), f.a_r.col(q));
      }
    }
    const CVector vec_m = vectorize(f.m);
    const CVector signal = k * vec_m;

    const SteeringSet s = steering(layout, probe, plan.wavenumber(l));
    const CMatrix proj = (s.b * s.b.adjoint()) / s.b.squaredNorm();
    const CMatrix perp = CMatrix::Identity(proj.rows(), proj.cols()) - proj;
    const double dn = (signal.adjoint() * proj * signal)(0, 0).real() / noise_var[l];
    const double dd = (signal.adjoint() * perp * signal)(0, 0).real() / noise_var[l];
    out.delta_n.push_back(std::max(0.0, dn));
    out.delta_d.push_back(std::max(0.0, dd));
  }
  return out;
}

CVector point_spread(const CMatrix& array_to_scatterers, const CVector& probe_green) {
  return array_to_scatterers.adjoint() * probe_green / probe_green.squaredNorm();
}

NoncentralityPair noncentrality_explicit(const ScattererSet& scene, const ArrayLayout& layout,
                                         const FrequencyPlan& plan, ScatteringModel model,
                                         std::span<const double> noise_var,
                                         const Position2D& probe) {
  const auto models = frequency_models(scene, layout, plan, model, noise_var);
  NoncentralityPair out;
  for (std::size_t l = 0; l < plan.size(); ++l) {
    const auto& f = models[l];
    const SteeringSet s = steering(layout, probe, plan.wavenumber(l));
    const CVector h_t = point_spread(f.a_t, s.a_t);
    const CVector h_r = point_spread(f.a_r, s.a_r);
    const double b_norm_sq = s.a_t.squaredNorm() * s.a_r.squaredNorm();
    const cplx form = h_r.dot(f.m * h_t.conjugate());
    const double dn = b_norm_sq * std::norm(form) / noise_var[l];
    out.delta_n.push_back(dn);
    out.delta_d.push_back(clamp_residual(f.total, dn));
  }
  return out;
}

NoncentralityField noncentrality_field(const ScattererSet& scene, const ProbeBank& bank,
                                       const ArrayLayout& layout, const FrequencyPlan& plan,
                                       ScatteringModel model, std::span<const double> noise_var) {
  const auto models = frequency_models(scene, layout, plan, model, noise_var);
  const std::size_t cells = bank.cells();
  const auto nl = static_cast<Eigen::Index>(plan.size());
  NoncentralityField field;
  field.grid = bank.grid();
  field.delta_n = RMatrix::Zero(nl, static_cast<Eigen::Index>(cells));
  field.delta_d = RMatrix::Zero(nl, static_cast<Eigen::Index>(cells));
  for (const auto& f : models) field.total.push_back(f.total);

  parallel_for(cells, [&](std::size_t c) {
    const auto col = static_cast<Eigen::Index>(c);
    for (std::size_t l = 0; l < plan.size(); ++l) {
      const auto& f = models[l];
      const CVector a_t = bank.tx(l).col(col);
      const CVector a_r = bank.rx(l).col(col);
      const CVector h_t = point_spread(f.a_t, a_t);
      const CVector h_r = point_spread(f.a_r, a_r);
      const double b_norm_sq = bank.tx_norm_sq(l, c) * bank.rx_norm_sq(l, c);
      const double dn = b_norm_sq * std::norm(h_r.dot(f.m * h_t.conjugate())) / noise_var[l];
      const auto li = static_cast<Eigen::Index>(l);
      field.delta_n(li, col) = dn;
      field.delta_d(li, col) = clamp_residual(f.total, dn);
    }
  });
  return field;
}

CellTheory cell_theory(const NoncentralityField& field, const ProbeBank& bank, std::size_t cell,
                       std::span<const double> noise_var) {
  CellTheory t;
  const auto col = static_cast<Eigen::Index>(cell);
  for (std::size_t l = 0; l < bank.num_freqs(); ++l) {
    const auto li = static_cast<Eigen::Index>(l);
    t.delta_n.push_back(field.delta_n(li, col));
    t.delta_d.push_back(field.delta_d(li, col));
    t.b_norm_sq.push_back(bank.tx_norm_sq(l, cell) * bank.rx_norm_sq(l, cell));
  }
  t.noise_var.assign(noise_var.begin(), noise_var.end());
  t.num_pairs = bank.num_tx() * bank.num_rx();
  return t;
}

CellTheory cell_theory(const ScattererSet& scene, const ArrayLayout& layout,
                       const FrequencyPlan& plan, ScatteringModel model,
                       std::span<const double> noise_var, const Position2D& probe) {
  const NoncentralityPair nc = noncentrality_explicit(scene, layout, plan, model, noise_var, probe);
  CellTheory t;
  t.delta_n = nc.delta_n;
  t.delta_d = nc.delta_d;
  for (std::size_t l = 0; l < plan.size(); ++l) {
    const SteeringSet s = steering(layout, probe, plan.wavenumber(l));
    t.b_norm_sq.push_back(s.b.squaredNorm());
  }
  t.noise_var.assign(noise_var.begin(), noise_var.end());
  t.num_pairs = layout.num_pairs();
  return t;
}

StatLaw predict_stat_law(Statistic s, const CellTheory& cell, std::optional<std::size_t> freq) {
  const std::size_t nl = cell.delta_n.size();
  if (freq && *freq >= nl) throw InvalidArgument("frequency index out of range");
  if (cell.num_pairs < 2) throw InvalidArgument("laws need N >= 2");
  const int n = static_cast<int>(cell.num_pairs);
  auto single = [&]() -> std::size_t {
    if (freq) return *freq;
    if (nl == 1) return 0;
    throw UnsupportedStatistic(to_string(s) + " law is per frequency; choose a frequency");
  };

  switch (s) {
    case Statistic::mf: {
      const std::size_t l = single();
      return ComplexChiSquareLaw{1, cell.delta_n[l], cell.noise_var[l] * cell.b_norm_sq[l]};
    }
    case Statistic::ml: {
      const std::size_t l = single();
      return ComplexChiSquareLaw{1, cell.delta_n[l], cell.noise_var[l] / cell.b_norm_sq[l]};
    }
    case Statistic::na: {
      if (freq) return ComplexChiSquareLaw{1, cell.delta_n[*freq], 1.0};
      double total = 0.0;
      for (double d : cell.delta_n) total += d;
      return ComplexChiSquareLaw{static_cast<int>(nl), total, 1.0};
    }
    case Statistic::xi: {
      const std::size_t l = single();
      return ComplexFLaw{1, n - 1, cell.delta_n[l], cell.delta_d[l]};
    }
    case Statistic::li: {
      ReciprocalProductLaw law;
      for (std::size_t l = 0; l < nl; ++l) {
        if (freq && l != *freq) continue;
        law.factors.push_back({n - 1, cell.delta_d[l], cell.noise_var[l]});
      }
      return law;
    }
    default:
      throw UnsupportedStatistic(to_string(s) +
                                 " has no closed-form law; it is a transform of the Xi vector");
  }
}

std::vector<double> snr_vector(std::span<const double> b_norm_sq, std::span<const cplx> tau,
                               std::span<const double> noise_var) {
  if (b_norm_sq.size() != tau.size() || tau.size() != noise_var.size()) {
    throw InvalidArgument("SNR inputs must have one entry per frequency");
  }
  std::vector<double> out;
  for (std::size_t l = 0; l < tau.size(); ++l) {
    out.push_back(b_norm_sq[l] * std::norm(tau[l]) / noise_var[l]);
  }
  return out;
}

double log_mpi_stat(std::span<const double> xi, std::span<const double> snr, int dof_den) {
  if (xi.size() != snr.size() || xi.empty()) {
    throw InvalidArgument("Xi and SNR vectors must have equal nonzero length");
  }
  if (dof_den < 1) throw InvalidArgument("denominator dof must be >= 1");
  const double m = dof_den;
  double total = 0.0;
  for (std::size_t l = 0; l < xi.size(); ++l) {
    if (!(xi[l] >= 0.0)) throw InvalidArgument("Xi entries must be nonnegative");
    // f(x; CF_{1,M}(d)) / f(x; CF_{1,M}) = sum_j w_j z^j B(1, M) / B(1 + j, M), z = x / (1 + x)
    const PoissonWindow w = poisson_window(snr[l]);
    const double log_z = xi[l] > 0.0 ? std::log(xi[l]) - std::log1p(xi[l])
                                     : -std::numeric_limits<double>::infinity();
    const double lb1 = -std::log(m);  // log B(1, M)
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(w.weights.size());
    for (std::size_t i = 0; i < w.weights.size(); ++i) {
      const double j = static_cast<double>(w.first + i);
      const double lbj = std::lgamma(1.0 + j) + std::lgamma(m) - std::lgamma(1.0 + j + m);
      const double zj = j == 0.0 ? 0.0 : j * log_z;
      terms.push_back(std::log(w.weights[i]) + zj + lb1 - lbj);
      mx = std::max(mx, terms.back());
    }
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    total += mx + std::log(s);
  }
  return total;
}

double mpi_stat(std::span<const double> xi, std::span<const double> snr, int dof_den) {
  return std::exp(log_mpi_stat(xi, snr, dof_den));
}

}  // namespace trstat
