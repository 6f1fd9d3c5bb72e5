#include "trstat/forward.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "trstat/error.hpp"
#include "trstat/rng.hpp"

namespace trstat {

std::string to_string(ScatteringModel m) { return m == ScatteringModel::BA ? "BA" : "FL"; }

ScatteringModel parse_scattering_model(const std::string& s) {
  if (s == "BA" || s == "ba") return ScatteringModel::BA;
  if (s == "FL" || s == "fl") return ScatteringModel::FL;
  throw InvalidArgument("unknown scattering model '" + s + "' (expected BA or FL)");
}

void ScattererSet::validate(std::size_t num_freqs) const {
  if (positions.empty()) throw InvalidArgument("scene needs at least one scatterer");
  if (tau.rows() != static_cast<Eigen::Index>(num_freqs) ||
      tau.cols() != static_cast<Eigen::Index>(positions.size())) {
    std::ostringstream os;
    os << "tau must be " << num_freqs << "x" << positions.size() << ", got " << tau.rows()
       << "x" << tau.cols();
    throw InvalidArgument(os.str());
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (distance(positions[i], positions[j]) < kMinSeparation) {
        throw InvalidArgument("scatterer positions must be pairwise distinct");
      }
    }
  }
}

CMatrix foldy_lax_matrix(const CVector& tau, const CMatrix& coupling) {
  const Eigen::Index m = tau.size();
  CMatrix k = -coupling;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tau[i] == cplx(0.0, 0.0)) {
      throw ZeroTau("Foldy-Lax model needs every scattering coefficient to be nonzero");
    }
    k(i, i) += 1.0 / tau[i];
  }
  Eigen::PartialPivLU<CMatrix> lu(k);
  if (!(lu.rcond() >= 1e-12)) {
    std::ostringstream os;
    os << "Foldy-Lax system is singular (rcond = " << lu.rcond() << ")";
    throw SingularFoldyLax(os.str());
  }
  return lu.inverse();
}

CMatrix scattering_matrix(const ScattererSet& scene, std::size_t freq_index, double wavenumber,
                          ScatteringModel model) {
  const auto l = static_cast<Eigen::Index>(freq_index);
  const CVector tau = scene.tau.row(l).transpose();
  if (model == ScatteringModel::BA) return tau.asDiagonal();

  const auto m = static_cast<Eigen::Index>(scene.size());
  CMatrix s = CMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j) {
        s(i, j) = green(scene.positions[static_cast<std::size_t>(i)],
                        scene.positions[static_cast<std::size_t>(j)], wavenumber);
      }
    }
  }
  return foldy_lax_matrix(tau, s);
}

CVector vectorize(const CMatrix& x) {
  return Eigen::Map<const CVector>(x.data(), x.size());
}

MdmSynthesizer::MdmSynthesizer(const ArrayLayout& layout, const ScattererSet& scene,
                               const FrequencyPlan& plan, std::vector<double> noise_var,
                               ScatteringModel model)
    : noise_var_(std::move(noise_var)) {
  layout.validate();
  scene.validate(plan.size());
  if (noise_var_.size() != plan.size()) {
    throw InvalidArgument("noise variance list must have one entry per frequency");
  }
  for (double v : noise_var_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("noise variances must be >= 0");
  }
  clean_.reserve(plan.size());
  for (std::size_t l = 0; l < plan.size(); ++l) {
    const double k = plan.wavenumber(l);
    const CMatrix a_t = array_matrix(layout.tx, scene.positions, k);
    const CMatrix a_r = array_matrix(layout.rx, scene.positions, k);
    const CMatrix m = scattering_matrix(scene, l, k, model);
    clean_.push_back(a_r * m * a_t.transpose());
  }
}

MdmSynthesizer::MdmSynthesizer(const ArrayLayout& layout, std::size_t num_freqs,
                               std::vector<double> noise_var)
    : noise_var_(std::move(noise_var)) {
  layout.validate();
  if (noise_var_.size() != num_freqs) {
    throw InvalidArgument("noise variance list must have one entry per frequency");
  }
  for (double v : noise_var_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("noise variances must be >= 0");
  }
  clean_.assign(num_freqs, CMatrix::Zero(static_cast<Eigen::Index>(layout.num_rx()),
                                         static_cast<Eigen::Index>(layout.num_tx())));
}

MdmSet MdmSynthesizer::realize(std::uint64_t seed) const { return realize_scaled(seed, 1.0); }

MdmSet MdmSynthesizer::realize_scaled(std::uint64_t seed, double scale) const {
  MdmSet out;
  out.matrices.reserve(clean_.size());
  out.noise_var.reserve(clean_.size());
  for (std::size_t l = 0; l < clean_.size(); ++l) {
    const double var = noise_var_[l] * scale;
    CMatrix x = clean_[l];
    if (var > 0.0) {
      RngStream rng(derive_seed(seed, {l}));
      // Column-major walk so the draw order matches vec(W).
      for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (Eigen::Index r = 0; r < x.rows(); ++r) x(r, c) += rng.complex_gaussian(var);
      }
    }
    out.matrices.push_back(std::move(x));
    out.noise_var.push_back(var);
  }
  return out;
}

MdmSet synthesize_mdm(const ArrayLayout& layout, const ScattererSet& scene,
                      const FrequencyPlan& plan, const std::vector<double>& noise_var,
                      ScatteringModel model, std::uint64_t seed) {
  return MdmSynthesizer(layout, scene, plan, noise_var, model).realize(seed);
}

}  // namespace trstat
