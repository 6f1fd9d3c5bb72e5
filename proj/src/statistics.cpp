#include "trstat/statistics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "trstat/error.hpp"

namespace trstat {

namespace {

constexpr double kDegenerateRel = 1e-12;

void require_nonempty(std::span<const double> xi) {
  if (xi.empty()) throw InvalidArgument("Xi vector must not be empty");
  for (double v : xi) {
    if (!(v >= 0.0)) throw InvalidArgument("Xi entries must be nonnegative");
  }
}

void require_steering(const MdmSet& mdm, std::span<const SteeringSet> steer) {
  if (steer.size() != mdm.num_freqs()) {
    throw InvalidArgument("need one steering set per frequency");
  }
}

}  // namespace

std::string to_string(Statistic s) {
  switch (s) {
    case Statistic::glr: return "glr";
    case Statistic::rao: return "rao";
    case Statistic::wald: return "wald";
    case Statistic::gm: return "gm";
    case Statistic::hm: return "hm";
    case Statistic::na: return "na";
    case Statistic::mf: return "mf";
    case Statistic::ml: return "ml";
    case Statistic::li: return "li";
    case Statistic::xi: return "xi";
  }
  return "?";
}

const std::vector<Statistic>& all_statistics() {
  static const std::vector<Statistic> all{Statistic::glr, Statistic::rao, Statistic::wald,
                                          Statistic::gm,  Statistic::hm,  Statistic::na,
                                          Statistic::mf,  Statistic::ml,  Statistic::li,
                                          Statistic::xi};
  return all;
}

Statistic parse_statistic(const std::string& name) {
  for (Statistic s : all_statistics()) {
    if (to_string(s) == name) return s;
  }
  if (name == "tr") return Statistic::mf;
  throw InvalidArgument("unknown statistic '" + name + "'");
}

bool is_xi_function(Statistic s) {
  return s == Statistic::glr || s == Statistic::rao || s == Statistic::wald ||
         s == Statistic::gm || s == Statistic::hm || s == Statistic::xi;
}

Projection project(const CVector& x, const CVector& b) {
  if (x.size() != b.size()) throw InvalidArgument("x and b must have equal length");
  const double bb = b.squaredNorm();
  if (!(bb > 0.0)) throw InvalidArgument("steering vector must be nonzero");
  return {std::norm(b.dot(x)) / bb, x.squaredNorm()};
}

double xi_from(const Projection& p) {
  const double den = p.residual();
  if (!(den > kDegenerateRel * p.energy)) {
    std::ostringstream os;
    os << "data vector lies in the probed subspace (residual " << den << ", energy "
       << p.energy << ")";
    throw DegenerateDenominator(os.str());
  }
  return p.projected / den;
}

double xi(const CVector& x, const CVector& b) {
  if (x.size() < 2) throw InvalidArgument("Xi needs N >= 2");
  return xi_from(project(x, b));
}

double glr_stat(std::span<const double> xi) {
  require_nonempty(xi);
  double t = 1.0;
  for (double v : xi) t *= 1.0 + v;
  return t;
}

double rao_stat(std::span<const double> xi) {
  require_nonempty(xi);
  double t = 0.0;
  for (double v : xi) t += v / (v + 1.0);
  return t;
}

double wald_stat(std::span<const double> xi) {
  require_nonempty(xi);
  double t = 0.0;
  for (double v : xi) t += v;
  return t;
}

double gm_stat(std::span<const double> xi) {
  require_nonempty(xi);
  double log_sum = 0.0;
  for (double v : xi) {
    if (v == 0.0) return 0.0;
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(xi.size()));
}

double hm_stat(std::span<const double> xi) {
  require_nonempty(xi);
  double inv = 0.0;
  for (double v : xi) {
    if (v == 0.0) throw ZeroXi("harmonic mean undefined when some Xi is zero");
    inv += 1.0 / v;
  }
  return static_cast<double>(xi.size()) / inv;
}

double na_stat(const MdmSet& mdm, std::span<const SteeringSet> steer) {
  require_steering(mdm, steer);
  double t = 0.0;
  for (std::size_t l = 0; l < mdm.num_freqs(); ++l) {
    if (!(mdm.noise_var[l] > 0.0)) throw InvalidArgument("na needs positive noise variances");
    t += project(vectorize(mdm.matrices[l]), steer[l].b).projected / mdm.noise_var[l];
  }
  return t;
}

double na_stat_bilinear(const CMatrix& x, const CVector& a_t, const CVector& a_r,
                        double noise_var) {
  if (!(noise_var > 0.0)) throw InvalidArgument("na needs positive noise variance");
  const cplx form = a_r.dot(x * a_t.conjugate());
  return std::norm(form) / (a_r.squaredNorm() * a_t.squaredNorm() * noise_var);
}

double mf_image_stat(const CMatrix& x, const CVector& a_t, const CVector& a_r) {
  return std::norm(a_r.dot(x * a_t.conjugate()));
}

double ml_image_stat(const CMatrix& x, const CVector& a_t, const CVector& a_r) {
  const double nt = a_t.squaredNorm();
  const double nr = a_r.squaredNorm();
  if (!(nt > 0.0 && nr > 0.0)) throw InvalidArgument("steering vectors must be nonzero");
  return mf_image_stat(x, a_t, a_r) / (nt * nt * nr * nr);
}

double likelihood_image_stat(const MdmSet& mdm, std::span<const SteeringSet> steer) {
  require_steering(mdm, steer);
  double t = 1.0;
  for (std::size_t l = 0; l < mdm.num_freqs(); ++l) {
    const Projection p = project(vectorize(mdm.matrices[l]), steer[l].b);
    const double den = p.residual();
    if (!(den > kDegenerateRel * p.energy)) {
      throw DegenerateDenominator("likelihood imaging: data lies in the probed subspace");
    }
    t /= den;
  }
  return t;
}

CMatrix canonical_basis(const CVector& b) {
  const Eigen::Index n = b.size();
  const double nb = b.norm();
  if (!(nb > 0.0)) throw InvalidArgument("steering vector must be nonzero");
  const CVector u = b / nb;

  // Householder reflector H = I - 2 v v^H / ||v||^2 with v = e1 + c u, where the
  // unit phase c makes c * u[0] real and nonnegative; then H e1 = -c u. Columns
  // 2..N of H are an orthonormal basis of the complement of u.
  const double mag0 = std::abs(u[0]);
  const cplx c = mag0 > 0.0 ? std::conj(u[0]) / mag0 : cplx(1.0, 0.0);
  CVector v = c * u;
  v[0] += 1.0;
  CMatrix h = CMatrix::Identity(n, n);
  h -= (2.0 / v.squaredNorm()) * (v * v.adjoint());
  h.col(0) = u;
  return h;
}

double mis(const CVector& x, const CVector& b) {
  if (x.size() != b.size()) throw InvalidArgument("x and b must have equal length");
  if (x.size() < 2) throw InvalidArgument("MIS needs N >= 2");
  const CMatrix u = canonical_basis(b);
  const CVector xbar = u.adjoint() * x;
  const double num = std::norm(xbar[0]);
  const double den = xbar.tail(xbar.size() - 1).squaredNorm();
  if (!(den > kDegenerateRel * (num + den))) {
    throw DegenerateDenominator("canonical data has no component outside the signal axis");
  }
  return num / den;
}

}  // namespace trstat
