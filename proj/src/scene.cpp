#include "trstat/scene.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "trstat/bessel.hpp"
#include "trstat/error.hpp"

namespace trstat {

double distance(const Position2D& a, const Position2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

namespace {

void check_array(const std::vector<Position2D>& elems, const char* name) {
  if (elems.empty()) {
    throw InvalidArgument(std::string(name) + " array must contain at least one element");
  }
  for (const auto& p : elems) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidArgument(std::string(name) + " array has a non-finite coordinate");
    }
  }
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      if (distance(elems[i], elems[j]) < kMinSeparation) {
        std::ostringstream os;
        os << name << " elements " << i << " and " << j << " coincide";
        throw InvalidArgument(os.str());
      }
    }
  }
}

}  // namespace

void ArrayLayout::validate() const {
  check_array(tx, "tx");
  check_array(rx, "rx");
}

std::vector<Position2D> linear_array(std::size_t count, double spacing, Position2D origin,
                                     double dir_x, double dir_y) {
  const double norm = std::hypot(dir_x, dir_y);
  if (!(norm > 0.0)) throw InvalidArgument("linear array direction must be nonzero");
  dir_x /= norm;
  dir_y /= norm;
  std::vector<Position2D> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = spacing * static_cast<double>(i);
    out.push_back({origin.x + s * dir_x, origin.y + s * dir_y});
  }
  return out;
}

ArrayLayout default_layout() {
  return {linear_array(11, 0.5, {-2.5, 0.0}), linear_array(17, 0.5, {-4.0, 1.0})};
}

FrequencyPlan::FrequencyPlan(std::vector<double> wavelengths_m)
    : wavelengths_(std::move(wavelengths_m)) {
  if (wavelengths_.empty()) throw InvalidArgument("frequency plan needs at least one frequency");
  for (std::size_t i = 0; i < wavelengths_.size(); ++i) {
    if (!(wavelengths_[i] > 0.0) || !std::isfinite(wavelengths_[i])) {
      throw InvalidArgument("wavelengths must be positive and finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (wavelengths_[i] == wavelengths_[j]) {
        throw InvalidArgument("frequencies must be distinct");
      }
    }
  }
  wavenumbers_.reserve(wavelengths_.size());
  for (double w : wavelengths_) wavenumbers_.push_back(2.0 * std::numbers::pi / w);
}

FrequencyPlan FrequencyPlan::from_wavelengths(std::vector<double> wavelengths_m) {
  return FrequencyPlan(std::move(wavelengths_m));
}

FrequencyPlan FrequencyPlan::from_frequencies(const std::vector<double>& frequencies_hz) {
  std::vector<double> w;
  w.reserve(frequencies_hz.size());
  for (double f : frequencies_hz) {
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw InvalidArgument("frequencies must be positive and finite");
    }
    w.push_back(kSpeedOfLight / f);
  }
  return FrequencyPlan(std::move(w));
}

cplx green(const Position2D& src, const Position2D& dst, double wavenumber) {
  const double r = distance(src, dst);
  if (!(r >= kMinSeparation)) {
    std::ostringstream os;
    os << "Green function evaluated at separation " << r << " m";
    throw SingularGreen(os.str());
  }
  const double arg = wavenumber * r;
  return {bessel::j0(arg), bessel::y0(arg)};
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a[i] * b;
  }
  return out;
}

SteeringSet steering(const ArrayLayout& layout, const Position2D& probe, double wavenumber) {
  SteeringSet s;
  s.a_t.resize(static_cast<Eigen::Index>(layout.num_tx()));
  s.a_r.resize(static_cast<Eigen::Index>(layout.num_rx()));
  for (std::size_t i = 0; i < layout.num_tx(); ++i) {
    s.a_t[static_cast<Eigen::Index>(i)] = green(layout.tx[i], probe, wavenumber);
  }
  for (std::size_t j = 0; j < layout.num_rx(); ++j) {
    s.a_r[static_cast<Eigen::Index>(j)] = green(layout.rx[j], probe, wavenumber);
  }
  s.b = kron(s.a_t, s.a_r);
  return s;
}

CMatrix array_matrix(const std::vector<Position2D>& elements,
                     const std::vector<Position2D>& points, double wavenumber) {
  CMatrix a(static_cast<Eigen::Index>(elements.size()), static_cast<Eigen::Index>(points.size()));
  for (std::size_t m = 0; m < points.size(); ++m) {
    for (std::size_t i = 0; i < elements.size(); ++i) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) =
          green(elements[i], points[m], wavenumber);
    }
  }
  return a;
}

}  // namespace trstat
