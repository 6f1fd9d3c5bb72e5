#pragma once

#include <cstddef>
#include <vector>

#include "trstat/types.hpp"

namespace trstat {

/// Point in the 2-D imaging plane, meters.
struct Position2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position2D&, const Position2D&) = default;
};

double distance(const Position2D& a, const Position2D& b);

/// Transmit and receive element positions. Element order fixes the MDM layout:
/// rows follow rx order, columns follow tx order.
struct ArrayLayout {
  std::vector<Position2D> tx;
  std::vector<Position2D> rx;

  std::size_t num_tx() const { return tx.size(); }
  std::size_t num_rx() const { return rx.size(); }
  std::size_t num_pairs() const { return tx.size() * rx.size(); }

  /// Throws InvalidArgument on empty or self-coincident arrays.
  void validate() const;
};

/// Uniform linear array of `count` elements starting at `origin`, stepping
/// `spacing` meters along the unit vector (dir_x, dir_y).
std::vector<Position2D> linear_array(std::size_t count, double spacing, Position2D origin,
                                     double dir_x = 1.0, double dir_y = 0.0);

/// Default non-colocated geometry: 11 Tx at y = 0 from x = -2.5 to 2.5 and 17 Rx
/// at y = 1 from x = -4 to 4, both with 0.5 m pitch.
ArrayLayout default_layout();

inline constexpr double kSpeedOfLight = 2.99792458e8;
inline constexpr double kMinSeparation = 1e-9;

/// Probing frequencies, stored as wavelengths so that configs that specify
/// wavelengths directly are reproduced without a round trip through c.
class FrequencyPlan {
public:
  /// Empty plan; only useful as a placeholder before assignment.
  FrequencyPlan() = default;
  static FrequencyPlan from_wavelengths(std::vector<double> wavelengths_m);
  static FrequencyPlan from_frequencies(const std::vector<double>& frequencies_hz);

  std::size_t size() const { return wavelengths_.size(); }
  double wavelength(std::size_t l) const { return wavelengths_.at(l); }
  double wavenumber(std::size_t l) const { return wavenumbers_.at(l); }
  double frequency(std::size_t l) const { return kSpeedOfLight / wavelengths_.at(l); }
  const std::vector<double>& wavelengths() const { return wavelengths_; }
  const std::vector<double>& wavenumbers() const { return wavenumbers_; }

private:
  explicit FrequencyPlan(std::vector<double> wavelengths_m);

  std::vector<double> wavelengths_;
  std::vector<double> wavenumbers_;
};

/// Tx and Rx Green vectors toward one probed point and their Kronecker product
/// b = a_T (x) a_R, i.e. b[i * N_R + j] = a_T[i] * a_R[j].
struct SteeringSet {
  CVector a_t;
  CVector a_r;
  CVector b;
};

/// Background Green function H0^(1)(k |src - dst|) with the j/4 factor dropped.
cplx green(const Position2D& src, const Position2D& dst, double wavenumber);

SteeringSet steering(const ArrayLayout& layout, const Position2D& probe, double wavenumber);

/// Column m holds the Green vector of `elements` toward points[m].
CMatrix array_matrix(const std::vector<Position2D>& elements,
                     const std::vector<Position2D>& points, double wavenumber);

CVector kron(const CVector& a, const CVector& b);

}  // namespace trstat
