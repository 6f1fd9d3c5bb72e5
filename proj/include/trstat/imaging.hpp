#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trstat/forward.hpp"
#include "trstat/scene.hpp"
#include "trstat/statistics.hpp"
#include "trstat/types.hpp"

namespace trstat {

/// Rectangular probing grid; cells at x_min + i * step (i < nx), likewise in y.
struct ImageGridSpec {
  double x_min = -4.0;
  double x_max = 4.0;
  double y_min = -9.0;
  double y_max = -3.0;
  double step = 0.1;

  std::size_t nx() const;
  std::size_t ny() const;
  std::size_t cells() const { return nx() * ny(); }
  double x(std::size_t col) const { return x_min + step * static_cast<double>(col); }
  double y(std::size_t row) const { return y_min + step * static_cast<double>(row); }
  Position2D cell(std::size_t row, std::size_t col) const { return {x(col), y(row)}; }
  /// Row-major flat index: row * nx + col.
  Position2D cell(std::size_t flat) const { return cell(flat / nx(), flat % nx()); }
  /// Nearest cell to p (clamped to the grid).
  std::size_t nearest(const Position2D& p) const;

  void validate() const;
};

inline constexpr double kGridClearance = 1e-6;

/// Throws InvalidArgument if any cell lies within kGridClearance of an array element.
void check_grid_clear(const ImageGridSpec& grid, const ArrayLayout& layout);

/// One statistic over the grid. values(row, col), row = y index. Cells whose
/// evaluation failed are flagged in `mask` (1 = masked) and hold 0 in `values`.
struct ImageMap {
  ImageGridSpec grid;
  Statistic statistic = Statistic::wald;
  bool log_scale = false;
  /// -1 when frequencies were combined, otherwise the frequency index.
  int frequency = -1;
  RMatrix values;
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> mask;

  std::string label() const;
  std::size_t masked_count() const;
};

/// Tx / Rx Green vectors for every grid cell and frequency, evaluated once and
/// reused by every realization.
class ProbeBank {
public:
  ProbeBank(const ArrayLayout& layout, const FrequencyPlan& plan, const ImageGridSpec& grid);

  const ImageGridSpec& grid() const { return grid_; }
  std::size_t num_freqs() const { return a_t_.size(); }
  std::size_t cells() const { return grid_.cells(); }
  std::size_t num_tx() const { return static_cast<std::size_t>(a_t_.front().rows()); }
  std::size_t num_rx() const { return static_cast<std::size_t>(a_r_.front().rows()); }

  /// Column `cell` is a_T (resp. a_R) at that cell.
  const CMatrix& tx(std::size_t l) const { return a_t_[l]; }
  const CMatrix& rx(std::size_t l) const { return a_r_[l]; }
  double tx_norm_sq(std::size_t l, std::size_t cell) const { return t_norm_[l][cell]; }
  double rx_norm_sq(std::size_t l, std::size_t cell) const { return r_norm_[l][cell]; }

private:
  ImageGridSpec grid_;
  std::vector<CMatrix> a_t_;
  std::vector<CMatrix> a_r_;
  std::vector<std::vector<double>> t_norm_;
  std::vector<std::vector<double>> r_norm_;
};

/// Per-frequency sufficient quantities at one cell: inner = a_R^H X a_T^* = b^H x.
struct CellData {
  cplx inner;
  double tx_norm_sq = 0.0;
  double rx_norm_sq = 0.0;
  double energy = 0.0;

  double b_norm_sq() const { return tx_norm_sq * rx_norm_sq; }
  Projection projection() const { return {std::norm(inner) / b_norm_sq(), energy}; }
};

enum class FrequencyCombine { Sum, Single };

struct RenderOptions {
  /// Natural log for glr and li. Defaults to true for those two.
  std::optional<bool> log_scale;
  /// mf, ml, xi: sum the per-frequency values or use `frequency` only. Other
  /// statistics also honour Single by restricting to that frequency.
  FrequencyCombine combine = FrequencyCombine::Sum;
  std::size_t frequency = 0;
  /// Variances assumed by na; the MDM set's own values when empty.
  std::vector<double> assumed_noise_var;
};

bool default_log_scale(Statistic s);
bool effective_log_scale(Statistic s, const RenderOptions& opt);

/// Computes b^H x, norms and energy at one cell for every frequency.
std::vector<CellData> cell_data(const MdmSet& mdm, const ProbeBank& bank, std::size_t cell);

/// Value of one statistic from per-frequency cell data (before log scaling).
/// `noise_var` is only read by na.
double evaluate_statistic(Statistic s, std::span<const CellData> data,
                          std::span<const double> noise_var, const RenderOptions& opt);

/// Evaluates the statistic on every cell. Cell-level numerical errors are masked.
ImageMap render_map(Statistic s, const MdmSet& mdm, const ProbeBank& bank,
                    const RenderOptions& opt = {});

/// Several statistics from one pass over the grid.
std::vector<ImageMap> render_maps(std::span<const Statistic> stats, const MdmSet& mdm,
                                  const ProbeBank& bank, const RenderOptions& opt = {});

/// Convenience overload that builds the probe bank.
ImageMap render_map(Statistic s, const MdmSet& mdm, const ArrayLayout& layout,
                    const FrequencyPlan& plan, const ImageGridSpec& grid,
                    const RenderOptions& opt = {});

struct Peak {
  std::size_t row = 0;
  std::size_t col = 0;
  Position2D position;
  double value = 0.0;
};

/// Strict 8-neighbour local maxima (masked cells ignored), sorted by value,
/// greedily thinned so that accepted peaks are at least `min_separation` apart.
std::vector<Peak> find_peaks(const ImageMap& map, std::size_t max_peaks, double min_separation);

/// Global argmax over unmasked cells.
Peak argmax(const ImageMap& map);

/// (max - median) / |median| over unmasked cells.
double peak_to_median_contrast(const ImageMap& map);

}  // namespace trstat
