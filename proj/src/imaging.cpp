#include "trstat/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trstat/error.hpp"
#include "trstat/parallel.hpp"

namespace trstat {

std::size_t ImageGridSpec::nx() const {
  return static_cast<std::size_t>(std::floor((x_max - x_min) / step + 1e-9)) + 1;
}

std::size_t ImageGridSpec::ny() const {
  return static_cast<std::size_t>(std::floor((y_max - y_min) / step + 1e-9)) + 1;
}

std::size_t ImageGridSpec::nearest(const Position2D& p) const {
  auto snap = [this](double v, double lo, std::size_t n) {
    const double idx = std::round((v - lo) / step);
    return static_cast<std::size_t>(std::clamp(idx, 0.0, static_cast<double>(n - 1)));
  };
  return snap(p.y, y_min, ny()) * nx() + snap(p.x, x_min, nx());
}

void ImageGridSpec::validate() const {
  for (double v : {x_min, x_max, y_min, y_max, step}) {
    if (!std::isfinite(v)) throw InvalidArgument("grid bounds must be finite");
  }
  if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
  if (!(x_max >= x_min) || !(y_max >= y_min)) throw InvalidArgument("grid extent is empty");
}

void check_grid_clear(const ImageGridSpec& grid, const ArrayLayout& layout) {
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    const Position2D p = grid.cell(c);
    for (const auto* arr : {&layout.tx, &layout.rx}) {
      for (const auto& e : *arr) {
        if (distance(p, e) < kGridClearance) {
          std::ostringstream os;
          os << "grid cell (" << p.x << ", " << p.y << ") coincides with an array element";
          throw InvalidArgument(os.str());
        }
      }
    }
  }
}

std::string ImageMap::label() const {
  std::string s = to_string(statistic);
  if (frequency >= 0) s += "_f" + std::to_string(frequency);
  if (log_scale) s = "log_" + s;
  return s;
}

std::size_t ImageMap::masked_count() const {
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < mask.size(); ++i) n += mask.data()[i] != 0;
  return n;
}

ProbeBank::ProbeBank(const ArrayLayout& layout, const FrequencyPlan& plan,
                     const ImageGridSpec& grid)
    : grid_(grid) {
  layout.validate();
  grid.validate();
  const std::size_t cells = grid.cells();
  a_t_.resize(plan.size());
  a_r_.resize(plan.size());
  t_norm_.assign(plan.size(), std::vector<double>(cells));
  r_norm_.assign(plan.size(), std::vector<double>(cells));
  for (std::size_t l = 0; l < plan.size(); ++l) {
    a_t_[l].resize(static_cast<Eigen::Index>(layout.num_tx()), static_cast<Eigen::Index>(cells));
    a_r_[l].resize(static_cast<Eigen::Index>(layout.num_rx()), static_cast<Eigen::Index>(cells));
  }
  parallel_for(cells, [&](std::size_t c) {
    const Position2D p = grid_.cell(c);
    const auto col = static_cast<Eigen::Index>(c);
    for (std::size_t l = 0; l < plan.size(); ++l) {
      const SteeringSet s = steering(layout, p, plan.wavenumber(l));
      a_t_[l].col(col) = s.a_t;
      a_r_[l].col(col) = s.a_r;
      t_norm_[l][c] = s.a_t.squaredNorm();
      r_norm_[l][c] = s.a_r.squaredNorm();
    }
  });
}

std::vector<CellData> cell_data(const MdmSet& mdm, const ProbeBank& bank, std::size_t cell) {
  if (mdm.num_freqs() != bank.num_freqs()) {
    throw InvalidArgument("MDM set and probe bank disagree on the number of frequencies");
  }
  std::vector<CellData> out(mdm.num_freqs());
  const auto col = static_cast<Eigen::Index>(cell);
  for (std::size_t l = 0; l < mdm.num_freqs(); ++l) {
    const CMatrix& x = mdm.matrices[l];
    const auto a_t = bank.tx(l).col(col);
    const auto a_r = bank.rx(l).col(col);
    // Explicit loops keep the summation order independent of the grid size.
    cplx inner(0.0, 0.0);
    double energy = 0.0;
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      cplx acc(0.0, 0.0);
      for (Eigen::Index j = 0; j < x.rows(); ++j) {
        acc += std::conj(a_r[j]) * x(j, i);
        energy += std::norm(x(j, i));
      }
      inner += acc * std::conj(a_t[i]);
    }
    out[l] = {inner, bank.tx_norm_sq(l, cell), bank.rx_norm_sq(l, cell), energy};
  }
  return out;
}

bool default_log_scale(Statistic s) { return s == Statistic::glr || s == Statistic::li; }

bool effective_log_scale(Statistic s, const RenderOptions& opt) {
  if (!default_log_scale(s)) return false;
  return opt.log_scale.value_or(true);
}

double evaluate_statistic(Statistic s, std::span<const CellData> data,
                          std::span<const double> noise_var, const RenderOptions& opt) {
  std::size_t first = 0;
  std::size_t last = data.size();
  if (opt.combine == FrequencyCombine::Single) {
    if (opt.frequency >= data.size()) throw InvalidArgument("frequency index out of range");
    first = opt.frequency;
    last = first + 1;
  }
  const bool log_scale = effective_log_scale(s, opt);

  switch (s) {
    case Statistic::glr:
    case Statistic::rao:
    case Statistic::wald:
    case Statistic::gm:
    case Statistic::hm:
    case Statistic::xi: {
      std::vector<double> xis;
      xis.reserve(last - first);
      for (std::size_t l = first; l < last; ++l) xis.push_back(xi_from(data[l].projection()));
      switch (s) {
        case Statistic::glr: {
          if (!log_scale) return glr_stat(xis);
          double t = 0.0;
          for (double v : xis) t += std::log1p(v);
          return t;
        }
        case Statistic::rao: return rao_stat(xis);
        case Statistic::gm: return gm_stat(xis);
        case Statistic::hm: return hm_stat(xis);
        default: return wald_stat(xis);
      }
    }
    case Statistic::na: {
      double t = 0.0;
      for (std::size_t l = first; l < last; ++l) {
        if (l >= noise_var.size() || !(noise_var[l] > 0.0)) {
          throw InvalidArgument("na needs a positive noise variance per frequency");
        }
        t += data[l].projection().projected / noise_var[l];
      }
      return t;
    }
    case Statistic::mf:
    case Statistic::ml: {
      double t = 0.0;
      for (std::size_t l = first; l < last; ++l) {
        double v = std::norm(data[l].inner);
        if (s == Statistic::ml) {
          const double bb = data[l].b_norm_sq();
          v /= bb * bb;
        }
        t += v;
      }
      return t;
    }
    case Statistic::li: {
      double log_t = 0.0;
      for (std::size_t l = first; l < last; ++l) {
        const Projection p = data[l].projection();
        if (!(p.residual() > 1e-12 * p.energy)) {
          throw DegenerateDenominator("likelihood imaging: data lies in the probed subspace");
        }
        log_t -= std::log(p.residual());
      }
      return log_scale ? log_t : std::exp(log_t);
    }
  }
  throw UnsupportedStatistic("unhandled statistic");
}

std::vector<ImageMap> render_maps(std::span<const Statistic> stats, const MdmSet& mdm,
                                  const ProbeBank& bank, const RenderOptions& opt) {
  const ImageGridSpec& grid = bank.grid();
  const auto ny = static_cast<Eigen::Index>(grid.ny());
  const auto nx = static_cast<Eigen::Index>(grid.nx());
  std::vector<ImageMap> maps(stats.size());
  for (std::size_t k = 0; k < stats.size(); ++k) {
    ImageMap& m = maps[k];
    m.grid = grid;
    m.statistic = stats[k];
    m.log_scale = effective_log_scale(stats[k], opt);
    m.frequency = opt.combine == FrequencyCombine::Single ? static_cast<int>(opt.frequency) : -1;
    m.values = RMatrix::Zero(ny, nx);
    m.mask.setZero(ny, nx);
  }
  const std::vector<double>& noise =
      opt.assumed_noise_var.empty() ? mdm.noise_var : opt.assumed_noise_var;

  parallel_for(grid.cells(), [&](std::size_t c) {
    const auto row = static_cast<Eigen::Index>(c / grid.nx());
    const auto col = static_cast<Eigen::Index>(c % grid.nx());
    const std::vector<CellData> data = cell_data(mdm, bank, c);
    for (std::size_t k = 0; k < stats.size(); ++k) {
      try {
        const double v = evaluate_statistic(stats[k], data, noise, opt);
        if (std::isfinite(v)) {
          maps[k].values(row, col) = v;
          continue;
        }
      } catch (const NumericalError&) {
      }
      maps[k].mask(row, col) = 1;
    }
  });
  return maps;
}

ImageMap render_map(Statistic s, const MdmSet& mdm, const ProbeBank& bank,
                    const RenderOptions& opt) {
  const Statistic stats[] = {s};
  return std::move(render_maps(stats, mdm, bank, opt).front());
}

ImageMap render_map(Statistic s, const MdmSet& mdm, const ArrayLayout& layout,
                    const FrequencyPlan& plan, const ImageGridSpec& grid,
                    const RenderOptions& opt) {
  return render_map(s, mdm, ProbeBank(layout, plan, grid), opt);
}

std::vector<Peak> find_peaks(const ImageMap& map, std::size_t max_peaks, double min_separation) {
  const Eigen::Index ny = map.values.rows();
  const Eigen::Index nx = map.values.cols();
  std::vector<Peak> candidates;
  for (Eigen::Index r = 0; r < ny; ++r) {
    for (Eigen::Index c = 0; c < nx; ++c) {
      if (map.mask(r, c)) continue;
      const double v = map.values(r, c);
      bool is_max = true;
      for (Eigen::Index dr = -1; dr <= 1 && is_max; ++dr) {
        for (Eigen::Index dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const Eigen::Index rr = r + dr;
          const Eigen::Index cc = c + dc;
          if (rr < 0 || rr >= ny || cc < 0 || cc >= nx || map.mask(rr, cc)) continue;
          if (map.values(rr, cc) > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) {
        const auto ur = static_cast<std::size_t>(r);
        const auto uc = static_cast<std::size_t>(c);
        candidates.push_back({ur, uc, map.grid.cell(ur, uc), v});
      }
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });
  std::vector<Peak> out;
  for (const Peak& p : candidates) {
    if (out.size() >= max_peaks) break;
    const bool far = std::all_of(out.begin(), out.end(), [&](const Peak& q) {
      return distance(p.position, q.position) >= min_separation;
    });
    if (far) out.push_back(p);
  }
  return out;
}

Peak argmax(const ImageMap& map) {
  Peak best;
  bool found = false;
  for (Eigen::Index r = 0; r < map.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < map.values.cols(); ++c) {
      if (map.mask(r, c)) continue;
      if (!found || map.values(r, c) > best.value) {
        const auto ur = static_cast<std::size_t>(r);
        const auto uc = static_cast<std::size_t>(c);
        best = {ur, uc, map.grid.cell(ur, uc), map.values(r, c)};
        found = true;
      }
    }
  }
  if (!found) throw InvalidArgument("every cell of the map is masked");
  return best;
}

double peak_to_median_contrast(const ImageMap& map) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(map.values.size()));
  for (Eigen::Index r = 0; r < map.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < map.values.cols(); ++c) {
      if (!map.mask(r, c)) v.push_back(map.values(r, c));
    }
  }
  if (v.empty()) throw InvalidArgument("every cell of the map is masked");
  const double peak = *std::max_element(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double median = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  return (peak - median) / std::abs(median);
}

}  // namespace trstat
