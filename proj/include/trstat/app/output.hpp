#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "trstat/forward.hpp"
#include "trstat/imaging.hpp"
#include "trstat/scene.hpp"

namespace trstat::app {

/// "%.9g".
std::string format_value(double v);

/// Header "y\x,x_0,...,x_{nx-1}", then one line per grid row in increasing y,
/// starting with the row's y. Masked cells are written as "nan".
std::string grid_csv(const ImageMap& map);
void write_grid_csv(const std::filesystem::path& path, const ImageMap& map);

struct GridCsv {
  std::vector<double> xs;
  std::vector<double> ys;
  /// rows = ys, cols = xs; NaN where masked.
  RMatrix values;
};
GridCsv read_grid_csv(const std::filesystem::path& path);

/// Copy of `map` whose values are exactly what grid_csv prints.
ImageMap as_written(const ImageMap& map);

struct PgmBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Binary 16-bit PGM, min-max normalized over unmasked cells, largest y on the
/// top line. Masked cells are written as 0.
PgmBounds write_pgm(const std::filesystem::path& path, const ImageMap& map);

struct MdmRun {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  MdmSet mdm;
  std::vector<double> wavelengths;
};

/// mdm_run<run>_f<l>.csv per frequency (N_R lines of 2 N_T values, re and im
/// interleaved, "%.17g") plus mdm_run<run>.json with dimensions, variances,
/// wavelengths and seed.
void write_mdm(const std::filesystem::path& dir, const MdmRun& run);
MdmRun read_mdm(const std::filesystem::path& dir, std::size_t run);
/// Run indices with a sidecar in `dir`, ascending.
std::vector<std::size_t> list_mdm_runs(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);
void ensure_dir(const std::filesystem::path& dir);

}  // namespace trstat::app
