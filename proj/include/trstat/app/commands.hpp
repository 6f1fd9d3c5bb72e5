#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trstat/app/config.hpp"

namespace trstat::app {

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> runs;
  std::optional<std::string> statistics;
};

void apply_overrides(SceneConfig& cfg, const Overrides& o);

/// Averaged maps (one grid file per statistic) and manifest.json. With
/// `mdm_dir`, realizations are read from a cmd_synth output directory instead
/// of being synthesized.
std::vector<std::filesystem::path> cmd_image(
    const SceneConfig& cfg, const std::optional<std::filesystem::path>& mdm_dir = {});

/// ks.csv, cfar.csv, invariance.csv, report.json and the averaged maps.
std::vector<std::filesystem::path> cmd_validate(const SceneConfig& cfg);

/// One MDM set per run, seeded exactly as cmd_image seeds its runs.
std::vector<std::filesystem::path> cmd_synth(const SceneConfig& cfg);

/// Parses argv and dispatches. Returns the process exit code:
/// 0 success, 2 configuration, 3 numerical, 4 I/O.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trstat::app
