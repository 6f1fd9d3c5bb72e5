#include "trstat/app/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "trstat/app/config.hpp"

namespace trstat::app {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const fs::path& path) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw IoError("malformed number '" + s + "' in " + path.string());
  return v;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

fs::path mdm_csv_path(const fs::path& dir, std::size_t run, std::size_t l) {
  return dir / ("mdm_run" + std::to_string(run) + "_f" + std::to_string(l) + ".csv");
}

fs::path mdm_json_path(const fs::path& dir, std::size_t run) {
  return dir / ("mdm_run" + std::to_string(run) + ".json");
}

}  // namespace

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string grid_csv(const ImageMap& map) {
  std::string out = "y\\x";
  const auto ny = static_cast<std::size_t>(map.values.rows());
  const auto nx = static_cast<std::size_t>(map.values.cols());
  for (std::size_t c = 0; c < nx; ++c) out += "," + format_value(map.grid.x(c));
  out += '\n';
  for (std::size_t r = 0; r < ny; ++r) {
    out += format_value(map.grid.y(r));
    for (std::size_t c = 0; c < nx; ++c) {
      const auto rr = static_cast<Eigen::Index>(r);
      const auto cc = static_cast<Eigen::Index>(c);
      out += ',';
      out += map.mask(rr, cc) ? std::string("nan") : format_value(map.values(rr, cc));
    }
    out += '\n';
  }
  return out;
}

void write_grid_csv(const fs::path& path, const ImageMap& map) { write_text(path, grid_csv(map)); }

GridCsv read_grid_csv(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty grid file " + path.string());
  const auto header = split_line(line);
  if (header.size() < 2 || header[0] != "y\\x") throw IoError("bad grid header in " + path.string());
  GridCsv g;
  for (std::size_t i = 1; i < header.size(); ++i) g.xs.push_back(parse_double(header[i], path));
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) throw IoError("ragged grid row in " + path.string());
    g.ys.push_back(parse_double(cells[0], path));
    std::vector<double> row;
    for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(parse_double(cells[i], path));
    rows.push_back(std::move(row));
  }
  g.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(g.xs.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < g.xs.size(); ++c) {
      g.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return g;
}

ImageMap as_written(const ImageMap& map) {
  ImageMap out = map;
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    if (!out.mask.data()[i]) {
      out.values.data()[i] = std::strtod(format_value(out.values.data()[i]).c_str(), nullptr);
    }
  }
  return out;
}

PgmBounds write_pgm(const fs::path& path, const ImageMap& map) {
  PgmBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < map.values.size(); ++i) {
    if (map.mask.data()[i]) continue;
    b.min = std::min(b.min, map.values.data()[i]);
    b.max = std::max(b.max, map.values.data()[i]);
  }
  if (b.min > b.max) b = {0.0, 0.0};
  const double range = b.max - b.min;
  const Eigen::Index ny = map.values.rows();
  const Eigen::Index nx = map.values.cols();

  std::string data = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n65535\n";
  for (Eigen::Index r = ny - 1; r >= 0; --r) {
    for (Eigen::Index c = 0; c < nx; ++c) {
      unsigned level = 0;
      if (!map.mask(r, c) && range > 0.0) {
        level = static_cast<unsigned>(std::lround((map.values(r, c) - b.min) / range * 65535.0));
      }
      data += static_cast<char>((level >> 8) & 0xFF);
      data += static_cast<char>(level & 0xFF);
    }
  }
  write_text(path, data);
  return b;
}

void write_mdm(const fs::path& dir, const MdmRun& run) {
  ensure_dir(dir);
  const auto& mats = run.mdm.matrices;
  for (std::size_t l = 0; l < mats.size(); ++l) {
    std::string text;
    for (Eigen::Index r = 0; r < mats[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < mats[l].cols(); ++c) {
        if (c > 0) text += ',';
        text += format_17(mats[l](r, c).real()) + "," + format_17(mats[l](r, c).imag());
      }
      text += '\n';
    }
    write_text(mdm_csv_path(dir, run.run, l), text);
  }
  json side;
  side["run"] = run.run;
  side["seed"] = run.seed;
  side["num_frequencies"] = mats.size();
  side["num_rx"] = mats.empty() ? 0 : mats.front().rows();
  side["num_tx"] = mats.empty() ? 0 : mats.front().cols();
  side["noise_var"] = run.mdm.noise_var;
  side["wavelengths_m"] = run.wavelengths;
  json files = json::array();
  for (std::size_t l = 0; l < mats.size(); ++l) {
    files.push_back(mdm_csv_path(dir, run.run, l).filename().string());
  }
  side["files"] = files;
  write_text(mdm_json_path(dir, run.run), side.dump(2) + "\n");
}

MdmRun read_mdm(const fs::path& dir, std::size_t run) {
  const fs::path jp = mdm_json_path(dir, run);
  std::ifstream in = open_in(jp);
  json side;
  try {
    side = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("malformed sidecar " + jp.string() + ": " + e.what());
  }
  MdmRun out;
  try {
    out.run = side.at("run").get<std::size_t>();
    out.seed = side.at("seed").get<std::uint64_t>();
    const auto nl = side.at("num_frequencies").get<std::size_t>();
    const auto nr = side.at("num_rx").get<Eigen::Index>();
    const auto nt = side.at("num_tx").get<Eigen::Index>();
    out.mdm.noise_var = side.at("noise_var").get<std::vector<double>>();
    out.wavelengths = side.at("wavelengths_m").get<std::vector<double>>();
    for (std::size_t l = 0; l < nl; ++l) {
      const fs::path cp = mdm_csv_path(dir, run, l);
      std::ifstream csv = open_in(cp);
      CMatrix m(nr, nt);
      std::string line;
      for (Eigen::Index r = 0; r < nr; ++r) {
        if (!std::getline(csv, line)) throw IoError("too few rows in " + cp.string());
        const auto cells = split_line(line);
        if (static_cast<Eigen::Index>(cells.size()) != 2 * nt) {
          throw IoError("wrong column count in " + cp.string());
        }
        for (Eigen::Index c = 0; c < nt; ++c) {
          m(r, c) = {parse_double(cells[static_cast<std::size_t>(2 * c)], cp),
                     parse_double(cells[static_cast<std::size_t>(2 * c + 1)], cp)};
        }
      }
      out.mdm.matrices.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw IoError("malformed sidecar " + jp.string() + ": " + e.what());
  }
  return out;
}

std::vector<std::size_t> list_mdm_runs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  static const std::regex pattern(R"(mdm_run(\d+)\.json)");
  std::vector<std::size_t> runs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) runs.push_back(std::stoull(m[1].str()));
  }
  std::sort(runs.begin(), runs.end());
  return runs;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

}  // namespace trstat::app
