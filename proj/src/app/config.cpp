#include "trstat/app/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace trstat::app {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string join(const std::string& path, std::size_t idx) {
  return path + "/" + std::to_string(idx);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!keys.count(it.key())) throw ConfigError(join(path, it.key()), "unknown key");
  }
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
  return d;
}

double get_positive(const json& v, const std::string& path) {
  const double d = get_number(v, path);
  if (!(d > 0.0)) throw ConfigError(path, "must be positive");
  return d;
}

std::uint64_t get_count(const json& v, const std::string& path, std::uint64_t min_value) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u < min_value) throw ConfigError(path, "must be >= " + std::to_string(min_value));
    return u;
  }
  const auto i = v.get<std::int64_t>();
  if (i < static_cast<std::int64_t>(min_value)) {
    throw ConfigError(path, "must be >= " + std::to_string(min_value));
  }
  return static_cast<std::uint64_t>(i);
}

bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

const json& array_at(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  return v;
}

std::vector<double> number_list(const json& v, const std::string& path) {
  std::vector<double> out;
  std::size_t i = 0;
  for (const auto& e : array_at(v, path)) out.push_back(get_number(e, join(path, i++)));
  return out;
}

Position2D get_point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected [x, y]");
  return {get_number(v[0], join(path, 0)), get_number(v[1], join(path, 1))};
}

cplx get_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {get_number(v, path), 0.0};
  if (v.is_object()) {
    reject_unknown(v, path, {"re", "im"});
    const double re = v.contains("re") ? get_number(v["re"], join(path, "re")) : 0.0;
    const double im = v.contains("im") ? get_number(v["im"], join(path, "im")) : 0.0;
    return {re, im};
  }
  throw ConfigError(path, "expected a number or {\"re\", \"im\"}");
}

std::vector<Position2D> parse_array(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  if (v.contains("elements")) {
    reject_unknown(v, path, {"elements"});
    std::vector<Position2D> out;
    std::size_t i = 0;
    const std::string ep = join(path, "elements");
    for (const auto& e : array_at(v["elements"], ep)) out.push_back(get_point(e, join(ep, i++)));
    if (out.empty()) throw ConfigError(ep, "array needs at least one element");
    return out;
  }
  reject_unknown(v, path, {"count", "spacing", "origin", "direction"});
  for (const char* key : {"count", "spacing", "origin"}) {
    if (!v.contains(key)) throw ConfigError(join(path, key), "required field is missing");
  }
  const auto count = get_count(v["count"], join(path, "count"), 1);
  const double spacing = get_positive(v["spacing"], join(path, "spacing"));
  const Position2D origin = get_point(v["origin"], join(path, "origin"));
  Position2D dir{1.0, 0.0};
  if (v.contains("direction")) dir = get_point(v["direction"], join(path, "direction"));
  if (std::hypot(dir.x, dir.y) == 0.0) throw ConfigError(join(path, "direction"), "must be nonzero");
  return linear_array(count, spacing, origin, dir.x, dir.y);
}

template <typename Fn>
void rethrow_as_config(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

std::vector<Statistic> parse_statistic_list(const std::string& list) {
  std::vector<Statistic> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(parse_statistic(item));
    } catch (const Error& e) {
      throw ConfigError("/statistics", e.what());
    }
  }
  if (out.empty()) throw ConfigError("/statistics", "at least one statistic is required");
  return out;
}

SceneConfig parse_config_json(const json& doc) {
  reject_unknown(doc, "", {"description", "arrays", "wavelengths_m", "frequencies_hz",
                           "noise_db", "scatterers", "model", "grid", "statistics", "render",
                           "mc", "output"});
  SceneConfig cfg;
  Scenario& sc = cfg.scenario;

  for (const char* key : {"model", "noise_db", "scatterers"}) {
    if (!doc.contains(key)) throw ConfigError(std::string("/") + key, "required field is missing");
  }
  if (doc.contains("description")) get_string(doc["description"], "/description");

  // Model.
  const std::string model = get_string(doc["model"], "/model");
  if (model == "BA") {
    sc.model = ScatteringModel::BA;
  } else if (model == "FL") {
    sc.model = ScatteringModel::FL;
  } else {
    throw ConfigError("/model", "expected \"BA\" or \"FL\"");
  }

  // Frequencies.
  const bool has_w = doc.contains("wavelengths_m");
  const bool has_f = doc.contains("frequencies_hz");
  if (has_w == has_f) {
    throw ConfigError("/wavelengths_m", "give exactly one of wavelengths_m or frequencies_hz");
  }
  if (has_w) {
    const auto w = number_list(doc["wavelengths_m"], "/wavelengths_m");
    rethrow_as_config("/wavelengths_m", [&] { sc.plan = FrequencyPlan::from_wavelengths(w); });
  } else {
    const auto f = number_list(doc["frequencies_hz"], "/frequencies_hz");
    rethrow_as_config("/frequencies_hz", [&] { sc.plan = FrequencyPlan::from_frequencies(f); });
  }
  const std::size_t nl = sc.plan.size();

  // Noise.
  cfg.noise_db = number_list(doc["noise_db"], "/noise_db");
  if (cfg.noise_db.size() != nl) {
    throw ConfigError("/noise_db", "length " + std::to_string(cfg.noise_db.size()) +
                                       " does not match the " + std::to_string(nl) +
                                       " frequencies");
  }
  for (double db : cfg.noise_db) sc.noise_var.push_back(db_to_linear(db));

  // Arrays.
  sc.layout = default_layout();
  if (doc.contains("arrays")) {
    const json& a = doc["arrays"];
    reject_unknown(a, "/arrays", {"tx", "rx"});
    if (a.contains("tx")) sc.layout.tx = parse_array(a["tx"], "/arrays/tx");
    if (a.contains("rx")) sc.layout.rx = parse_array(a["rx"], "/arrays/rx");
  }
  rethrow_as_config("/arrays", [&] { sc.layout.validate(); });

  // Scatterers.
  const json& scat = array_at(doc["scatterers"], "/scatterers");
  if (scat.empty()) throw ConfigError("/scatterers", "at least one scatterer is required");
  sc.scene.tau = CMatrix(static_cast<Eigen::Index>(nl), static_cast<Eigen::Index>(scat.size()));
  for (std::size_t m = 0; m < scat.size(); ++m) {
    const std::string path = join("/scatterers", m);
    reject_unknown(scat[m], path, {"position", "tau"});
    for (const char* key : {"position", "tau"}) {
      if (!scat[m].contains(key)) throw ConfigError(join(path, key), "required field is missing");
    }
    sc.scene.positions.push_back(get_point(scat[m]["position"], join(path, "position")));
    const json& tau = scat[m]["tau"];
    const std::string tp = join(path, "tau");
    if (tau.is_array()) {
      if (tau.size() != nl) {
        throw ConfigError(tp, "expected one coefficient per frequency (" + std::to_string(nl) + ")");
      }
      for (std::size_t l = 0; l < nl; ++l) {
        sc.scene.tau(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m)) =
            get_complex(tau[l], join(tp, l));
      }
    } else {
      const cplx t = get_complex(tau, tp);
      for (std::size_t l = 0; l < nl; ++l) {
        sc.scene.tau(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m)) = t;
      }
    }
  }
  rethrow_as_config("/scatterers", [&] { sc.scene.validate(nl); });

  // Grid.
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    reject_unknown(g, "/grid", {"x_min", "x_max", "y_min", "y_max", "step"});
    auto read = [&](const char* key, double& dst) {
      if (g.contains(key)) dst = get_number(g[key], join("/grid", key));
    };
    read("x_min", sc.grid.x_min);
    read("x_max", sc.grid.x_max);
    read("y_min", sc.grid.y_min);
    read("y_max", sc.grid.y_max);
    read("step", sc.grid.step);
  }
  rethrow_as_config("/grid", [&] {
    sc.grid.validate();
    check_grid_clear(sc.grid, sc.layout);
  });

  // Statistics.
  if (doc.contains("statistics")) {
    cfg.statistics.clear();
    const json& s = array_at(doc["statistics"], "/statistics");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string name = get_string(s[i], join("/statistics", i));
      rethrow_as_config(join("/statistics", i), [&] { cfg.statistics.push_back(parse_statistic(name)); });
    }
    if (cfg.statistics.empty()) throw ConfigError("/statistics", "at least one statistic is required");
  }

  // Rendering.
  if (doc.contains("render")) {
    const json& r = doc["render"];
    reject_unknown(r, "/render", {"log_scale", "mf_ml_combine"});
    if (r.contains("log_scale")) cfg.render.log_scale = get_bool(r["log_scale"], "/render/log_scale");
    if (r.contains("mf_ml_combine")) {
      const std::string c = get_string(r["mf_ml_combine"], "/render/mf_ml_combine");
      if (c == "sum") {
        cfg.mc.per_frequency_maps = false;
      } else if (c == "per_frequency") {
        cfg.mc.per_frequency_maps = true;
      } else {
        throw ConfigError("/render/mf_ml_combine", "expected \"sum\" or \"per_frequency\"");
      }
    }
  }

  // Monte Carlo.
  McConfig& mc = cfg.mc;
  if (doc.contains("mc")) {
    const json& m = doc["mc"];
    reject_unknown(m, "/mc", {"runs", "base_seed", "noise_scalings", "ks_cells", "ks_samples",
                              "ks_frequency", "cfar_trials", "cfar_calibration", "pfa"});
    if (m.contains("runs")) mc.runs = get_count(m["runs"], "/mc/runs", 1);
    if (m.contains("base_seed")) mc.base_seed = get_count(m["base_seed"], "/mc/base_seed", 0);
    if (m.contains("noise_scalings")) {
      mc.noise_scalings = number_list(m["noise_scalings"], "/mc/noise_scalings");
      for (std::size_t i = 0; i < mc.noise_scalings.size(); ++i) {
        if (!(mc.noise_scalings[i] > 0.0)) {
          throw ConfigError(join("/mc/noise_scalings", i), "must be positive");
        }
      }
    }
    if (m.contains("ks_cells")) {
      const json& c = array_at(m["ks_cells"], "/mc/ks_cells");
      for (std::size_t i = 0; i < c.size(); ++i) {
        mc.ks_cells.push_back(get_point(c[i], join("/mc/ks_cells", i)));
      }
    }
    if (m.contains("ks_samples")) mc.ks_samples = get_count(m["ks_samples"], "/mc/ks_samples", 1);
    if (m.contains("ks_frequency")) {
      mc.ks_frequency = get_count(m["ks_frequency"], "/mc/ks_frequency", 0);
      if (mc.ks_frequency >= nl) throw ConfigError("/mc/ks_frequency", "frequency index out of range");
    }
    if (m.contains("cfar_trials")) mc.cfar_trials = get_count(m["cfar_trials"], "/mc/cfar_trials", 1);
    if (m.contains("cfar_calibration")) {
      mc.cfar_calibration = get_count(m["cfar_calibration"], "/mc/cfar_calibration", 1);
    }
    if (m.contains("pfa")) {
      mc.pfa = get_number(m["pfa"], "/mc/pfa");
      if (!(mc.pfa > 0.0 && mc.pfa < 1.0)) throw ConfigError("/mc/pfa", "must lie in (0, 1)");
    }
  }
  mc.statistics = cfg.statistics;
  mc.render = cfg.render;

  // Output.
  if (doc.contains("output")) {
    const json& o = doc["output"];
    reject_unknown(o, "/output", {"dir", "formats"});
    if (o.contains("dir")) cfg.output.dir = get_string(o["dir"], "/output/dir");
    if (o.contains("formats")) {
      cfg.output.csv = false;
      cfg.output.pgm = false;
      const json& f = array_at(o["formats"], "/output/formats");
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string name = get_string(f[i], join("/output/formats", i));
        if (name == "csv") {
          cfg.output.csv = true;
        } else if (name == "pgm") {
          cfg.output.pgm = true;
        } else {
          throw ConfigError(join("/output/formats", i), "expected \"csv\" or \"pgm\"");
        }
      }
      if (!cfg.output.csv && !cfg.output.pgm) {
        throw ConfigError("/output/formats", "at least one format is required");
      }
    }
  }
  return cfg;
}

SceneConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("malformed JSON: ") + e.what());
  }
  return parse_config_json(doc);
}

}  // namespace trstat::app
