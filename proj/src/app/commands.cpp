#include "trstat/app/commands.hpp"

#include <cmath>

#include <json.hpp>

#include "trstat/app/output.hpp"
#include "trstat/validate.hpp"

namespace trstat::app {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPeakSeparation = 0.5;

json peak_json(const Peak& p) {
  return {{"row", p.row}, {"col", p.col}, {"x", p.position.x}, {"y", p.position.y},
          {"value", p.value}};
}

json scenario_json(const SceneConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  json scat = json::array();
  for (std::size_t m = 0; m < sc.scene.size(); ++m) {
    scat.push_back({{"x", sc.scene.positions[m].x}, {"y", sc.scene.positions[m].y}});
  }
  return {{"model", to_string(sc.model)},
          {"wavelengths_m", sc.plan.wavelengths()},
          {"noise_var", sc.noise_var},
          {"num_tx", sc.layout.tx.size()},
          {"num_rx", sc.layout.rx.size()},
          {"scatterers", scat},
          {"grid",
           {{"x_min", sc.grid.x_min},
            {"x_max", sc.grid.x_max},
            {"y_min", sc.grid.y_min},
            {"y_max", sc.grid.y_max},
            {"step", sc.grid.step},
            {"nx", sc.grid.nx()},
            {"ny", sc.grid.ny()}}}};
}

/// Writes every averaged map and returns its manifest entries.
json write_maps(const AveragedMaps& avg, const SceneConfig& cfg, const fs::path& dir,
                std::vector<fs::path>& written) {
  const std::size_t max_peaks = std::max<std::size_t>(cfg.scenario.scene.size(), 1);
  json entries = json::array();
  for (std::size_t k = 0; k < avg.maps.size(); ++k) {
    // Peaks are located on the values exactly as printed.
    const ImageMap map = as_written(avg.maps[k]);
    json e;
    e["label"] = map.label();
    e["statistic"] = to_string(map.statistic);
    e["log_scale"] = map.log_scale;
    e["frequency"] = map.frequency;
    e["masked_cells"] = map.masked_count();
    e["masked_evaluations"] = avg.masked_evaluations[k];
    if (map.masked_count() < static_cast<std::size_t>(map.values.size())) {
      e["argmax"] = peak_json(argmax(map));
      json peaks = json::array();
      for (const Peak& p : find_peaks(map, max_peaks, kPeakSeparation)) peaks.push_back(peak_json(p));
      e["peaks"] = peaks;
    }
    if (cfg.output.csv) {
      const fs::path p = dir / (map.label() + ".csv");
      write_grid_csv(p, map);
      e["csv"] = p.filename().string();
      written.push_back(p);
    }
    if (cfg.output.pgm) {
      const fs::path p = dir / (map.label() + ".pgm");
      const PgmBounds b = write_pgm(p, map);
      e["pgm"] = p.filename().string();
      e["pgm_min"] = b.min;
      e["pgm_max"] = b.max;
      written.push_back(p);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void check_compatible(const MdmRun& run, const Scenario& sc, const fs::path& dir) {
  const std::string where = " in " + dir.string() + " run " + std::to_string(run.run);
  if (run.mdm.matrices.size() != sc.plan.size()) throw IoError("frequency count differs" + where);
  for (std::size_t l = 0; l < sc.plan.size(); ++l) {
    if (std::abs(run.wavelengths.at(l) - sc.plan.wavelength(l)) >
        1e-12 * sc.plan.wavelength(l)) {
      throw IoError("wavelengths differ from the config" + where);
    }
    const CMatrix& m = run.mdm.matrices[l];
    if (static_cast<std::size_t>(m.rows()) != sc.layout.rx.size() ||
        static_cast<std::size_t>(m.cols()) != sc.layout.tx.size()) {
      throw IoError("matrix dimensions differ from the arrays" + where);
    }
  }
}

}  // namespace

void apply_overrides(SceneConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.mc.base_seed = *o.seed;
  if (o.out) cfg.output.dir = *o.out;
  if (o.runs) {
    if (*o.runs == 0) throw ConfigError("/mc/runs", "must be >= 1");
    cfg.mc.runs = *o.runs;
  }
  if (o.statistics) {
    cfg.statistics = parse_statistic_list(*o.statistics);
    cfg.mc.statistics = cfg.statistics;
  }
}

std::vector<fs::path> cmd_image(const SceneConfig& cfg, const std::optional<fs::path>& mdm_dir) {
  const Scenario& sc = cfg.scenario;
  sc.validate();
  const ProbeBank bank(sc.layout, sc.plan, sc.grid);
  McConfig mc = cfg.mc;
  AveragedMaps avg;
  json source;
  if (mdm_dir) {
    const std::vector<std::size_t> runs = list_mdm_runs(*mdm_dir);
    if (runs.empty()) throw IoError("no MDM runs found in " + mdm_dir->string());
    mc.runs = runs.size();
    mc.first_run = 0;
    avg = run_average(
        [&](std::size_t i) {
          MdmRun r = read_mdm(*mdm_dir, runs[i]);
          check_compatible(r, sc, *mdm_dir);
          return std::move(r.mdm);
        },
        bank, mc);
    source = {{"mdm_dir", mdm_dir->string()}, {"runs", runs}};
  } else {
    const MdmSynthesizer synth(sc.layout, sc.scene, sc.plan, sc.noise_var, sc.model);
    avg = run_average(synth, bank, mc);
    source = {{"base_seed", mc.base_seed}, {"runs", mc.runs}};
  }

  const fs::path dir = cfg.output.dir;
  ensure_dir(dir);
  std::vector<fs::path> written;
  json manifest;
  manifest["command"] = "image";
  manifest["scenario"] = scenario_json(cfg);
  manifest["source"] = source;
  manifest["maps"] = write_maps(avg, cfg, dir, written);
  const fs::path mp = dir / "manifest.json";
  write_text(mp, manifest.dump(2) + "\n");
  written.push_back(mp);
  return written;
}

std::vector<fs::path> cmd_validate(const SceneConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  const McReport report = run_validation(sc, cfg.mc, true);

  const fs::path dir = cfg.output.dir;
  ensure_dir(dir);
  std::vector<fs::path> written;

  std::string ks = "statistic,scene,cell_x,cell_y,frequency,law,samples,distance,critical,pass\n";
  json ks_json = json::array();
  for (const auto& r : report.ks_results) {
    ks += to_string(r.statistic) + "," + r.scene_label + "," + format_value(r.cell.x) + "," +
          format_value(r.cell.y) + "," + std::to_string(r.frequency) + ",\"" + r.law + "\"," +
          std::to_string(r.ks.n) + "," + format_value(r.ks.distance) + "," +
          format_value(r.ks.critical) + "," + (r.ks.pass ? "1" : "0") + "\n";
    ks_json.push_back({{"statistic", to_string(r.statistic)},
                       {"scene", r.scene_label},
                       {"cell", {r.cell.x, r.cell.y}},
                       {"frequency", r.frequency},
                       {"law", r.law},
                       {"samples", r.ks.n},
                       {"distance", r.ks.distance},
                       {"critical", r.ks.critical},
                       {"pass", r.ks.pass}});
  }
  written.push_back(dir / "ks.csv");
  write_text(written.back(), ks);

  std::string cfar = "statistic,scaling,threshold,pfa,std_error,trials,within_3se\n";
  json cfar_json = json::array();
  for (const auto& r : report.pfa_table) {
    cfar += to_string(r.statistic) + "," + format_value(r.scaling) + "," +
            format_value(r.threshold) + "," + format_value(r.pfa) + "," +
            format_value(r.std_error) + "," + std::to_string(r.trials) + "," +
            (r.within_3se ? "1" : "0") + "\n";
    cfar_json.push_back({{"statistic", to_string(r.statistic)},
                         {"scaling", r.scaling},
                         {"threshold", r.threshold},
                         {"pfa", r.pfa},
                         {"std_error", r.std_error},
                         {"trials", r.trials},
                         {"within_3se", r.within_3se}});
  }
  written.push_back(dir / "cfar.csv");
  write_text(written.back(), cfar);

  const Position2D cell = cfg.mc.ks_cells.empty() ? sc.scene.positions.front()
                                                  : cfg.mc.ks_cells.front();
  const auto inv = xi_noise_invariance(sc.layout, sc.plan, cell, sc.noise_var,
                                       cfg.mc.noise_scalings, cfg.mc.ks_frequency,
                                       cfg.mc.ks_samples, cfg.mc.base_seed);
  std::string inv_csv = "scaling,samples,distance,critical,pass\n";
  json inv_json = json::array();
  for (std::size_t i = 0; i < inv.size(); ++i) {
    inv_csv += format_value(cfg.mc.noise_scalings[i]) + "," + std::to_string(inv[i].n) + "," +
               format_value(inv[i].distance) + "," + format_value(inv[i].critical) + "," +
               (inv[i].pass ? "1" : "0") + "\n";
    inv_json.push_back({{"scaling", cfg.mc.noise_scalings[i]},
                        {"distance", inv[i].distance},
                        {"critical", inv[i].critical},
                        {"pass", inv[i].pass}});
  }
  written.push_back(dir / "invariance.csv");
  write_text(written.back(), inv_csv);

  json out;
  out["command"] = "validate";
  out["scenario"] = scenario_json(cfg);
  out["base_seed"] = cfg.mc.base_seed;
  out["runs"] = cfg.mc.runs;
  out["maps"] = write_maps(report.averaged, cfg, dir, written);
  out["ks"] = ks_json;
  out["cfar"] = cfar_json;
  out["xi_noise_invariance"] = inv_json;
  written.push_back(dir / "report.json");
  write_text(written.back(), out.dump(2) + "\n");
  return written;
}

std::vector<fs::path> cmd_synth(const SceneConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  sc.validate();
  cfg.mc.validate();
  const MdmSynthesizer synth(sc.layout, sc.scene, sc.plan, sc.noise_var, sc.model);
  const fs::path dir = cfg.output.dir;
  ensure_dir(dir);
  std::vector<fs::path> written;
  for (std::size_t r = 0; r < cfg.mc.runs; ++r) {
    MdmRun run;
    run.run = cfg.mc.first_run + r;
    run.seed = run_seed(cfg.mc.base_seed, run.run);
    run.mdm = synth.realize(run.seed);
    run.wavelengths = sc.plan.wavelengths();
    write_mdm(dir, run);
    written.push_back(dir / ("mdm_run" + std::to_string(run.run) + ".json"));
  }
  return written;
}

}  // namespace trstat::app
