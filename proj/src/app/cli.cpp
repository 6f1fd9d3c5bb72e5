#include <iostream>

#include <CLI11.hpp>

#include "trstat/app/commands.hpp"

namespace trstat::app {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-reversal imaging statistics: synthesis, imaging and validation"};
  app.require_subcommand(1);

  std::string config;
  Overrides ov;
  std::optional<std::string> mdm_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Scenario config (JSON)")->required();
    sub->add_option("--seed", ov.seed, "Base seed");
    sub->add_option("--out", ov.out, "Output directory");
    sub->add_option("--runs", ov.runs, "Number of Monte Carlo runs");
    sub->add_option("--statistics", ov.statistics, "Comma-separated statistics");
  };
  CLI::App* image = app.add_subcommand("image", "Averaged imaging maps");
  add_common(image);
  image->add_option("--mdm", mdm_dir, "Image MDM sets written by synth instead of synthesizing");
  CLI::App* validate = app.add_subcommand("validate", "Goodness-of-fit and CFAR report");
  add_common(validate);
  CLI::App* synth = app.add_subcommand("synth", "Write raw MDM realizations");
  add_common(synth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    SceneConfig cfg = parse_config(config);
    apply_overrides(cfg, ov);
    std::vector<std::filesystem::path> files;
    if (image->parsed()) {
      std::optional<std::filesystem::path> dir;
      if (mdm_dir) dir = *mdm_dir;
      files = cmd_image(cfg, dir);
    } else if (validate->parsed()) {
      files = cmd_validate(cfg);
    } else {
      files = cmd_synth(cfg);
    }
    out << "wrote " << files.size() << " files to " << cfg.output.dir.string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace trstat::app
