#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "trstat/error.hpp"
#include "trstat/scenario.hpp"
#include "trstat/validate.hpp"

namespace trstat::app {

/// Invalid configuration; `field` is a JSON-pointer-like path ("/mc/runs").
class ConfigError : public Error {
public:
  ConfigError(std::string field, const std::string& reason)
      : Error(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

class IoError : public Error {
public:
  using Error::Error;
};

struct OutputConfig {
  std::filesystem::path dir = "out";
  bool csv = true;
  bool pgm = false;
};

struct SceneConfig {
  Scenario scenario;
  std::vector<double> noise_db;
  std::vector<Statistic> statistics{Statistic::glr, Statistic::rao, Statistic::wald,
                                    Statistic::li};
  RenderOptions render;
  McConfig mc;
  OutputConfig output;
};

SceneConfig parse_config(const std::filesystem::path& path);
SceneConfig parse_config_json(const nlohmann::json& doc);

/// Parses a comma-separated statistic list ("glr,rao,wald").
std::vector<Statistic> parse_statistic_list(const std::string& list);

}  // namespace trstat::app
