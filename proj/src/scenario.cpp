#include "trstat/scenario.hpp"

#include <cmath>

#include "trstat/error.hpp"

namespace trstat {

void Scenario::validate() const {
  layout.validate();
  if (plan.size() == 0) throw InvalidArgument("scenario needs at least one frequency");
  scene.validate(plan.size());
  if (noise_var.size() != plan.size()) {
    throw InvalidArgument("noise variance list must have one entry per frequency");
  }
  for (double v : noise_var) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("noise variances must be positive");
  }
  grid.validate();
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Scenario paper_scenario(ScatteringModel model) {
  Scenario s;
  s.layout = default_layout();
  s.plan = FrequencyPlan::from_wavelengths({1.0, 0.5, 1.0 / 3.0});
  s.scene.positions = {{-1.0, -6.0}, {1.0, -6.0}};
  s.scene.tau = CMatrix(3, 2);
  for (Eigen::Index l = 0; l < 3; ++l) {
    s.scene.tau(l, 0) = 3.0;
    s.scene.tau(l, 1) = 4.0;
  }
  s.noise_var = {db_to_linear(-15.0), db_to_linear(-5.0), db_to_linear(-15.0)};
  s.model = model;
  s.grid = ImageGridSpec{};
  return s;
}

}  // namespace trstat
