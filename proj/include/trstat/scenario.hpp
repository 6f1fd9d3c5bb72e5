#pragma once

#include <vector>

#include "trstat/forward.hpp"
#include "trstat/imaging.hpp"
#include "trstat/scene.hpp"

namespace trstat {

/// Everything needed to synthesize data and image it.
struct Scenario {
  ArrayLayout layout;
  FrequencyPlan plan;
  ScattererSet scene;
  std::vector<double> noise_var;
  ScatteringModel model = ScatteringModel::BA;
  ImageGridSpec grid;

  void validate() const;
};

/// sigma^2 = 10^(dB / 10), unit power reference.
double db_to_linear(double db);

/// Two scatterers at (-1, -6) and (+1, -6) with tau = (3, 4) at every frequency,
/// wavelengths (1, 1/2, 1/3) m, noise (-15, -5, -15) dB, default arrays and grid.
Scenario paper_scenario(ScatteringModel model = ScatteringModel::BA);

}  // namespace trstat
