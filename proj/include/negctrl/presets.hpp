#pragma once

#include "negctrl/scenario.hpp"

namespace negctrl {

/// A frozen bundle of scenarios reproducing one published plot. Presets with
/// baseline >= 0 are comparison plots: every other scenario is diffed against
/// the baseline curve on the shared grid.
struct FigurePreset {
  std::string name;
  std::string description;
  std::vector<ScenarioConfig> scenarios;
  int baseline = -1;
  std::string diff_quantity = "E_N";  // or "Sigma_tilde"
};

const std::vector<FigurePreset>& figure_presets();
const FigurePreset& find_preset(const std::string& name);

/// Canonical serialization of the whole table; asserted against the
/// checked-in constants file so parameter drift fails a test.
nlohmann::json presets_to_json();

}  // namespace negctrl
