#include "negctrl/presets.hpp"

#include <json.hpp>

#include <cmath>

namespace negctrl {

namespace {

// Shared scenario ingredients. The two-mode squeezing below gives
// cosh(2r) = sqrt(2); the room-temperature optical ratio and the two
// microwave ratios are used verbatim by the corresponding plots.
const double k_tmsv_r = 0.5 * std::log(std::sqrt(2.0) + 1.0);
constexpr double k_optical_ratio = 1.000013;
constexpr double k_microwave_ratio_1 = 1.14769;
constexpr double k_microwave_ratio_2 = 1.02956;
constexpr double k_prep_squeeze = 2.0;

BathSpec symmetric_bath(double gamma_per_us, double ratio) {
  BathSpec bath;
  bath.gamma[0] = bath.gamma[1] = gamma_per_us;
  bath.ratio[0] = bath.ratio[1] = ratio;
  return bath;
}

ScenarioConfig tmsv_curve(const std::string& label, const BathSpec& bath, double horizon,
                          std::vector<PreOp> pre_ops) {
  ScenarioConfig config;
  config.label = label;
  config.state.tmsv_r = k_tmsv_r;
  config.state.pre_ops = std::move(pre_ops);
  config.bath = bath;
  config.strategy = ControlStrategy::none();
  config.horizon_us = horizon;
  return config;
}

ScenarioConfig nf_curve(const std::string& label, const std::array<double, 4>& params,
                        const BathSpec& bath, double horizon, double dt,
                        const ControlStrategy& strategy, std::vector<PreOp> pre_ops = {}) {
  ScenarioConfig config;
  config.label = label;
  config.state.normal_form_params = params;
  config.state.pre_ops = std::move(pre_ops);
  config.bath = bath;
  config.strategy = strategy;
  config.horizon_us = horizon;
  config.dt_us = dt;
  return config;
}

ControlStrategy strategy(ControlLaw law, ControlScope scope, ControlSchedule schedule) {
  return ControlStrategy{law, scope, std::move(schedule)};
}

std::vector<double> evenly_spaced_controls(int count, double horizon) {
  std::vector<double> times(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) times[static_cast<std::size_t>(i)] = horizon * i / count;
  return times;
}

std::vector<FigurePreset> build_presets() {
  std::vector<FigurePreset> presets;

  // Two-mode squeezed vacuum in symmetric environments: normal-form
  // preparation against one- and two-mode squeezed preparations.
  for (const auto& [name, ratio, horizon] :
       {std::tuple{"fig1-left", 2.0, 6.0}, std::tuple{"fig1-right", k_optical_ratio, 12.0}}) {
    FigurePreset preset;
    preset.name = name;
    preset.description = "Free decay of a two-mode squeezed state, identical baths; "
                         "normal-form vs locally squeezed preparations";
    const BathSpec bath = symmetric_bath(0.1, ratio);
    preset.scenarios = {
        tmsv_curve("normal-form", bath, horizon, {}),
        tmsv_curve("one-mode-squeezed", bath, horizon, {{1, k_prep_squeeze, 0.0}}),
        tmsv_curve("both-modes-squeezed", bath, horizon,
                   {{1, k_prep_squeeze, 0.0}, {2, k_prep_squeeze, 0.0}}),
    };
    presets.push_back(std::move(preset));
  }

  {
    FigurePreset preset;
    preset.name = "fig2-left";
    preset.description = "Same squeezed state, unequal thermal noise on the two modes";
    BathSpec bath;
    bath.gamma[0] = bath.gamma[1] = 0.1;
    bath.ratio[0] = 1.0;
    bath.ratio[1] = 2.0;
    preset.scenarios = {
        tmsv_curve("normal-form", bath, 12.0, {}),
        tmsv_curve("mode1-squeezed", bath, 12.0, {{1, k_prep_squeeze, 0.0}}),
        tmsv_curve("mode2-squeezed", bath, 12.0, {{2, k_prep_squeeze, 0.0}}),
        tmsv_curve("both-modes-squeezed", bath, 12.0,
                   {{1, k_prep_squeeze, 0.0}, {2, k_prep_squeeze, 0.0}}),
    };
    presets.push_back(std::move(preset));
  }

  {
    FigurePreset preset;
    preset.name = "fig2-right";
    preset.description = "Same squeezed state, unequal loss rates on the two modes";
    BathSpec bath;
    bath.gamma[0] = 0.1;
    bath.gamma[1] = 0.01;
    bath.ratio[0] = bath.ratio[1] = k_optical_ratio;
    preset.scenarios = {
        tmsv_curve("normal-form", bath, 30.0, {}),
        tmsv_curve("mode1-squeezed", bath, 30.0, {{1, k_prep_squeeze, 0.0}}),
        tmsv_curve("mode2-squeezed", bath, 30.0, {{2, k_prep_squeeze, 0.0}}),
        tmsv_curve("both-modes-squeezed", bath, 30.0,
                   {{1, k_prep_squeeze, 0.0}, {2, k_prep_squeeze, 0.0}}),
    };
    presets.push_back(std::move(preset));
  }

  {
    FigurePreset preset;
    preset.name = "fig3";
    preset.description = "Asymmetric state in a low-noise environment: optimal adjustment "
                         "against normal-form and mis-squeezed preparations";
    const std::array<double, 4> params{4.5, 3.5, 2.2, -3.5};
    const BathSpec bath = symmetric_bath(0.1, k_optical_ratio);
    const double horizon = 100.0, dt = 0.05;
    preset.scenarios = {
        nf_curve("both-optimal", params, bath, horizon, dt,
                 strategy(ControlLaw::negativity, ControlScope::both_modes,
                          ControlSchedule::initial_only())),
        nf_curve("one-mode-optimal", params, bath, horizon, dt,
                 strategy(ControlLaw::negativity, ControlScope::mode_1,
                          ControlSchedule::initial_only())),
        nf_curve("normal-form", params, bath, horizon, dt, ControlStrategy::none()),
        nf_curve("squeezed", params, bath, horizon, dt, ControlStrategy::none(),
                 {{1, k_prep_squeeze, 0.0}}),
        nf_curve("squeezed-rotated", params, bath, horizon, dt, ControlStrategy::none(),
                 {{1, k_prep_squeeze, M_PI / 4.0}}),
    };
    presets.push_back(std::move(preset));
  }

  {
    FigurePreset preset;
    preset.name = "fig4";
    preset.description = "Repeated optimal controls against a single initial control, "
                         "microwave baths with unequal thermal noise";
    const std::array<double, 4> params{4.5, 3.5, 2.2, -3.5};
    BathSpec bath;
    bath.gamma[0] = bath.gamma[1] = 0.1;
    bath.ratio[0] = k_microwave_ratio_1;
    bath.ratio[1] = k_microwave_ratio_2;
    // Sudden death sits near 8.3 us here; the horizon keeps the evenly
    // spaced schedules inside the entangled window.
    const double horizon = 10.0, dt = 2e-3;
    const auto at = [&](int count) {
      return strategy(ControlLaw::negativity, ControlScope::both_modes,
                      ControlSchedule::at_times(evenly_spaced_controls(count, horizon)));
    };
    preset.scenarios = {
        nf_curve("initial-only", params, bath, horizon, dt,
                 strategy(ControlLaw::negativity, ControlScope::both_modes,
                          ControlSchedule::initial_only())),
        nf_curve("controls-2", params, bath, horizon, dt, at(2)),
        nf_curve("controls-4", params, bath, horizon, dt, at(4)),
        nf_curve("controls-10", params, bath, horizon, dt, at(10)),
        nf_curve("controls-100", params, bath, horizon, dt, at(100)),
        nf_curve("every-step", params, bath, horizon, dt,
                 strategy(ControlLaw::negativity, ControlScope::both_modes,
                          ControlSchedule::every_step())),
    };
    preset.baseline = 0;
    presets.push_back(std::move(preset));
  }

  {
    FigurePreset preset;
    preset.name = "fig5";
    preset.description = "Single-mode against two-mode repeated controls relative to no control";
    const std::array<double, 4> params{5.0, 6.0, 5.2, -4.8};
    BathSpec bath;
    bath.gamma[0] = bath.gamma[1] = 0.1;
    bath.ratio[0] = k_microwave_ratio_1;
    bath.ratio[1] = k_microwave_ratio_2;
    const double horizon = 20.0, dt = 1e-2;
    const auto one = [&](const std::string& label, ControlScope scope, ControlSchedule schedule) {
      return nf_curve(label, params, bath, horizon, dt,
                      strategy(ControlLaw::negativity, scope, std::move(schedule)));
    };
    preset.scenarios = {
        nf_curve("no-control", params, bath, horizon, dt, ControlStrategy::none()),
        one("both-initial", ControlScope::both_modes, ControlSchedule::initial_only()),
        one("both-every-step", ControlScope::both_modes, ControlSchedule::every_step()),
        one("mode1-initial", ControlScope::mode_1, ControlSchedule::initial_only()),
        one("mode1-every-step", ControlScope::mode_1, ControlSchedule::every_step()),
        one("mode2-initial", ControlScope::mode_2, ControlSchedule::initial_only()),
        one("mode2-every-step", ControlScope::mode_2, ControlSchedule::every_step()),
    };
    preset.baseline = 0;
    presets.push_back(std::move(preset));
  }

  {
    FigurePreset preset;
    preset.name = "fig6";
    preset.description = "Negativity-decay law against the separability-parameter law, "
                         "difference of the separability parameter";
    const std::array<double, 4> params{4.5, 3.5, 2.2, -3.5};
    const BathSpec bath = symmetric_bath(1.0, 2.0);
    const double horizon = 12.0, dt = 1e-3;
    preset.scenarios = {
        nf_curve("sigma-law", params, bath, horizon, dt,
                 strategy(ControlLaw::sigma_tilde, ControlScope::both_modes,
                          ControlSchedule::every_step())),
        nf_curve("negativity-law", params, bath, horizon, dt,
                 strategy(ControlLaw::negativity, ControlScope::both_modes,
                          ControlSchedule::every_step())),
    };
    preset.baseline = 0;
    preset.diff_quantity = "Sigma_tilde";
    presets.push_back(std::move(preset));
  }

  return presets;
}

}  // namespace

const std::vector<FigurePreset>& figure_presets() {
  static const std::vector<FigurePreset> presets = build_presets();
  return presets;
}

const FigurePreset& find_preset(const std::string& name) {
  for (const auto& preset : figure_presets())
    if (preset.name == name) return preset;
  throw std::invalid_argument("unknown figure preset '" + name + "'");
}

nlohmann::json presets_to_json() {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& preset : figure_presets()) {
    nlohmann::json p;
    p["name"] = preset.name;
    p["baseline"] = preset.baseline;
    p["diff_quantity"] = preset.diff_quantity;
    nlohmann::json scenarios = nlohmann::json::array();
    for (const auto& config : preset.scenarios) scenarios.push_back(config.to_json());
    p["scenarios"] = scenarios;
    j.push_back(p);
  }
  return j;
}

}  // namespace negctrl
