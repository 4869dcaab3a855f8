#pragma once

#include "negctrl/control.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace negctrl {

/// Strict unit parsing. Every dimensionful config value carries a suffix;
/// bare numbers are rejected. Internal units: time us, rates 1/us.
double parse_time_us(const std::string& text);
double parse_rate_per_us(const std::string& text);
/// Ordinary frequency with an Hz-family suffix, returned as rad/s.
double parse_angular_frequency_rad_s(const std::string& text);
double parse_temperature_kelvin(const std::string& text);

/// S = R(rotation) * Z(squeeze) applied to one mode before the run starts.
struct PreOp {
  int mode = 1;
  double squeeze = 1.0;
  double rotation = 0.0;  // radians
};

struct StateSpec {
  std::optional<double> tmsv_r;
  std::optional<std::array<double, 4>> normal_form_params;  // a, b, c+, c-
  std::optional<std::array<double, 16>> matrix_entries;     // row-major
  std::vector<PreOp> pre_ops;

  CovarianceMatrix build() const;
};

/// Per-mode bath given as gamma plus exactly one thermal specification:
/// chi/gamma ratio, mean occupation, or temperature + mode frequency.
struct BathSpec {
  double gamma[2] = {0.1, 0.1};  // 1/us
  std::optional<double> ratio[2];
  std::optional<double> occupation[2];
  std::optional<double> temperature[2];  // K
  std::optional<double> omega[2];        // rad/s

  BathParams build() const;
};

struct ScenarioConfig {
  std::string label = "scenario";
  StateSpec state;
  BathSpec bath;
  ControlStrategy strategy;
  double horizon_us = 10.0;
  double dt_us = 0.0;  // 0 selects the default horizon/2000

  double effective_dt() const { return dt_us > 0 ? dt_us : horizon_us / 2000.0; }

  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ScenarioResult {
  std::string label;
  Trajectory trajectory;
  std::optional<double> death_time_us;
  std::array<double, 5> log_neg_landmarks{};  // E_N at 0, T/4, T/2, 3T/4, T
};

ScenarioResult run_scenario(const ScenarioConfig& config);

/// t_us,E_N,nu_tilde_minus,Sigma_tilde,det_sigma,delta_tilde,controls_applied_flag
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);
void write_trajectory_csv(const Trajectory& trajectory, const std::string& path);

nlohmann::json summary_json(const ScenarioResult& result);

struct ComparisonResult {
  ScenarioResult baseline;
  std::vector<ScenarioResult> variants;
  /// Per variant: pointwise variant-minus-baseline differences on the shared
  /// grid, for E_N and for the separability parameter.
  std::vector<std::vector<double>> log_neg_diff;
  std::vector<std::vector<double>> sigma_tilde_diff;
};

/// All scenarios must share the time grid exactly; mismatches are rejected.
ComparisonResult run_comparison(const ScenarioConfig& baseline,
                                const std::vector<ScenarioConfig>& variants);

void write_difference_csv(const ComparisonResult& comparison, std::size_t variant_index,
                          std::ostream& out);

struct SweepRow {
  double value = 0.0;
  std::optional<double> death_time_us;
  std::array<double, 5> log_neg_landmarks{};
};

/// Axis names: state.r, state.a, state.b, state.c_plus, state.c_minus,
/// bath.gamma, bath.gamma1, bath.gamma2, bath.chi_over_gamma,
/// bath.chi_over_gamma1, bath.chi_over_gamma2, horizon, dt.
/// Values are plain numbers in the axis' base unit (us, 1/us, dimensionless).
std::vector<SweepRow> sweep(const ScenarioConfig& base, const std::string& axis,
                            const std::vector<double>& values, bool parallel = true);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace negctrl
