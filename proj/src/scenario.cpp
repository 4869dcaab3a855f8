#include "negctrl/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace negctrl {

namespace {

double parse_with_units(const std::string& text, const std::vector<std::pair<std::string, double>>& units,
                        const char* kind) {
  for (const auto& [suffix, factor] : units) {
    if (text.size() <= suffix.size() || !text.ends_with(suffix)) continue;
    const std::string number = text.substr(0, text.size() - suffix.size());
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(number, &used);
    } catch (const std::exception&) {
      break;
    }
    if (used != number.size()) break;
    if (!std::isfinite(value)) break;
    return value * factor;
  }
  throw std::invalid_argument(std::string("could not parse ") + kind + " '" + text +
                              "': expected <number><unit>");
}

// Longest suffixes first so "s" does not shadow "us"/"ns"/"ms".
const std::vector<std::pair<std::string, double>> k_time_units = {
    {"us", 1.0}, {"ns", 1e-3}, {"ms", 1e3}, {"s", 1e6}};
const std::vector<std::pair<std::string, double>> k_rate_units = {
    {"kHz", 1e-3}, {"MHz", 1.0}, {"GHz", 1e3}, {"THz", 1e6}, {"Hz", 1e-6}};

}  // namespace

double parse_time_us(const std::string& text) { return parse_with_units(text, k_time_units, "time"); }

double parse_rate_per_us(const std::string& text) {
  // 1 MHz = 1 event per us.
  return parse_with_units(text, k_rate_units, "rate");
}

double parse_angular_frequency_rad_s(const std::string& text) {
  const double per_us = parse_with_units(text, k_rate_units, "frequency");
  return 2.0 * M_PI * per_us * 1e6;
}

double parse_temperature_kelvin(const std::string& text) {
  return parse_with_units(text, {{"K", 1.0}}, "temperature");
}

CovarianceMatrix StateSpec::build() const {
  const int forms =
      int(tmsv_r.has_value()) + int(normal_form_params.has_value()) + int(matrix_entries.has_value());
  if (forms != 1)
    throw std::invalid_argument("state: exactly one of tmsv_r / normal_form / matrix must be given");
  CovarianceMatrix sigma =
      tmsv_r ? two_mode_squeezed(*tmsv_r)
      : normal_form_params
          ? from_normal_form((*normal_form_params)[0], (*normal_form_params)[1],
                             (*normal_form_params)[2], (*normal_form_params)[3])
          : from_row_major(*matrix_entries);
  for (const PreOp& op : pre_ops) {
    if (op.mode != 1 && op.mode != 2) throw std::invalid_argument("pre_op: mode must be 1 or 2");
    // Rotation first, then squeeze: an outer rotation would commute with the
    // phase-covariant dynamics and change nothing.
    const Eigen::Matrix2d s = squeeze_matrix(op.squeeze) * rotation_matrix(op.rotation);
    sigma = apply_symplectic(sigma, SymplecticTransform::on_mode(op.mode, s));
  }
  return sigma;
}

BathParams BathSpec::build() const {
  ModeBath modes[2];
  for (int m = 0; m < 2; ++m) {
    const int forms = int(ratio[m].has_value()) + int(occupation[m].has_value()) +
                      int(temperature[m].has_value() || omega[m].has_value());
    if (forms != 1)
      throw std::invalid_argument("bath: exactly one thermal specification per mode is required");
    if (ratio[m])
      modes[m] = bath_from_ratio(gamma[m], *ratio[m]);
    else if (occupation[m])
      modes[m] = bath_from_occupation(gamma[m], *occupation[m]);
    else {
      if (!temperature[m] || !omega[m])
        throw std::invalid_argument("bath: temperature form needs both temperature and omega");
      modes[m] = bath_from_temperature(gamma[m], *omega[m], *temperature[m]);
    }
  }
  return {modes[0], modes[1]};
}

namespace {

using nlohmann::json;

ControlStrategy strategy_from_json(const json& j) {
  ControlStrategy strategy;
  const std::string law = j.value("law", "none");
  if (law == "none")
    strategy.law = ControlLaw::none;
  else if (law == "negativity")
    strategy.law = ControlLaw::negativity;
  else if (law == "sigma_tilde")
    strategy.law = ControlLaw::sigma_tilde;
  else
    throw std::invalid_argument("strategy.law must be none | negativity | sigma_tilde");

  const std::string scope = j.value("scope", "both");
  if (scope == "both")
    strategy.scope = ControlScope::both_modes;
  else if (scope == "mode1")
    strategy.scope = ControlScope::mode_1;
  else if (scope == "mode2")
    strategy.scope = ControlScope::mode_2;
  else
    throw std::invalid_argument("strategy.scope must be both | mode1 | mode2");

  if (!j.contains("schedule")) {
    strategy.schedule = ControlSchedule::initial_only();
  } else if (j["schedule"].is_string()) {
    const std::string schedule = j["schedule"].get<std::string>();
    if (schedule == "initial")
      strategy.schedule = ControlSchedule::initial_only();
    else if (schedule == "every_step")
      strategy.schedule = ControlSchedule::every_step();
    else
      throw std::invalid_argument("strategy.schedule must be initial | every_step | [times]");
  } else if (j["schedule"].is_array()) {
    std::vector<double> times;
    for (const auto& item : j["schedule"]) times.push_back(parse_time_us(item.get<std::string>()));
    strategy.schedule = ControlSchedule::at_times(std::move(times));
  } else {
    throw std::invalid_argument("strategy.schedule must be initial | every_step | [times]");
  }
  return strategy;
}

json strategy_to_json(const ControlStrategy& strategy) {
  json j;
  switch (strategy.law) {
    case ControlLaw::none: j["law"] = "none"; break;
    case ControlLaw::negativity: j["law"] = "negativity"; break;
    case ControlLaw::sigma_tilde: j["law"] = "sigma_tilde"; break;
  }
  switch (strategy.scope) {
    case ControlScope::both_modes: j["scope"] = "both"; break;
    case ControlScope::mode_1: j["scope"] = "mode1"; break;
    case ControlScope::mode_2: j["scope"] = "mode2"; break;
  }
  switch (strategy.schedule.kind) {
    case ControlSchedule::Kind::initial_only: j["schedule"] = "initial"; break;
    case ControlSchedule::Kind::every_step: j["schedule"] = "every_step"; break;
    case ControlSchedule::Kind::at_times: j["schedule_times_us"] = strategy.schedule.times; break;
  }
  return j;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  try {
    ScenarioConfig config;
    config.label = j.value("label", "scenario");

    const json& state = j.at("state");
    if (state.contains("tmsv_r")) config.state.tmsv_r = state["tmsv_r"].get<double>();
    if (state.contains("normal_form")) {
      const auto params = state["normal_form"].get<std::vector<double>>();
      if (params.size() != 4) throw std::invalid_argument("state.normal_form needs [a, b, c+, c-]");
      config.state.normal_form_params = {params[0], params[1], params[2], params[3]};
    }
    if (state.contains("matrix")) {
      const auto entries = state["matrix"].get<std::vector<double>>();
      if (entries.size() != 16) throw std::invalid_argument("state.matrix needs 16 row-major reals");
      std::array<double, 16> values{};
      std::copy(entries.begin(), entries.end(), values.begin());
      config.state.matrix_entries = values;
    }
    for (const auto& op : state.value("pre_ops", json::array())) {
      PreOp pre;
      pre.mode = op.at("mode").get<int>();
      pre.squeeze = op.value("squeeze", 1.0);
      pre.rotation = op.value("rotation", 0.0);
      config.state.pre_ops.push_back(pre);
    }

    const json& bath = j.at("bath");
    for (int m = 0; m < 2; ++m) {
      const std::string n = std::to_string(m + 1);
      config.bath.gamma[m] = parse_rate_per_us(bath.at("gamma" + n).get<std::string>());
      if (bath.contains("chi_over_gamma" + n))
        config.bath.ratio[m] = bath["chi_over_gamma" + n].get<double>();
      if (bath.contains("occupation" + n)) config.bath.occupation[m] = bath["occupation" + n].get<double>();
      if (bath.contains("temperature" + n))
        config.bath.temperature[m] = parse_temperature_kelvin(bath["temperature" + n].get<std::string>());
      if (bath.contains("omega" + n))
        config.bath.omega[m] = parse_angular_frequency_rad_s(bath["omega" + n].get<std::string>());
    }

    if (j.contains("strategy")) config.strategy = strategy_from_json(j["strategy"]);
    config.horizon_us = parse_time_us(j.at("horizon").get<std::string>());
    if (j.contains("dt")) config.dt_us = parse_time_us(j["dt"].get<std::string>());

    // Fail fast on inconsistent specs.
    (void)config.state.build();
    (void)config.bath.build();
    if (!(config.horizon_us > 0)) throw std::invalid_argument("horizon must be positive");
    if (config.dt_us < 0) throw std::invalid_argument("dt must be positive");
    return config;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

nlohmann::json ScenarioConfig::to_json() const {
  json j;
  j["label"] = label;
  json state;
  if (this->state.tmsv_r) state["tmsv_r"] = *this->state.tmsv_r;
  if (this->state.normal_form_params) state["normal_form"] = *this->state.normal_form_params;
  if (this->state.matrix_entries) state["matrix"] = *this->state.matrix_entries;
  if (!this->state.pre_ops.empty()) {
    json ops = json::array();
    for (const auto& op : this->state.pre_ops)
      ops.push_back({{"mode", op.mode}, {"squeeze", op.squeeze}, {"rotation", op.rotation}});
    state["pre_ops"] = ops;
  }
  j["state"] = state;
  json bath;
  for (int m = 0; m < 2; ++m) {
    const std::string n = std::to_string(m + 1);
    bath["gamma" + n + "_per_us"] = this->bath.gamma[m];
    if (this->bath.ratio[m]) bath["chi_over_gamma" + n] = *this->bath.ratio[m];
    if (this->bath.occupation[m]) bath["occupation" + n] = *this->bath.occupation[m];
    if (this->bath.temperature[m]) bath["temperature" + n + "_K"] = *this->bath.temperature[m];
    if (this->bath.omega[m]) bath["omega" + n + "_rad_s"] = *this->bath.omega[m];
  }
  j["bath"] = bath;
  j["strategy"] = strategy_to_json(strategy);
  j["horizon_us"] = horizon_us;
  j["dt_us"] = dt_us;
  return j;
}

namespace {

std::array<double, 5> landmarks_of(const Trajectory& trajectory, double horizon) {
  std::array<double, 5> out{};
  for (int i = 0; i < 5; ++i) out[i] = trajectory.at_or_after(horizon * i / 4.0).log_neg;
  return out;
}

std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  ScenarioResult result;
  result.label = config.label;
  const CovarianceMatrix sigma0 = config.state.build();
  const BathParams baths = config.bath.build();
  const double dt = config.effective_dt();
  result.trajectory = simulate(sigma0, baths, config.strategy, config.horizon_us, dt);
  result.death_time_us = death_time(sigma0, baths, config.strategy, config.horizon_us, dt);
  result.log_neg_landmarks = landmarks_of(result.trajectory, config.horizon_us);
  return result;
}

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
  out << "t_us,E_N,nu_tilde_minus,Sigma_tilde,det_sigma,delta_tilde,controls_applied_flag\n";
  for (const auto& p : trajectory.points) {
    out << format_number(p.t) << ',' << format_number(p.log_neg) << ',' << format_number(p.nu_minus)
        << ',' << format_number(p.sigma_tilde) << ',' << format_number(p.det_sigma) << ','
        << format_number(p.delta_tilde) << ',' << (p.control_applied ? 1 : 0) << '\n';
  }
}

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_trajectory_csv(trajectory, out);
}

nlohmann::json summary_json(const ScenarioResult& result) {
  json j;
  j["label"] = result.label;
  if (result.death_time_us)
    j["death_time_us"] = *result.death_time_us;
  else
    j["death_time_us"] = nullptr;
  j["log_negativity_landmarks"] = result.log_neg_landmarks;
  j["controls_applied"] = result.trajectory.controls.size();
  j["clamp_warnings"] = result.trajectory.clamp_warnings;
  return j;
}

ComparisonResult run_comparison(const ScenarioConfig& baseline,
                                const std::vector<ScenarioConfig>& variants) {
  ComparisonResult comparison;
  comparison.baseline = run_scenario(baseline);
  const auto& base_points = comparison.baseline.trajectory.points;
  for (const auto& config : variants) {
    ScenarioResult result = run_scenario(config);
    const auto& points = result.trajectory.points;
    if (points.size() != base_points.size())
      throw std::invalid_argument("run_comparison: scenarios must share the time grid");
    std::vector<double> dlog(points.size()), dsig(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (std::abs(points[i].t - base_points[i].t) > 1e-12)
        throw std::invalid_argument("run_comparison: scenarios must share the time grid");
      dlog[i] = points[i].log_neg - base_points[i].log_neg;
      dsig[i] = points[i].sigma_tilde - base_points[i].sigma_tilde;
    }
    comparison.log_neg_diff.push_back(std::move(dlog));
    comparison.sigma_tilde_diff.push_back(std::move(dsig));
    comparison.variants.push_back(std::move(result));
  }
  return comparison;
}

void write_difference_csv(const ComparisonResult& comparison, std::size_t variant_index,
                          std::ostream& out) {
  out << "t_us,dE_N,dSigma_tilde\n";
  const auto& base_points = comparison.baseline.trajectory.points;
  for (std::size_t i = 0; i < base_points.size(); ++i) {
    out << format_number(base_points[i].t) << ','
        << format_number(comparison.log_neg_diff[variant_index][i]) << ','
        << format_number(comparison.sigma_tilde_diff[variant_index][i]) << '\n';
  }
}

namespace {

ScenarioConfig with_axis_value(const ScenarioConfig& base, const std::string& axis, double value) {
  ScenarioConfig config = base;
  const auto need_nf = [&]() -> std::array<double, 4>& {
    if (!config.state.normal_form_params)
      throw std::invalid_argument("sweep axis '" + axis + "' needs a normal_form state");
    return *config.state.normal_form_params;
  };
  if (axis == "state.r") {
    if (!config.state.tmsv_r) throw std::invalid_argument("sweep axis 'state.r' needs a tmsv state");
    config.state.tmsv_r = value;
  } else if (axis == "state.a") {
    need_nf()[0] = value;
  } else if (axis == "state.b") {
    need_nf()[1] = value;
  } else if (axis == "state.c_plus") {
    need_nf()[2] = value;
  } else if (axis == "state.c_minus") {
    need_nf()[3] = value;
  } else if (axis == "bath.gamma" || axis == "bath.gamma1" || axis == "bath.gamma2") {
    if (axis != "bath.gamma2") config.bath.gamma[0] = value;
    if (axis != "bath.gamma1") config.bath.gamma[1] = value;
  } else if (axis == "bath.chi_over_gamma" || axis == "bath.chi_over_gamma1" ||
             axis == "bath.chi_over_gamma2") {
    const bool set1 = axis != "bath.chi_over_gamma2";
    const bool set2 = axis != "bath.chi_over_gamma1";
    if ((set1 && !config.bath.ratio[0]) || (set2 && !config.bath.ratio[1]))
      throw std::invalid_argument("sweep axis '" + axis + "' needs chi_over_gamma bath form");
    if (set1) config.bath.ratio[0] = value;
    if (set2) config.bath.ratio[1] = value;
  } else if (axis == "horizon") {
    config.horizon_us = value;
  } else if (axis == "dt") {
    config.dt_us = value;
  } else {
    throw std::invalid_argument("unknown sweep axis '" + axis + "'");
  }
  return config;
}

}  // namespace

std::vector<SweepRow> sweep(const ScenarioConfig& base, const std::string& axis,
                            const std::vector<double>& values, bool parallel) {
  // Validate the axis (and the base config) before launching anything.
  if (!values.empty()) (void)with_axis_value(base, axis, values.front());
  std::vector<SweepRow> rows(values.size());
  const long n = static_cast<long>(values.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < n; ++i) {
    const ScenarioConfig config = with_axis_value(base, axis, values[static_cast<std::size_t>(i)]);
    const ScenarioResult result = run_scenario(config);
    SweepRow row;
    row.value = values[static_cast<std::size_t>(i)];
    row.death_time_us = result.death_time_us;
    row.log_neg_landmarks = result.log_neg_landmarks;
    rows[static_cast<std::size_t>(i)] = row;
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "value,death_time_us,E_N_t0,E_N_quarter,E_N_half,E_N_three_quarter,E_N_horizon\n";
  for (const auto& row : rows) {
    out << format_number(row.value) << ',';
    if (row.death_time_us)
      out << format_number(*row.death_time_us);
    else
      out << "never";
    for (double landmark : row.log_neg_landmarks) out << ',' << format_number(landmark);
    out << '\n';
  }
}

}  // namespace negctrl
