#include "negctrl/oracle.hpp"
#include "negctrl/presets.hpp"
#include "negctrl/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config parse error in " + path + ": " + e.what());
  }
}

void apply_overrides(negctrl::ScenarioConfig& config, const std::string& dt, const std::string& horizon) {
  if (!dt.empty()) config.dt_us = negctrl::parse_time_us(dt);
  if (!horizon.empty()) config.horizon_us = negctrl::parse_time_us(horizon);
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << contents;
}

std::string describe_death(const std::optional<double>& death) {
  if (!death) return "never within horizon";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.4f us", *death);
  return buffer;
}

void print_summary(const negctrl::ScenarioResult& result) {
  std::cout << result.label << ": death " << describe_death(result.death_time_us)
            << ", E_N landmarks";
  for (double v : result.log_neg_landmarks) std::cout << ' ' << v;
  std::cout << '\n';
}

void emit_scenario(const negctrl::ScenarioResult& result, const fs::path& out_dir) {
  negctrl::write_trajectory_csv(result.trajectory, (out_dir / (result.label + ".csv")).string());
  write_file(out_dir / (result.label + "_summary.json"), negctrl::summary_json(result).dump(2) + "\n");
  print_summary(result);
}

int run_evolve(const std::string& config_path, const std::string& out,
               const std::string& dt, const std::string& horizon) {
  auto config = negctrl::ScenarioConfig::from_json(load_json(config_path));
  apply_overrides(config, dt, horizon);
  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  emit_scenario(negctrl::run_scenario(config), out_dir);
  return 0;
}

int run_compare(const std::string& config_path, const std::string& out,
                const std::string& dt, const std::string& horizon) {
  const json j = load_json(config_path);
  if (!j.contains("baseline") || !j.contains("variants"))
    throw std::invalid_argument("compare config needs 'baseline' and 'variants'");
  auto baseline = negctrl::ScenarioConfig::from_json(j["baseline"]);
  apply_overrides(baseline, dt, horizon);
  std::vector<negctrl::ScenarioConfig> variants;
  for (const auto& item : j["variants"]) {
    variants.push_back(negctrl::ScenarioConfig::from_json(item));
    apply_overrides(variants.back(), dt, horizon);
  }
  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  const auto comparison = negctrl::run_comparison(baseline, variants);
  emit_scenario(comparison.baseline, out_dir);
  for (std::size_t i = 0; i < comparison.variants.size(); ++i) {
    emit_scenario(comparison.variants[i], out_dir);
    std::ostringstream csv;
    negctrl::write_difference_csv(comparison, i, csv);
    write_file(out_dir / (comparison.variants[i].label + "_minus_" + baseline.label + ".csv"),
               csv.str());
  }
  return 0;
}

int run_figure(const std::string& name, const std::string& out, const std::string& dt,
               const std::string& horizon) {
  const auto& preset = negctrl::find_preset(name);
  const fs::path out_dir(out.empty() ? name : out);
  fs::create_directories(out_dir);
  std::cout << preset.name << ": " << preset.description << '\n';

  std::vector<negctrl::ScenarioConfig> configs = preset.scenarios;
  for (auto& config : configs) apply_overrides(config, dt, horizon);

  if (preset.baseline < 0) {
    for (const auto& config : configs) emit_scenario(negctrl::run_scenario(config), out_dir);
    return 0;
  }
  std::vector<negctrl::ScenarioConfig> variants;
  for (std::size_t i = 0; i < configs.size(); ++i)
    if (static_cast<int>(i) != preset.baseline) variants.push_back(configs[i]);
  const auto comparison = negctrl::run_comparison(configs[static_cast<std::size_t>(preset.baseline)], variants);
  emit_scenario(comparison.baseline, out_dir);
  for (std::size_t i = 0; i < comparison.variants.size(); ++i) {
    emit_scenario(comparison.variants[i], out_dir);
    std::ostringstream csv;
    negctrl::write_difference_csv(comparison, i, csv);
    write_file(out_dir / (comparison.variants[i].label + "_minus_" +
                          comparison.baseline.label + ".csv"),
               csv.str());
  }
  return 0;
}

int run_sweep(const std::string& config_path, const std::string& out, const std::string& axis,
              const std::string& values_text) {
  auto config = negctrl::ScenarioConfig::from_json(load_json(config_path));
  std::vector<double> values;
  std::stringstream ss(values_text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    std::size_t used = 0;
    values.push_back(std::stod(token, &used));
    if (used != token.size()) throw std::invalid_argument("bad sweep value '" + token + "'");
  }
  const auto rows = negctrl::sweep(config, axis, values);
  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  std::ostringstream csv;
  negctrl::write_sweep_csv(rows, csv);
  write_file(out_dir / "sweep.csv", csv.str());
  std::cout << csv.str();
  return 0;
}

int run_verify(int states, std::uint64_t seed, const std::string& out, double corrupt_z1,
               bool serial) {
  negctrl::SuiteSettings settings;
  settings.states = states;
  settings.seed = seed;
  settings.corrupt_z1 = corrupt_z1;
  settings.parallel = !serial;
  const auto report = negctrl::run_verification_suite(settings);

  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  write_file(out_dir / "verify_report.json", report.to_json().dump(2) + "\n");

  std::printf("states: %d (seed %llu)\n", report.states,
              static_cast<unsigned long long>(report.seed));
  std::printf("max |z_numeric - z_analytic|: %.3e (limit 1e-3)\n", report.max_z_gap);
  std::printf("max objective gap:            %.3e (limit 1e-6)\n", report.max_objective_gap);
  std::printf("max derivative residual:      %.3e (limit 1e-4)\n", report.max_derivative_residual);
  std::printf("rotation flatness violations: %d\n", report.rotation_flat_violations);
  std::printf("coefficient sign violations:  %d\n", report.coefficient_violations);
  std::printf("%s\n", report.pass ? "PASS" : "FAIL");
  return report.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-mode Gaussian state evolution in thermal environments with "
               "entanglement-preserving local controls"};
  app.require_subcommand(1);

  std::string config_path, out = ".", dt, horizon, axis, values, preset_name;
  int states = 100;
  std::uint64_t seed = 20250807;
  double corrupt_z1 = 1.0;
  bool serial = false;

  auto* evolve = app.add_subcommand("evolve", "Run one scenario and write its trajectory CSV");
  evolve->add_option("--config", config_path, "Scenario config (JSON)")->required();
  evolve->add_option("--out", out, "Output directory");
  evolve->add_option("--dt", dt, "Override time step, e.g. 0.01us");
  evolve->add_option("--horizon", horizon, "Override horizon, e.g. 20us");

  auto* compare = app.add_subcommand("compare", "Diff variant scenarios against a baseline");
  compare->add_option("--config", config_path, "Comparison config (JSON)")->required();
  compare->add_option("--out", out, "Output directory");
  compare->add_option("--dt", dt, "Override time step");
  compare->add_option("--horizon", horizon, "Override horizon");

  auto* figure = app.add_subcommand("figure", "Run a frozen figure preset");
  figure->add_option("preset", preset_name, "Preset name, e.g. fig3")->required();
  figure->add_option("--out", out, "Output directory (default: preset name)")->default_val("");
  figure->add_option("--dt", dt, "Override time step");
  figure->add_option("--horizon", horizon, "Override horizon");

  auto* sweep_cmd = app.add_subcommand("sweep", "Summarise one scenario across parameter values");
  sweep_cmd->add_option("--config", config_path, "Scenario config (JSON)")->required();
  sweep_cmd->add_option("--axis", axis, "Swept parameter, e.g. bath.chi_over_gamma")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required();
  sweep_cmd->add_option("--out", out, "Output directory");

  auto* verify = app.add_subcommand("verify", "Randomized brute-force verification suite");
  verify->add_option("--states", states, "Number of random states");
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--out", out, "Output directory for the report");
  verify->add_option("--corrupt-z1", corrupt_z1, "Test hook: scale the analytic z1")
      ->group("");  // hidden
  verify->add_flag("--serial", serial, "Disable OpenMP in the suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (evolve->parsed()) return run_evolve(config_path, out, dt, horizon);
    if (compare->parsed()) return run_compare(config_path, out, dt, horizon);
    if (figure->parsed()) return run_figure(preset_name, out, dt, horizon);
    if (sweep_cmd->parsed()) return run_sweep(config_path, out, axis, values);
    if (verify->parsed()) return run_verify(states, seed, out, corrupt_z1, serial);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
