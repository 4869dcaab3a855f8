#pragma once

#include "negctrl/control.hpp"
#include "negctrl/random_states.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace negctrl {

/// Grid / refinement settings of the brute-force search. The objective is the
/// finite-difference decay rate of the eigensolver negativity, so the search
/// shares no code with the analytic coefficient chain it validates.
struct SearchSettings {
  int z_points = 121;
  int theta_points = 64;
  int refine_passes = 2;
  double z_log_halfwidth = 3.0;   // initial grid spans z in [e^-3, e^3]
  double fd_time_factor = 1e-4;   // finite-difference horizon, units of 1/gamma_mean
  bool parallel = true;           // OpenMP over grid points
};

struct ModeSearchResult {
  double z = 1.0;
  double theta = 0.0;
  bool theta_flat = false;  // objective insensitive to theta at the optimum
};

struct OracleReport {
  double analytic_z1 = 1.0;
  double analytic_z2 = 1.0;
  ModeSearchResult numeric_mode1;
  ModeSearchResult numeric_mode2;
  double analytic_objective = 0.0;
  double numeric_objective = 0.0;
  double objective_gap = 0.0;  // analytic - numeric; must not exceed search noise
  bool rotation_flat_ok = true;  // theta sweeps at z-bar never beat theta = 0
};

/// Minimise the finite-difference negativity decay rate over local transforms
/// Z(z_j) R(theta_j) applied per mode in the normal-form frame, by grid search
/// with refinement, and compare against the analytic optimum.
OracleReport brute_force_control(const CovarianceMatrix& sigma, const BathParams& baths,
                                 const SearchSettings& settings = {});

struct NamedResidual {
  std::string name;
  double relative;
};

/// Relative residuals of every analytic rate against centered finite
/// differences of the exact flow (step 1e-6 / gamma_mean).
std::vector<NamedResidual> derivative_residuals(const CovarianceMatrix& sigma, const BathParams& baths);

struct SuiteSettings {
  int states = 100;
  std::uint64_t seed = 20250807;
  SearchSettings search;
  bool parallel = true;       // OpenMP over test states
  double corrupt_z1 = 1.0;    // test hook: multiplies the analytic z1 before scoring
};

struct StateCheck {
  double z1_gap = 0.0;     // |numeric - analytic|
  double z2_gap = 0.0;
  double objective_gap = 0.0;
  double max_residual = 0.0;
  bool rotation_flat_ok = true;
  bool coefficients_positive = true;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  int states = 0;
  double max_z_gap = 0.0;
  double max_objective_gap = 0.0;
  double max_derivative_residual = 0.0;
  int rotation_flat_violations = 0;
  int coefficient_violations = 0;
  bool pass = false;
  std::vector<StateCheck> per_state;

  nlohmann::json to_json() const;
};

/// Seeded randomized verification: draws entangled states and baths, runs the
/// brute-force search and the derivative residuals on each, and aggregates.
/// Pass criteria: every z gap < 1e-3, objective gaps < 1e-6, residuals < 1e-4.
SuiteReport run_verification_suite(const SuiteSettings& settings = {});

}  // namespace negctrl
