#pragma once

#include "negctrl/dynamics.hpp"
#include "negctrl/normal_form.hpp"

#include <optional>
#include <vector>

namespace negctrl {

enum class ControlLaw { none, negativity, sigma_tilde };
enum class ControlScope { both_modes, mode_1, mode_2 };

/// When control operations fire along a simulation.
struct ControlSchedule {
  enum class Kind { initial_only, at_times, every_step };
  Kind kind = Kind::initial_only;
  std::vector<double> times;  // us, used by at_times only

  static ControlSchedule initial_only() { return {Kind::initial_only, {}}; }
  static ControlSchedule every_step() { return {Kind::every_step, {}}; }
  static ControlSchedule at_times(std::vector<double> t) { return {Kind::at_times, std::move(t)}; }
};

struct ControlStrategy {
  ControlLaw law = ControlLaw::none;
  ControlScope scope = ControlScope::both_modes;
  ControlSchedule schedule = ControlSchedule::initial_only();

  static ControlStrategy none() { return {}; }
};

/// Coefficients of the squeeze objective chi1 (v1 z1^2 + w1/z1^2) +
/// chi2 (v2 z2^2 + w2/z2^2), for one of the two control laws.
struct SqueezeCoefficients {
  double v1, w1, v2, w2;
  ControlLaw law;

  bool all_positive() const { return v1 > 0 && w1 > 0 && v2 > 0 && w2 > 0; }
};

/// Negativity-law coefficients from the normal-form invariants. These are
/// positive for every entangled state; a non-positive value would mean the
/// free dynamics can increase the entanglement, so it is reported loudly.
SqueezeCoefficients squeeze_coefficients(const NormalForm& nf);
SqueezeCoefficients squeeze_coefficients(double a, double b, double c_plus, double c_minus);

/// Coefficients of the alternative law that minimises the separability
/// parameter instead. May legitimately degenerate to zero on pure states;
/// never throws, callers inspect all_positive().
SqueezeCoefficients sigma_squeeze_coefficients(const NormalForm& nf);
SqueezeCoefficients sigma_squeeze_coefficients(double a, double b, double c_plus, double c_minus);

struct OptimalSqueezings {
  double z1 = 1.0;
  double z2 = 1.0;
  bool clamped = false;  // a degenerate coefficient forced a clamp at e^{+-4}
};

/// z_j = (w_j / v_j)^{1/4}, the exact minimiser of v z^2 + w / z^2 over z > 0.
/// Degenerate (non-positive) coefficients push z to the configured clamp.
OptimalSqueezings optimal_squeezings(const SqueezeCoefficients& coeffs);

/// The local transform that minimises the decay rate of the logarithmic
/// negativity at this instant: optimal squeezes composed onto the
/// normal-form reducer. Bath-independent. Identity for separable states.
SymplecticTransform optimal_control_both(const CovarianceMatrix& sigma);

/// Same minimisation restricted to operations on a single mode; the other
/// mode is left untouched.
SymplecticTransform optimal_control_single(const CovarianceMatrix& sigma, int mode);

/// Dispatch on law and scope; `clamped` is set when the sigma law hit the
/// squeeze clamp. Returns identity for law none or separable states.
SymplecticTransform control_for(const CovarianceMatrix& sigma, ControlLaw law, ControlScope scope,
                                bool* clamped = nullptr);

struct TrajectoryPoint {
  double t = 0.0;  // us
  CovarianceMatrix state;
  double log_neg = 0.0;
  double nu_minus = 1.0;
  double sigma_tilde = 0.0;
  double det_sigma = 1.0;
  double delta_tilde = 2.0;
  bool control_applied = false;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::vector<std::pair<double, SymplecticTransform>> controls;
  int clamp_warnings = 0;

  const TrajectoryPoint& at_or_after(double t) const;
};

/// Alternate instantaneous control applications with exact free propagation
/// over a uniform grid of step dt covering [0, horizon]. With strategy none
/// this reduces to sampling `propagate`.
Trajectory simulate(const CovarianceMatrix& sigma0, const BathParams& baths,
                    const ControlStrategy& strategy, double horizon, double dt);

/// First time at which the state becomes separable, refined by bisection on
/// the exact flow to 1e-4 us. Empty when entanglement survives the horizon.
std::optional<double> death_time(const CovarianceMatrix& sigma0, const BathParams& baths,
                                 const ControlStrategy& strategy, double horizon, double dt);

}  // namespace negctrl
