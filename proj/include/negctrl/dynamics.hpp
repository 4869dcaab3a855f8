#pragma once

#include "negctrl/covariance.hpp"

namespace negctrl {

/// Loss and diffusion rates of one thermal environment. Internally all rates
/// are expressed in 1/us; chi = gamma (2N + 1) >= gamma.
struct ModeBath {
  double gamma = 0.1;  // loss rate, 1/us
  double chi = 0.1;    // diffusion rate, 1/us
};

/// chi = gamma * chi_over_gamma, with chi_over_gamma >= 1.
ModeBath bath_from_ratio(double gamma, double chi_over_gamma);
/// chi = gamma (2N + 1), N >= 0.
ModeBath bath_from_occupation(double gamma, double mean_occupation);
/// Planck occupation N = 1/(exp(hbar omega / k T) - 1) for an angular
/// frequency omega (rad/s) and temperature T (K). T <= 0 is rejected; the
/// zero-temperature limit is bath_from_occupation(gamma, 0).
ModeBath bath_from_temperature(double gamma, double omega_rad_per_s, double temperature_kelvin);
double thermal_occupation(double omega_rad_per_s, double temperature_kelvin);

struct BathParams {
  ModeBath mode1;
  ModeBath mode2;

  static BathParams symmetric(const ModeBath& bath) { return {bath, bath}; }
  bool is_symmetric(double eps = 1e-12) const;
};

/// Exact solution of the diffusive evolution at time t (us):
///   alpha(t) = chi1/gamma1 I + (alpha0 - chi1/gamma1 I) e^{-gamma1 t}
///   gamma(t) = gamma0 e^{-(gamma1+gamma2) t / 2}
/// and the mirrored expression for beta. No integrator is involved.
CovarianceMatrix propagate(const CovarianceMatrix& sigma, const BathParams& baths, double t);

/// A = -1/2 diag(g1,g1,g2,g2) and D = diag(x1,x1,x2,x2) of the flow.
Eigen::Matrix4d drift_matrix(const BathParams& baths);
Eigen::Matrix4d diffusion_matrix(const BathParams& baths);

/// Instantaneous matrix derivative A sigma + sigma A^T + D.
Eigen::Matrix4d derivative(const CovarianceMatrix& sigma, const BathParams& baths);

/// d(Det sigma)/dt along the flow. Uses the Schur-complement form when the
/// correlation block is invertible and the general Jacobi form otherwise.
double det_sigma_rate(const CovarianceMatrix& sigma, const BathParams& baths);

/// d(Det alpha + Det beta - 2 Det gamma)/dt along the flow.
double delta_tilde_rate(const CovarianceMatrix& sigma, const BathParams& baths);

/// d(2 nu_tilde_minus^2)/dt via the chain rule through the two invariant
/// rates. Requires an entangled state; throws when the PT spectrum is
/// degenerate (u ~ 0) and the chain-rule weights are singular.
double nu_minus_rate(const CovarianceMatrix& sigma, const BathParams& baths);

}  // namespace negctrl
