#include "negctrl/dynamics.hpp"

#include <cmath>

namespace negctrl {

namespace {
constexpr double k_hbar = 1.054571817e-34;  // J s
constexpr double k_boltzmann = 1.380649e-23;  // J/K

void check_bath(const ModeBath& bath) {
  if (!(bath.gamma > 0) || !std::isfinite(bath.gamma))
    throw std::invalid_argument("ModeBath: gamma must be positive");
  if (!(bath.chi >= bath.gamma) || !std::isfinite(bath.chi))
    throw std::invalid_argument("ModeBath: chi must satisfy chi >= gamma");
}
}  // namespace

ModeBath bath_from_ratio(double gamma, double chi_over_gamma) {
  ModeBath bath{gamma, gamma * chi_over_gamma};
  check_bath(bath);
  return bath;
}

ModeBath bath_from_occupation(double gamma, double mean_occupation) {
  if (!(mean_occupation >= 0)) throw std::invalid_argument("bath_from_occupation: N must be >= 0");
  return bath_from_ratio(gamma, 2.0 * mean_occupation + 1.0);
}

double thermal_occupation(double omega_rad_per_s, double temperature_kelvin) {
  if (!(omega_rad_per_s > 0)) throw std::invalid_argument("thermal_occupation: omega must be positive");
  if (!(temperature_kelvin > 0)) throw std::invalid_argument("thermal_occupation: T must be positive");
  const double x = k_hbar * omega_rad_per_s / (k_boltzmann * temperature_kelvin);
  return 1.0 / std::expm1(x);
}

ModeBath bath_from_temperature(double gamma, double omega_rad_per_s, double temperature_kelvin) {
  return bath_from_occupation(gamma, thermal_occupation(omega_rad_per_s, temperature_kelvin));
}

bool BathParams::is_symmetric(double eps) const {
  return std::abs(mode1.gamma - mode2.gamma) <= eps * std::abs(mode1.gamma) &&
         std::abs(mode1.chi - mode2.chi) <= eps * std::max(std::abs(mode1.chi), 1.0);
}

CovarianceMatrix propagate(const CovarianceMatrix& sigma, const BathParams& baths, double t) {
  check_bath(baths.mode1);
  check_bath(baths.mode2);
  if (!(t >= 0) || !std::isfinite(t)) throw std::invalid_argument("propagate: t must be >= 0");

  const double g1 = baths.mode1.gamma, g2 = baths.mode2.gamma;
  const double f1 = baths.mode1.chi / g1, f2 = baths.mode2.chi / g2;  // fixed-point occupancies
  const double e1 = std::exp(-g1 * t), e2 = std::exp(-g2 * t);
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();

  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.block<2, 2>(0, 0) = f1 * id + (sigma.alpha() - f1 * id) * e1;
  m.block<2, 2>(2, 2) = f2 * id + (sigma.beta() - f2 * id) * e2;
  const Eigen::Matrix2d corr = sigma.gamma() * std::exp(-0.5 * (g1 + g2) * t);
  m.block<2, 2>(0, 2) = corr;
  m.block<2, 2>(2, 0) = corr.transpose();
  return CovarianceMatrix(m);
}

Eigen::Matrix4d drift_matrix(const BathParams& baths) {
  Eigen::Vector4d d(-0.5 * baths.mode1.gamma, -0.5 * baths.mode1.gamma,
                    -0.5 * baths.mode2.gamma, -0.5 * baths.mode2.gamma);
  return d.asDiagonal();
}

Eigen::Matrix4d diffusion_matrix(const BathParams& baths) {
  Eigen::Vector4d d(baths.mode1.chi, baths.mode1.chi, baths.mode2.chi, baths.mode2.chi);
  return d.asDiagonal();
}

Eigen::Matrix4d derivative(const CovarianceMatrix& sigma, const BathParams& baths) {
  const Eigen::Matrix4d a = drift_matrix(baths);
  return a * sigma.matrix() + sigma.matrix() * a.transpose() + diffusion_matrix(baths);
}

double det_sigma_rate(const CovarianceMatrix& sigma, const BathParams& baths) {
  const double g1 = baths.mode1.gamma, g2 = baths.mode2.gamma;
  const double x1 = baths.mode1.chi, x2 = baths.mode2.chi;
  const Eigen::Matrix2d alpha = sigma.alpha();
  const Eigen::Matrix2d beta = sigma.beta();
  const Eigen::Matrix2d corr = sigma.gamma();
  const double det_sigma = stable_determinant(sigma);

  const double block_scale = std::max({alpha.cwiseAbs().maxCoeff(), beta.cwiseAbs().maxCoeff(), 1.0});
  if (std::abs(corr.determinant()) < tol::degenerate_u * block_scale * block_scale) {
    // Singular correlation block: general Jacobi form Det * Tr[sigma^-1 sigma_dot].
    const Eigen::Matrix4d dot = derivative(sigma, baths);
    return det_sigma * (sigma.matrix().inverse() * dot).trace();
  }

  const Eigen::Matrix2d schur_beta = alpha - corr * beta.inverse() * corr.transpose();
  const Eigen::Matrix2d schur_alpha = beta - corr.transpose() * alpha.inverse() * corr;
  return -2.0 * (g1 + g2) * det_sigma + x1 * beta.determinant() * schur_beta.trace() +
         x2 * alpha.determinant() * schur_alpha.trace();
}

double delta_tilde_rate(const CovarianceMatrix& sigma, const BathParams& baths) {
  const double g1 = baths.mode1.gamma, g2 = baths.mode2.gamma;
  const double x1 = baths.mode1.chi, x2 = baths.mode2.chi;
  return -2.0 * g1 * sigma.alpha().determinant() - 2.0 * g2 * sigma.beta().determinant() +
         2.0 * (g1 + g2) * sigma.gamma().determinant() + x1 * sigma.alpha().trace() +
         x2 * sigma.beta().trace();
}

double nu_minus_rate(const CovarianceMatrix& sigma, const BathParams& baths) {
  const InvariantSet inv = invariants(sigma);
  const double scale = std::max(std::abs(inv.delta_tilde), 1.0);
  if (inv.u <= tol::degenerate_u * scale)
    throw std::runtime_error("nu_minus_rate: degenerate PT spectrum (u ~ 0)");
  return (2.0 / inv.u) * det_sigma_rate(sigma, baths) +
         (1.0 - inv.delta_tilde / inv.u) * delta_tilde_rate(sigma, baths);
}

}  // namespace negctrl
