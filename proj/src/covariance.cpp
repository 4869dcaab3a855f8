#include "negctrl/covariance.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace negctrl {

Eigen::Matrix2d symplectic_form_2() {
  Eigen::Matrix2d w;
  w << 0, 1, -1, 0;
  return w;
}

Eigen::Matrix4d symplectic_form_4() {
  Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
  w.block<2, 2>(0, 0) = symplectic_form_2();
  w.block<2, 2>(2, 2) = symplectic_form_2();
  return w;
}

Eigen::Matrix2d squeeze_matrix(double z) {
  if (!(z > 0) || !std::isfinite(z)) throw std::invalid_argument("squeeze_matrix: z must be positive and finite");
  Eigen::Matrix2d m;
  m << z, 0, 0, 1.0 / z;
  return m;
}

Eigen::Matrix2d rotation_matrix(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d m;
  m << c, s, -s, c;
  return m;
}

namespace {

// Determinant through the symmetric eigensolver. The cofactor formula loses
// ~kappa * eps absolute accuracy on strongly squeezed states (entry products
// near 1e10 cancelling to order one); the eigenvalue product is backward
// stable and keeps the PT invariants meaningful there.
double det4_sym(const Eigen::Matrix4d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return m.determinant();
  return es.eigenvalues().prod();
}

bool blocks_local(const Eigen::Matrix4d& s) {
  return s.block<2, 2>(0, 2).cwiseAbs().maxCoeff() < tol::symplectic &&
         s.block<2, 2>(2, 0).cwiseAbs().maxCoeff() < tol::symplectic;
}

void check_symplectic(const Eigen::Matrix4d& s) {
  const Eigen::Matrix4d w = symplectic_form_4();
  const double err = (s * w * s.transpose() - w).cwiseAbs().maxCoeff();
  if (!(err < tol::symplectic)) throw std::invalid_argument("SymplecticTransform: S Omega S^T != Omega");
}

}  // namespace

SymplecticTransform SymplecticTransform::identity() { return SymplecticTransform(); }

SymplecticTransform SymplecticTransform::from_matrix(const Eigen::Matrix4d& s) {
  check_symplectic(s);
  return SymplecticTransform(s, blocks_local(s));
}

SymplecticTransform SymplecticTransform::local(const Eigen::Matrix2d& s1, const Eigen::Matrix2d& s2) {
  Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
  s.block<2, 2>(0, 0) = s1;
  s.block<2, 2>(2, 2) = s2;
  check_symplectic(s);
  return SymplecticTransform(s, true);
}

SymplecticTransform SymplecticTransform::on_mode(int mode, const Eigen::Matrix2d& s) {
  if (mode != 1 && mode != 2) throw std::invalid_argument("SymplecticTransform::on_mode: mode must be 1 or 2");
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  return mode == 1 ? local(s, id) : local(id, s);
}

SymplecticTransform SymplecticTransform::inverse() const {
  const Eigen::Matrix4d w = symplectic_form_4();
  Eigen::Matrix4d inv = -w * s_.transpose() * w;
  return SymplecticTransform(inv, local_);
}

SymplecticTransform SymplecticTransform::operator*(const SymplecticTransform& other) const {
  return SymplecticTransform(s_ * other.s_, local_ && other.local_);
}

bool SymplecticTransform::is_identity(double eps) const {
  return (s_ - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < eps;
}

CovarianceMatrix::CovarianceMatrix(const Eigen::Matrix4d& m) {
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!m.allFinite()) throw std::invalid_argument("CovarianceMatrix: non-finite entries");
  if (asym > tol::symmetry * scale) throw std::invalid_argument("CovarianceMatrix: input is not symmetric");
  m_ = 0.5 * (m + m.transpose());
}

CovarianceMatrix vacuum_state() { return CovarianceMatrix(); }

CovarianceMatrix two_mode_squeezed(double r) {
  if (!(r >= 0) || !std::isfinite(r)) throw std::invalid_argument("two_mode_squeezed: r must be >= 0");
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  return from_normal_form(ch, ch, sh, -sh);
}

CovarianceMatrix from_normal_form(double a, double b, double c_plus, double c_minus) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c_plus) || !std::isfinite(c_minus))
    throw std::invalid_argument("from_normal_form: parameters must be finite");
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = m(1, 1) = a;
  m(2, 2) = m(3, 3) = b;
  m(0, 2) = m(2, 0) = c_plus;
  m(1, 3) = m(3, 1) = c_minus;
  return CovarianceMatrix(m);
}

std::array<double, 2> symplectic_eigenvalues(const CovarianceMatrix& sigma) {
  Eigen::EigenSolver<Eigen::Matrix4d> solver(symplectic_form_4() * sigma.matrix(), false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");
  std::array<double, 4> mods;
  for (int i = 0; i < 4; ++i) mods[i] = std::abs(solver.eigenvalues()(i));
  std::sort(mods.begin(), mods.end());
  // The spectrum comes in degenerate pairs; average each pair.
  return {0.5 * (mods[0] + mods[1]), 0.5 * (mods[2] + mods[3])};
}

std::array<double, 2> symplectic_eigenvalues_closed(const CovarianceMatrix& sigma) {
  const double det_alpha = sigma.alpha().determinant();
  const double det_beta = sigma.beta().determinant();
  const double det_gamma = sigma.gamma().determinant();
  const double det_sigma = det4_sym(sigma.matrix());
  const double delta = det_alpha + det_beta + 2.0 * det_gamma;
  const double disc = delta * delta - 4.0 * det_sigma;
  if (disc < -tol::cross_check * std::max(delta * delta, 1.0))
    throw std::runtime_error("symplectic_eigenvalues_closed: negative discriminant");
  const double root = std::sqrt(std::max(disc, 0.0));
  const double hi2 = 0.5 * (delta + root);
  // nu_-^2 = 2 Det / (delta + root) avoids cancellation for small nu_-.
  const double lo2 = hi2 > 0 ? det_sigma / hi2 : 0.0;
  return {std::sqrt(std::max(lo2, 0.0)), std::sqrt(std::max(hi2, 0.0))};
}

bool is_physical(const CovarianceMatrix& sigma, double slack) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(sigma.matrix());
  if (es.info() != Eigen::Success) return false;
  if (es.eigenvalues()(0) <= 0) return false;
  const auto nu = symplectic_eigenvalues_closed(sigma);
  if (nu[0] >= 1.0 - slack) return true;
  const double scale = std::max(sigma.matrix().cwiseAbs().maxCoeff(), 1.0);
  if (nu[0] < 1.0 - 1e-5 * scale) return false;
  // Marginal band: near a degenerate spectrum the closed form loses half the
  // working precision through the discriminant, so settle it with the
  // uncertainty matrix sigma + i Omega directly.
  Eigen::Matrix4cd h = sigma.matrix().cast<std::complex<double>>();
  h += std::complex<double>(0.0, 1.0) * symplectic_form_4().cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> hs(h, Eigen::EigenvaluesOnly);
  if (hs.info() != Eigen::Success) return false;
  return hs.eigenvalues()(0) >= -slack * scale;
}

double stable_determinant(const CovarianceMatrix& sigma) { return det4_sym(sigma.matrix()); }

CovarianceMatrix partial_transpose(const CovarianceMatrix& sigma) {
  Eigen::Matrix4d m = sigma.matrix();
  // T sigma T with T = diag(1,-1,1,1): flip the sign of row/column 1.
  for (int j = 0; j < 4; ++j) {
    if (j != 1) {
      m(1, j) = -m(1, j);
      m(j, 1) = -m(j, 1);
    }
  }
  return CovarianceMatrix(m);
}

double pt_min_eigenvalue(const CovarianceMatrix& sigma) {
  const InvariantSet inv = invariants(sigma);
  const double scale = std::max(inv.delta_tilde * inv.delta_tilde, 1.0);
  const double disc = inv.delta_tilde * inv.delta_tilde - 4.0 * inv.det_sigma;
  if (disc < -tol::physicality * scale)
    throw std::runtime_error("pt_min_eigenvalue: negative discriminant, input is not a physical state");
  if (disc < tol::degenerate_u * scale) {
    // Degenerate PT spectrum: the closed form loses accuracy, use the solver.
    return symplectic_eigenvalues(partial_transpose(sigma))[0];
  }
  const double root = std::sqrt(disc);
  const double hi2 = 0.5 * (inv.delta_tilde + root);
  const double lo2 = inv.det_sigma / hi2;
  return std::sqrt(std::max(lo2, 0.0));
}

double log_negativity(const CovarianceMatrix& sigma) {
  const double nu = pt_min_eigenvalue(sigma);
  if (nu >= 1.0) return 0.0;
  return -std::log2(nu);
}

InvariantSet invariants(const CovarianceMatrix& sigma) {
  InvariantSet out;
  const double det_alpha = sigma.alpha().determinant();
  const double det_beta = sigma.beta().determinant();
  const double det_gamma = sigma.gamma().determinant();
  out.det_sigma = det4_sym(sigma.matrix());
  out.delta = det_alpha + det_beta + 2.0 * det_gamma;
  out.delta_tilde = det_alpha + det_beta - 2.0 * det_gamma;
  out.sigma_tilde = out.det_sigma - out.delta_tilde + 1.0;
  out.u = std::sqrt(std::max(out.delta_tilde * out.delta_tilde - 4.0 * out.det_sigma, 0.0));
  return out;
}

CovarianceMatrix apply_symplectic(const CovarianceMatrix& sigma, const SymplecticTransform& s) {
  Eigen::Matrix4d m = s.matrix() * sigma.matrix() * s.matrix().transpose();
  return CovarianceMatrix(0.5 * (m + m.transpose()));
}

std::array<double, 16> to_row_major(const CovarianceMatrix& sigma) {
  std::array<double, 16> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[4 * i + j] = sigma(i, j);
  return out;
}

CovarianceMatrix from_row_major(const std::array<double, 16>& values) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = values[4 * i + j];
  return CovarianceMatrix(m);
}

}  // namespace negctrl
