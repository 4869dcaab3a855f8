#include "negctrl/normal_form.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace negctrl {

namespace {

// Symplectic W with W m W^T = sqrt(det m) * I for symmetric positive
// definite m: rotate to the eigenbasis, then squeeze the axes together.
Eigen::Matrix2d williamson_local(const Eigen::Matrix2d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es;
  es.computeDirect(m);
  const double l0 = es.eigenvalues()(0), l1 = es.eigenvalues()(1);
  if (!(l0 > 0)) throw std::invalid_argument("normal_form: local block is not positive definite");
  if (l1 - l0 <= tol::symmetry * (l0 + l1)) return Eigen::Matrix2d::Identity();
  Eigen::Matrix2d v = es.eigenvectors();
  if (v.determinant() < 0) v.col(1) = -v.col(1);
  const double z = std::pow(l1 / l0, 0.25);
  return squeeze_matrix(z) * v.transpose();
}

}  // namespace

NormalForm normal_form(const CovarianceMatrix& sigma) {
  if (!is_physical(sigma)) throw std::invalid_argument("normal_form: input state is not physical");

  const Eigen::Matrix2d w1 = williamson_local(sigma.alpha());
  const Eigen::Matrix2d w2 = williamson_local(sigma.beta());

  NormalForm nf;
  nf.a = std::sqrt(sigma.alpha().determinant());
  nf.b = std::sqrt(sigma.beta().determinant());

  const Eigen::Matrix2d corr = w1 * sigma.gamma() * w2.transpose();
  Eigen::Matrix2d o1 = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d o2 = Eigen::Matrix2d::Identity();
  const double corr_scale = corr.cwiseAbs().maxCoeff();
  if (corr_scale > tol::symmetry * std::max(nf.a, nf.b)) {
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(corr, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix2d u = svd.matrixU();
    Eigen::Matrix2d v = svd.matrixV();
    // Push any reflections into the sign of the smaller singular value so
    // that both factors are proper rotations.
    const double su = u.determinant() < 0 ? -1.0 : 1.0;
    const double sv = v.determinant() < 0 ? -1.0 : 1.0;
    u.col(1) *= su;
    v.col(1) *= sv;
    o1 = u.transpose();
    o2 = v.transpose();
    nf.c_plus = svd.singularValues()(0);
    nf.c_minus = su * sv * svd.singularValues()(1);
  }

  nf.reducer = SymplecticTransform::local(o1 * w1, o2 * w2);
  return nf;
}

CovarianceMatrix normal_form_state(const NormalForm& nf) {
  return from_normal_form(nf.a, nf.b, nf.c_plus, nf.c_minus);
}

}  // namespace negctrl
