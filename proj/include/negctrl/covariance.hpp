#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>

namespace negctrl {

/// Numerical tolerances shared across the library. Kept in one place so the
/// acceptance thresholds and the internal guards cannot drift apart.
namespace tol {
inline constexpr double symmetry = 1e-12;       // relative, covariance symmetry
inline constexpr double physicality = 1e-9;     // slack on nu >= 1
inline constexpr double symplectic = 1e-10;     // |S Omega S^T - Omega|_max
inline constexpr double cross_check = 1e-8;     // closed form vs eigensolver
inline constexpr double degenerate_u = 1e-10;   // PT spectrum near-degeneracy
inline constexpr double max_control_squeeze = 54.598150033144236;  // e^4
}  // namespace tol

/// Symplectic form for one mode, [[0,1],[-1,0]].
Eigen::Matrix2d symplectic_form_2();
/// Symplectic form for two modes (direct sum of the one-mode form).
Eigen::Matrix4d symplectic_form_4();

/// diag(z, 1/z), a single-mode squeezer in the (x,p) quadratures.
Eigen::Matrix2d squeeze_matrix(double z);
/// Phase-space rotation by theta; satisfies R Omega R^T = Omega.
Eigen::Matrix2d rotation_matrix(double theta);

/// A (possibly local) symplectic transformation on two modes. Instances are
/// validated on construction: S Omega S^T must equal Omega to tol::symplectic.
class SymplecticTransform {
 public:
  SymplecticTransform() : s_(Eigen::Matrix4d::Identity()), local_(true) {}

  static SymplecticTransform identity();
  /// Validates symplecticity; detects block-diagonal (local) structure.
  static SymplecticTransform from_matrix(const Eigen::Matrix4d& s);
  /// S1 (+) S2 acting on modes 1 and 2 separately.
  static SymplecticTransform local(const Eigen::Matrix2d& s1, const Eigen::Matrix2d& s2);
  /// s on the chosen mode (1 or 2), identity on the other.
  static SymplecticTransform on_mode(int mode, const Eigen::Matrix2d& s);

  const Eigen::Matrix4d& matrix() const { return s_; }
  bool is_local() const { return local_; }
  Eigen::Matrix2d mode1_block() const { return s_.block<2, 2>(0, 0); }
  Eigen::Matrix2d mode2_block() const { return s_.block<2, 2>(2, 2); }

  /// Group inverse, computed as -Omega S^T Omega (exact for symplectic S).
  SymplecticTransform inverse() const;
  /// this * other (apply `other` first).
  SymplecticTransform operator*(const SymplecticTransform& other) const;

  bool is_identity(double eps = 1e-12) const;

 private:
  SymplecticTransform(const Eigen::Matrix4d& s, bool local) : s_(s), local_(local) {}
  Eigen::Matrix4d s_;
  bool local_;
};

/// Second-moment matrix of a two-mode Gaussian state, in the convention where
/// the vacuum is the identity and the uncertainty relation reads nu >= 1.
/// Stored exactly symmetric; construction rejects asymmetric input.
class CovarianceMatrix {
 public:
  CovarianceMatrix() : m_(Eigen::Matrix4d::Identity()) {}
  explicit CovarianceMatrix(const Eigen::Matrix4d& m);

  const Eigen::Matrix4d& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Eigen::Matrix2d alpha() const { return m_.block<2, 2>(0, 0); }  // mode 1
  Eigen::Matrix2d beta() const { return m_.block<2, 2>(2, 2); }   // mode 2
  Eigen::Matrix2d gamma() const { return m_.block<2, 2>(0, 2); }  // correlations

 private:
  Eigen::Matrix4d m_;
};

/// Local symplectic invariants of a state and of its partial transpose.
/// sigma_tilde < 0 if and only if the state is entangled (two modes).
struct InvariantSet {
  double det_sigma;    // Det sigma
  double delta;        // Det alpha + Det beta + 2 Det gamma
  double delta_tilde;  // Det alpha + Det beta - 2 Det gamma
  double sigma_tilde;  // Det sigma - delta_tilde + 1
  double u;            // sqrt(delta_tilde^2 - 4 Det sigma), clamped at 0
};

CovarianceMatrix vacuum_state();

/// Two-mode squeezed vacuum with squeezing parameter r >= 0:
/// diagonal blocks cosh(2r) I, correlations diag(sinh 2r, -sinh 2r).
CovarianceMatrix two_mode_squeezed(double r);

/// diag(a,a) / diag(b,b) diagonal blocks with correlation diag(c+, c-).
/// No physicality validation; rejects non-finite input.
CovarianceMatrix from_normal_form(double a, double b, double c_plus, double c_minus);

/// The two symplectic eigenvalues, ascending, obtained as the moduli of the
/// eigenvalues of Omega*sigma through a generic dense eigensolver.
std::array<double, 2> symplectic_eigenvalues(const CovarianceMatrix& sigma);

/// Same spectrum from the closed form 2 nu^2 = Delta +- sqrt(Delta^2 - 4 Det).
std::array<double, 2> symplectic_eigenvalues_closed(const CovarianceMatrix& sigma);

/// Positive definite and nu_min >= 1 - slack.
bool is_physical(const CovarianceMatrix& sigma, double slack = tol::physicality);

/// Determinant via the symmetric eigensolver; backward stable on strongly
/// squeezed states where the cofactor formula cancels catastrophically.
double stable_determinant(const CovarianceMatrix& sigma);

/// Momentum sign flip on mode 1: T sigma T with T = diag(1,-1,1,1).
/// Exact involution.
CovarianceMatrix partial_transpose(const CovarianceMatrix& sigma);

/// Smallest symplectic eigenvalue of the partial transpose, from the closed
/// form; falls back to the eigensolver when the PT spectrum is degenerate.
/// Throws std::runtime_error if the discriminant is negative beyond tolerance.
double pt_min_eigenvalue(const CovarianceMatrix& sigma);

/// max{0, -log2(nu_tilde_minus)}, in ebits.
double log_negativity(const CovarianceMatrix& sigma);

InvariantSet invariants(const CovarianceMatrix& sigma);

/// S sigma S^T. The transform is validated at construction; this re-checks
/// nothing beyond what the type guarantees.
CovarianceMatrix apply_symplectic(const CovarianceMatrix& sigma, const SymplecticTransform& s);

/// Row-major flattening used by the file formats.
std::array<double, 16> to_row_major(const CovarianceMatrix& sigma);
CovarianceMatrix from_row_major(const std::array<double, 16>& values);

}  // namespace negctrl
