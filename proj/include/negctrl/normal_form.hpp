#pragma once

#include "negctrl/covariance.hpp"

namespace negctrl {

/// The four local symplectic invariants (a, b, c+, c-) together with the
/// explicit local transform that brings the state to that form.
///
/// Convention: c+ is the correlation of larger magnitude and carries the
/// positive sign, so c+ >= |c-| >= c-. The tuple is then a deterministic
/// function of the local orbit (Det alpha, Det beta, Det gamma, Det sigma).
struct NormalForm {
  double a = 1.0;
  double b = 1.0;
  double c_plus = 0.0;
  double c_minus = 0.0;
  /// reducer * sigma * reducer^T is in normal form; always block-diagonal.
  SymplecticTransform reducer;
};

/// Reduce a physical state to normal form. Throws std::invalid_argument on
/// non-physical input.
NormalForm normal_form(const CovarianceMatrix& sigma);

/// The normal-form matrix itself, diag blocks (a,a),(b,b), corr diag(c+,c-).
CovarianceMatrix normal_form_state(const NormalForm& nf);

}  // namespace negctrl
