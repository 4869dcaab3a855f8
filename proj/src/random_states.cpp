#include "negctrl/random_states.hpp"

#include <cmath>

namespace negctrl {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

SymplecticTransform random_local_symplectic(std::mt19937_64& rng, double max_squeeze) {
  const auto one_mode = [&rng, max_squeeze]() {
    const double z = std::exp(uniform(rng, -std::log(max_squeeze), std::log(max_squeeze)));
    const double pre = uniform(rng, 0.0, 2.0 * M_PI);
    const double post = uniform(rng, 0.0, 2.0 * M_PI);
    return rotation_matrix(post) * squeeze_matrix(z) * rotation_matrix(pre);
  };
  return SymplecticTransform::local(one_mode(), one_mode());
}

CovarianceMatrix random_entangled_state(std::mt19937_64& rng, const RandomStateOptions& options) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double a = uniform(rng, 1.0, options.max_param);
    const double b = uniform(rng, 1.0, options.max_param);
    const double cap = std::sqrt(a * b);
    const double c_plus = uniform(rng, 0.0, cap);
    const double c_minus = uniform(rng, -cap, 0.0);
    CovarianceMatrix sigma = from_normal_form(a, b, c_plus, c_minus);
    if (!is_physical(sigma)) continue;
    if (log_negativity(sigma) < options.min_log_negativity) continue;
    if (options.scramble)
      sigma = apply_symplectic(sigma, random_local_symplectic(rng, options.max_squeeze));
    return sigma;
  }
  throw std::runtime_error("random_entangled_state: rejection sampling failed");
}

BathParams random_baths(std::mt19937_64& rng, const RandomBathOptions& options) {
  const double g1 = uniform(rng, options.gamma_lo, options.gamma_hi);
  const double r1 = uniform(rng, options.ratio_lo, options.ratio_hi);
  if (options.symmetric) return BathParams::symmetric(bath_from_ratio(g1, r1));
  const double g2 = uniform(rng, options.gamma_lo, options.gamma_hi);
  const double r2 = uniform(rng, options.ratio_lo, options.ratio_hi);
  return {bath_from_ratio(g1, r1), bath_from_ratio(g2, r2)};
}

}  // namespace negctrl
