#pragma once

#include "negctrl/dynamics.hpp"

#include <cstdint>
#include <random>

namespace negctrl {

/// Uniform double in [lo, hi) built directly from the generator output, so
/// streams are reproducible independently of the standard library.
double uniform(std::mt19937_64& rng, double lo, double hi);

struct RandomStateOptions {
  double max_param = 6.0;            // upper bound on the normal-form a, b
  double max_squeeze = 7.38905609893065;  // e^2, scramble squeeze bound
  double min_log_negativity = 0.05;  // rejection threshold, keeps test margins
  bool scramble = true;              // conjugate by a random local symplectic
};

/// Normal-form parameters drawn from bounded ranges, rejected until physical
/// and entangled, then optionally scrambled by a random local symplectic.
CovarianceMatrix random_entangled_state(std::mt19937_64& rng, const RandomStateOptions& options = {});

/// Random rotation * squeeze * rotation on each mode, squeezes <= max_squeeze.
SymplecticTransform random_local_symplectic(std::mt19937_64& rng, double max_squeeze);

struct RandomBathOptions {
  double gamma_lo = 0.05;  // 1/us
  double gamma_hi = 0.5;
  double ratio_lo = 1.0;   // chi/gamma
  double ratio_hi = 2.5;
  bool symmetric = false;
};

BathParams random_baths(std::mt19937_64& rng, const RandomBathOptions& options = {});

}  // namespace negctrl
