#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "negctrl/covariance.hpp"
#include "negctrl/random_states.hpp"

#include <cmath>

using namespace negctrl;

namespace {
// cosh(2r) = sqrt(2), the squeezing used throughout the worked examples.
const double k_r = 0.5 * std::log(std::sqrt(2.0) + 1.0);
}

TEST_CASE("two-mode squeezed state") {
  SUBCASE("zero squeezing is the vacuum") {
    CHECK((two_mode_squeezed(0.0).matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("cosh(2r) = sqrt(2) parameters") {
    const CovarianceMatrix sigma = two_mode_squeezed(k_r);
    CHECK(sigma(0, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sigma(2, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sigma(0, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sigma(1, 3) == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("pure: both symplectic eigenvalues are 1 (eigensolver route)") {
    const auto nu = symplectic_eigenvalues(two_mode_squeezed(k_r));
    CHECK(nu[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(nu[1] == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("negative r rejected") { CHECK_THROWS_AS(two_mode_squeezed(-0.1), std::invalid_argument); }
}

TEST_CASE("normal-form constructor") {
  SUBCASE("identity") {
    CHECK(from_normal_form(1, 1, 0, 0).matrix() == Eigen::Matrix4d::Identity());
  }
  SUBCASE("asymmetric example is physical and entangled") {
    const CovarianceMatrix sigma = from_normal_form(4.5, 3.5, 2.2, -3.5);
    CHECK(is_physical(sigma));
    CHECK(log_negativity(sigma) > 0.0);
  }
  SUBCASE("strongly correlated example is physical and entangled") {
    const CovarianceMatrix sigma = from_normal_form(5.0, 6.0, 5.2, -4.8);
    CHECK(is_physical(sigma));
    CHECK(log_negativity(sigma) > 0.0);
  }
  SUBCASE("non-finite input rejected") {
    CHECK_THROWS_AS(from_normal_form(std::nan(""), 1, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(from_normal_form(1, INFINITY, 0, 0), std::invalid_argument);
  }
  SUBCASE("asymmetric matrix rejected") {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 1) = 1e-3;
    CHECK_THROWS_AS((CovarianceMatrix{m}), std::invalid_argument);
  }
}

TEST_CASE("symplectic eigenvalues") {
  SUBCASE("vacuum") {
    const auto nu = symplectic_eigenvalues(vacuum_state());
    CHECK(nu[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nu[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("thermal product state is already diagonal") {
    const auto nu = symplectic_eigenvalues(from_normal_form(3.0, 5.0, 0.0, 0.0));
    CHECK(nu[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(nu[1] == doctest::Approx(5.0).epsilon(1e-12));
  }
  SUBCASE("eigensolver route agrees with the closed form") {
    const CovarianceMatrix sigma = from_normal_form(4.5, 3.5, 2.2, -3.5);
    const auto a = symplectic_eigenvalues(sigma);
    const auto b = symplectic_eigenvalues_closed(sigma);
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-10));
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-10));
  }
}

TEST_CASE("partial transposition") {
  SUBCASE("vacuum fixed") {
    CHECK(partial_transpose(vacuum_state()).matrix() == Eigen::Matrix4d::Identity());
  }
  SUBCASE("sign structure on the squeezed state") {
    const CovarianceMatrix pt = partial_transpose(two_mode_squeezed(k_r));
    CHECK(pt(0, 2) == doctest::Approx(1.0));
    CHECK(pt(1, 3) == doctest::Approx(1.0));  // x-p correlation sign flipped
  }
  SUBCASE("determinant unchanged") {
    const CovarianceMatrix sigma = from_normal_form(4.5, 3.5, 2.2, -3.5);
    CHECK(partial_transpose(sigma).matrix().determinant() ==
          doctest::Approx(sigma.matrix().determinant()).epsilon(1e-12));
  }
  SUBCASE("exact involution") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
      const CovarianceMatrix sigma = random_entangled_state(rng);
      CHECK(partial_transpose(partial_transpose(sigma)).matrix() == sigma.matrix());
    }
  }
}

TEST_CASE("smallest PT symplectic eigenvalue and negativity") {
  SUBCASE("vacuum") {
    CHECK(pt_min_eigenvalue(vacuum_state()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(log_negativity(vacuum_state()) == 0.0);
  }
  SUBCASE("squeezed state closed form") {
    const CovarianceMatrix sigma = two_mode_squeezed(k_r);
    // 2 nu^2 = 6 - sqrt(32)  =>  nu = sqrt(2) - 1
    const double expected = std::sqrt(2.0) - 1.0;
    CHECK(pt_min_eigenvalue(sigma) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(symplectic_eigenvalues(partial_transpose(sigma))[0] ==
          doctest::Approx(expected).epsilon(1e-10));
    CHECK(log_negativity(sigma) == doctest::Approx(1.2715533).epsilon(1e-7));
  }
  SUBCASE("entangled asymmetric state") {
    CHECK(pt_min_eigenvalue(from_normal_form(4.5, 3.5, 2.2, -3.5)) < 1.0);
  }
  SUBCASE("separable thermal product has zero negativity") {
    CHECK(log_negativity(from_normal_form(3.0, 5.0, 0.0, 0.0)) == 0.0);
  }
  SUBCASE("non-physical input signalled") {
    // delta_tilde^2 < 4 det for this symmetric but unphysical matrix
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    m(2, 2) = -1.0;
    m(3, 3) = 1.0;
    m(0, 2) = m(2, 0) = 1.0;
    CHECK_THROWS_AS(pt_min_eigenvalue(CovarianceMatrix(m)), std::runtime_error);
  }
}

TEST_CASE("invariants") {
  SUBCASE("vacuum") {
    const InvariantSet inv = invariants(vacuum_state());
    CHECK(inv.det_sigma == doctest::Approx(1.0));
    CHECK(inv.delta == doctest::Approx(2.0));
    CHECK(inv.delta_tilde == doctest::Approx(2.0));
    CHECK(inv.sigma_tilde == doctest::Approx(0.0));
    CHECK(inv.u == doctest::Approx(0.0));
  }
  SUBCASE("squeezed state") {
    const InvariantSet inv = invariants(two_mode_squeezed(k_r));
    CHECK(inv.det_sigma == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inv.delta_tilde == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(inv.sigma_tilde == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(inv.u == doctest::Approx(std::sqrt(32.0)).epsilon(1e-12));
  }
  SUBCASE("asymmetric state is entangled by the separability parameter") {
    CHECK(invariants(from_normal_form(4.5, 3.5, 2.2, -3.5)).sigma_tilde < 0.0);
  }
}

TEST_CASE("symplectic transforms") {
  SUBCASE("identity leaves states alone") {
    const CovarianceMatrix sigma = from_normal_form(4.5, 3.5, 2.2, -3.5);
    CHECK(apply_symplectic(sigma, SymplecticTransform::identity()).matrix() == sigma.matrix());
  }
  SUBCASE("local operations cannot change the negativity") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
      const CovarianceMatrix sigma = random_entangled_state(rng);
      const SymplecticTransform s = random_local_symplectic(rng, std::exp(2.0));
      CHECK(log_negativity(apply_symplectic(sigma, s)) ==
            doctest::Approx(log_negativity(sigma)).epsilon(1e-10));
    }
  }
  SUBCASE("trace of the squeezed block") {
    const double a = 4.5, z = 1.7;
    const CovarianceMatrix sigma = from_normal_form(a, 3.5, 2.2, -3.5);
    const CovarianceMatrix out =
        apply_symplectic(sigma, SymplecticTransform::on_mode(1, squeeze_matrix(z)));
    CHECK(out.alpha().trace() == doctest::Approx(a * (z * z + 1.0 / (z * z))).epsilon(1e-12));
  }
  SUBCASE("non-symplectic matrix rejected") {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity() * 2.0;
    CHECK_THROWS_AS(SymplecticTransform::from_matrix(m), std::invalid_argument);
    Eigen::Matrix2d bad;
    bad << 1, 0, 0, 2;  // det != 1
    CHECK_THROWS_AS(SymplecticTransform::local(bad, Eigen::Matrix2d::Identity()),
                    std::invalid_argument);
  }
  SUBCASE("inverse and composition") {
    std::mt19937_64 rng(3);
    const SymplecticTransform s = random_local_symplectic(rng, std::exp(2.0));
    CHECK((s * s.inverse()).is_identity(1e-10));
  }
}

TEST_CASE("random-state properties") {
  std::mt19937_64 rng(20250807);
  int entangled_seen = 0;
  for (int i = 0; i < 1000; ++i) {
    const CovarianceMatrix sigma = random_entangled_state(rng);
    CAPTURE(i);
    REQUIRE(is_physical(sigma));

    // Closed form against the eigensolver route, on the state (where the
    // spectrum is comfortably split) and always on its partial transpose.
    const auto closed = symplectic_eigenvalues_closed(sigma);
    const auto solver = symplectic_eigenvalues(sigma);
    if (closed[1] - closed[0] > 1e-3) {
      CHECK(std::abs(closed[0] - solver[0]) <= 1e-8 * std::max(1.0, solver[0]));
      CHECK(std::abs(closed[1] - solver[1]) <= 1e-8 * std::max(1.0, solver[1]));
    }

    const auto pt = symplectic_eigenvalues(partial_transpose(sigma));
    CHECK(std::abs(pt_min_eigenvalue(sigma) - pt[0]) <= 1e-8 * std::max(1.0, pt[0]));

    // At most one PT symplectic eigenvalue below 1.
    CHECK(pt[1] >= 1.0 - 1e-9);

    // The two entanglement criteria must agree away from the boundary.
    const InvariantSet inv = invariants(sigma);
    const double nu = pt_min_eigenvalue(sigma);
    if (std::abs(nu - 1.0) > 1e-9) CHECK((inv.sigma_tilde < 0.0) == (nu < 1.0));
    if (log_negativity(sigma) > 0.0) ++entangled_seen;
  }
  CHECK(entangled_seen == 1000);  // generator only emits entangled states
}

TEST_CASE("row-major serialization") {
  std::mt19937_64 rng(23);
  const CovarianceMatrix sigma = random_entangled_state(rng);
  CHECK(from_row_major(to_row_major(sigma)).matrix() == sigma.matrix());
}
