#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "negctrl/control.hpp"
#include "negctrl/random_states.hpp"

#include <cmath>

using namespace negctrl;

namespace {

const double k_r = 0.5 * std::log(std::sqrt(2.0) + 1.0);
const BathParams k_warm = BathParams::symmetric(bath_from_ratio(0.1, 2.0));

// Independent 1-D minimiser of v z^2 + w / z^2 (golden section on log z).
double golden_section_min(double v, double w) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(1e-3), hi = std::log(1e3);
  const auto f = [v, w](double lnz) {
    const double z2 = std::exp(2.0 * lnz);
    return v * z2 + w / z2;
  };
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo); f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo); f2 = f(x2);
    }
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("squeeze coefficients") {
  SUBCASE("symmetric correlations give v = w") {
    const SqueezeCoefficients c = squeeze_coefficients(4.0, 2.5, 1.8, -1.8);
    CHECK(c.v1 == doctest::Approx(c.w1).epsilon(1e-13));
    CHECK(c.v2 == doctest::Approx(c.w2).epsilon(1e-13));
  }
  SUBCASE("squeezed-vacuum family collapses all four") {
    const double ch = std::cosh(2.0 * k_r), sh = std::sinh(2.0 * k_r);
    const SqueezeCoefficients c = squeeze_coefficients(ch, ch, sh, -sh);
    CHECK(c.v1 == doctest::Approx(c.w1).epsilon(1e-13));
    CHECK(c.v1 == doctest::Approx(c.v2).epsilon(1e-13));
    CHECK(c.v1 == doctest::Approx(c.w2).epsilon(1e-13));
  }
  SUBCASE("asymmetric example is strictly positive") {
    const SqueezeCoefficients c = squeeze_coefficients(4.5, 3.5, 2.2, -3.5);
    CHECK(c.v1 > 0.0);
    CHECK(c.w1 > 0.0);
    CHECK(c.v2 > 0.0);
    CHECK(c.w2 > 0.0);
  }
  SUBCASE("positivity across random entangled states") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
      const NormalForm nf = normal_form(random_entangled_state(rng));
      CHECK_NOTHROW(squeeze_coefficients(nf));
    }
  }
}

TEST_CASE("optimal squeezings") {
  SUBCASE("symmetric correlations need no squeezing") {
    const OptimalSqueezings z = optimal_squeezings(squeeze_coefficients(4.0, 2.5, 1.8, -1.8));
    CHECK(z.z1 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(z.z2 == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("quartic root against a golden-section search") {
    const SqueezeCoefficients c = squeeze_coefficients(4.5, 3.5, 3.5, -2.2);
    const OptimalSqueezings z = optimal_squeezings(c);
    CHECK(z.z1 == doctest::Approx(golden_section_min(c.v1, c.w1)).epsilon(1e-6));
    CHECK(z.z2 == doctest::Approx(golden_section_min(c.v2, c.w2)).epsilon(1e-6));
  }
  SUBCASE("exchanging the correlation gauge inverts the squeezings") {
    const OptimalSqueezings z = optimal_squeezings(squeeze_coefficients(4.5, 3.5, 2.2, -3.5));
    const OptimalSqueezings flipped = optimal_squeezings(squeeze_coefficients(4.5, 3.5, 3.5, -2.2));
    CHECK(flipped.z1 == doctest::Approx(1.0 / z.z1).epsilon(1e-12));
    CHECK(flipped.z2 == doctest::Approx(1.0 / z.z2).epsilon(1e-12));
  }
  SUBCASE("stationarity of the objective at the optimum") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
      const double v = uniform(rng, 0.01, 50.0), w = uniform(rng, 0.01, 50.0);
      const double z = std::pow(w / v, 0.25);
      const double slope = 2.0 * v * z - 2.0 * w / (z * z * z);
      const double curvature = 2.0 * v + 6.0 * w / (z * z * z * z);
      CHECK(std::abs(slope) < 1e-10 * (v + w));
      CHECK(curvature > 0.0);
    }
  }
}

TEST_CASE("two-mode optimal control") {
  SUBCASE("squeezed vacuum: control is just the normal-form reduction") {
    const CovarianceMatrix sigma = two_mode_squeezed(k_r);
    const SymplecticTransform s = optimal_control_both(sigma);
    const CovarianceMatrix controlled = apply_symplectic(sigma, s);
    CHECK((controlled.matrix() - sigma.matrix()).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("negativity unchanged at the instant of application") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 40; ++i) {
      const CovarianceMatrix sigma = random_entangled_state(rng);
      const CovarianceMatrix controlled = apply_symplectic(sigma, optimal_control_both(sigma));
      CHECK(log_negativity(controlled) == doctest::Approx(log_negativity(sigma)).epsilon(1e-10));
    }
  }
  SUBCASE("gauge independence of the controlled state") {
    std::mt19937_64 rng(14);
    const CovarianceMatrix base = from_normal_form(4.5, 3.5, 2.2, -3.5);
    const CovarianceMatrix reference = apply_symplectic(base, optimal_control_both(base));
    for (int i = 0; i < 15; ++i) {
      const CovarianceMatrix scrambled =
          apply_symplectic(base, random_local_symplectic(rng, std::exp(2.0)));
      const CovarianceMatrix controlled = apply_symplectic(scrambled, optimal_control_both(scrambled));
      CHECK((controlled.matrix() - reference.matrix()).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
  SUBCASE("separable input yields the identity") {
    CHECK(optimal_control_both(from_normal_form(3.0, 5.0, 0.0, 0.0)).is_identity());
  }
}

TEST_CASE("single-mode optimal control") {
  SUBCASE("unit squeezing for symmetric correlations with a round local block") {
    const CovarianceMatrix sigma = two_mode_squeezed(k_r);
    const SymplecticTransform s = optimal_control_single(sigma, 1);
    // Only a rotation remains on mode 1, nothing on mode 2.
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(s.mode1_block());
    CHECK(svd.singularValues()(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((s.mode2_block() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("controlling different modes gives different evolutions") {
    const CovarianceMatrix sigma = from_normal_form(4.5, 3.5, 2.2, -3.5);
    const BathParams baths = BathParams::symmetric(bath_from_ratio(0.1, 1.000013));
    const CovarianceMatrix c1 = apply_symplectic(sigma, optimal_control_single(sigma, 1));
    const CovarianceMatrix c2 = apply_symplectic(sigma, optimal_control_single(sigma, 2));
    double max_gap = 0.0;
    for (double t : {2.0, 5.0, 8.0})
      max_gap = std::max(max_gap, std::abs(log_negativity(propagate(c1, baths, t)) -
                                           log_negativity(propagate(c2, baths, t))));
    CHECK(max_gap > 1e-4);
  }
  SUBCASE("scrambling the uncontrolled mode leaves the control result alone") {
    std::mt19937_64 rng(15);
    const CovarianceMatrix base = from_normal_form(4.5, 3.5, 2.2, -3.5);
    const CovarianceMatrix ref = apply_symplectic(base, optimal_control_single(base, 1));
    for (int i = 0; i < 15; ++i) {
      const Eigen::Matrix2d g = random_local_symplectic(rng, std::exp(2.0)).mode2_block();
      const CovarianceMatrix scrambled =
          apply_symplectic(base, SymplecticTransform::on_mode(2, g));
      const CovarianceMatrix controlled =
          apply_symplectic(scrambled, optimal_control_single(scrambled, 1));
      // The mode-1 reduced state after control is an orbit function.
      CHECK((controlled.alpha() - ref.alpha()).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(log_negativity(controlled) == doctest::Approx(log_negativity(ref)).epsilon(1e-9));
    }
  }
  SUBCASE("scrambling the controlled mode leaves the whole curve alone") {
    std::mt19937_64 rng(16);
    const CovarianceMatrix base = from_normal_form(4.5, 3.5, 2.2, -3.5);
    const BathParams baths = BathParams::symmetric(bath_from_ratio(0.1, 1.000013));
    const CovarianceMatrix ref = apply_symplectic(base, optimal_control_single(base, 1));
    for (int i = 0; i < 10; ++i) {
      const Eigen::Matrix2d g = random_local_symplectic(rng, std::exp(2.0)).mode1_block();
      const CovarianceMatrix scrambled =
          apply_symplectic(base, SymplecticTransform::on_mode(1, g));
      const CovarianceMatrix controlled =
          apply_symplectic(scrambled, optimal_control_single(scrambled, 1));
      for (double t : {0.0, 5.0, 20.0, 60.0})
        CHECK(log_negativity(propagate(controlled, baths, t)) ==
              doctest::Approx(log_negativity(propagate(ref, baths, t))).epsilon(1e-8));
    }
  }
}

TEST_CASE("separability-parameter law") {
  SUBCASE("symmetric correlations degenerate to unit squeezing") {
    const SqueezeCoefficients c = sigma_squeeze_coefficients(4.0, 2.5, 1.8, -1.8);
    CHECK(c.v1 == doctest::Approx(c.w1).epsilon(1e-13));
    CHECK(c.v2 == doctest::Approx(c.w2).epsilon(1e-13));
    const OptimalSqueezings z = optimal_squeezings(c);
    CHECK(z.z1 == doctest::Approx(1.0));
    CHECK(z.z2 == doctest::Approx(1.0));
  }
  SUBCASE("quartic-root optimum on the comparison state") {
    const SqueezeCoefficients c = sigma_squeeze_coefficients(4.5, 3.5, 3.5, -2.2);
    CHECK(c.all_positive());
    const OptimalSqueezings z = optimal_squeezings(c);
    CHECK(z.z1 == doctest::Approx(std::pow(c.w1 / c.v1, 0.25)).epsilon(1e-13));
    CHECK(z.z2 == doctest::Approx(std::pow(c.w2 / c.v2, 0.25)).epsilon(1e-13));
    CHECK_FALSE(z.clamped);
  }
  SUBCASE("pure squeezed vacuum degenerates and is flagged") {
    const double ch = std::cosh(2.0 * k_r), sh = std::sinh(2.0 * k_r);
    const SqueezeCoefficients c = sigma_squeeze_coefficients(ch, ch, sh, -sh);
    CHECK(c.v1 == doctest::Approx(0.0).epsilon(1e-12));  // b(ab - c+^2) - a = b - a = 0
    CHECK_FALSE(c.all_positive());
    const OptimalSqueezings z = optimal_squeezings(c);
    CHECK(z.clamped);
    CHECK(z.z1 == doctest::Approx(tol::max_control_squeeze));
  }
}

TEST_CASE("simulation") {
  SUBCASE("no control reduces to sampling the flow") {
    const CovarianceMatrix sigma = two_mode_squeezed(k_r);
    const Trajectory traj = simulate(sigma, k_warm, ControlStrategy::none(), 5.0, 0.5);
    REQUIRE(traj.points.size() == 11);
    CHECK(traj.controls.empty());
    for (const auto& p : traj.points) {
      const Eigen::Matrix4d expected = propagate(sigma, k_warm, p.t).matrix();
      CHECK((p.state.matrix() - expected).cwiseAbs().maxCoeff() < 1e-11);
    }
  }
  SUBCASE("trajectory bookkeeping") {
    ControlStrategy strategy{ControlLaw::negativity, ControlScope::both_modes,
                             ControlSchedule::at_times({0.0, 2.0})};
    const BathParams quiet = BathParams::symmetric(bath_from_ratio(0.1, 1.000013));
    const Trajectory traj =
        simulate(from_normal_form(4.5, 3.5, 2.2, -3.5), quiet, strategy, 5.0, 0.5);
    CHECK(traj.controls.size() == 2);
    CHECK(traj.points[0].control_applied);
    CHECK(traj.points[4].control_applied);
    CHECK_FALSE(traj.points[1].control_applied);
    for (std::size_t i = 1; i < traj.points.size(); ++i)
      CHECK(traj.points[i].t > traj.points[i - 1].t);
  }
  SUBCASE("invalid schedules rejected") {
    const CovarianceMatrix sigma = two_mode_squeezed(k_r);
    ControlStrategy bad{ControlLaw::negativity, ControlScope::both_modes,
                        ControlSchedule::at_times({2.0, 1.0})};
    CHECK_THROWS_AS(simulate(sigma, k_warm, bad, 5.0, 0.5), std::invalid_argument);
    bad.schedule = ControlSchedule::at_times({1.0, 99.0});
    CHECK_THROWS_AS(simulate(sigma, k_warm, bad, 5.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(simulate(sigma, k_warm, ControlStrategy::none(), 5.0, -0.1),
                    std::invalid_argument);
  }
  SUBCASE("one initial control equals stepwise control under symmetric dynamics") {
    std::mt19937_64 rng(18);
    for (int i = 0; i < 5; ++i) {
      const CovarianceMatrix sigma = random_entangled_state(rng);
      RandomBathOptions opts;
      opts.symmetric = true;
      const BathParams baths = random_baths(rng, opts);
      ControlStrategy initial{ControlLaw::negativity, ControlScope::both_modes,
                              ControlSchedule::initial_only()};
      ControlStrategy stepwise{ControlLaw::negativity, ControlScope::both_modes,
                               ControlSchedule::every_step()};
      const double horizon = 3.0 / baths.mode1.gamma;
      const double dt = horizon / 300.0;
      const Trajectory a = simulate(sigma, baths, initial, horizon, dt);
      const Trajectory b = simulate(sigma, baths, stepwise, horizon, dt);
      for (std::size_t k = 0; k < a.points.size(); ++k)
        CHECK(std::abs(a.points[k].log_neg - b.points[k].log_neg) < 1e-9);
    }
  }
  SUBCASE("optimality holds along a symmetric-correlation trajectory") {
    ControlStrategy initial{ControlLaw::negativity, ControlScope::both_modes,
                            ControlSchedule::initial_only()};
    const Trajectory traj = simulate(two_mode_squeezed(k_r), k_warm, initial, 4.0, 0.05);
    for (const auto& p : traj.points) {
      if (p.nu_minus >= 1.0) break;
      const OptimalSqueezings z = optimal_squeezings(squeeze_coefficients(normal_form(p.state)));
      CHECK(std::abs(z.z1 - 1.0) < 1e-8);
      CHECK(std::abs(z.z2 - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("death times") {
  SUBCASE("squeezed vacuum against the analytic root") {
    const auto t = death_time(two_mode_squeezed(k_r), k_warm, ControlStrategy::none(), 20.0, 0.05);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(std::log(3.0 - std::sqrt(2.0)) / 0.1).epsilon(1e-4));
  }
  SUBCASE("never within horizon reported distinctly") {
    CHECK_FALSE(death_time(two_mode_squeezed(k_r), k_warm, ControlStrategy::none(), 1.0, 0.05)
                    .has_value());
  }
  SUBCASE("mis-squeezed preparations die earlier") {
    const double baseline = std::log(3.0 - std::sqrt(2.0)) / 0.1;  // 4.6108 us
    const CovarianceMatrix one_mode = apply_symplectic(
        two_mode_squeezed(k_r), SymplecticTransform::on_mode(1, squeeze_matrix(2.0)));
    const CovarianceMatrix both_modes = apply_symplectic(
        one_mode, SymplecticTransform::on_mode(2, squeeze_matrix(2.0)));
    const auto t_one = death_time(one_mode, k_warm, ControlStrategy::none(), 20.0, 0.05);
    const auto t_both = death_time(both_modes, k_warm, ControlStrategy::none(), 20.0, 0.05);
    REQUIRE(t_one.has_value());
    REQUIRE(t_both.has_value());
    CHECK(*t_one == doctest::Approx(3.482).epsilon(2e-3));
    CHECK(*t_both == doctest::Approx(2.851).epsilon(2e-3));
    CHECK(baseline - *t_one > 1.0);
    CHECK(baseline - *t_both > 1.5);
  }
}
