#include "negctrl/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace negctrl {

namespace {

// Finite-difference decay rate of the eigensolver-route negativity after
// applying Z(z_j) R(theta_j) per mode. This is the whole oracle objective:
// it never touches the invariant rate formulas or the coefficient chain.
// Second-order one-sided stencil; the first-order bias is large enough to
// drag the argmin by ~1e-2 on weakly curved instances.
double fd_decay_rate(const CovarianceMatrix& sigma, const BathParams& baths, double h,
                     double z1, double th1, double z2, double th2) {
  const SymplecticTransform s = SymplecticTransform::local(
      squeeze_matrix(z1) * rotation_matrix(th1), squeeze_matrix(z2) * rotation_matrix(th2));
  const CovarianceMatrix controlled = apply_symplectic(sigma, s);
  const auto nu = [&](const CovarianceMatrix& state) {
    return symplectic_eigenvalues(partial_transpose(state))[0];
  };
  const double f0 = nu(controlled);
  const double f1 = nu(propagate(controlled, baths, h));
  const double f2 = nu(propagate(controlled, baths, 2.0 * h));
  return (4.0 * f1 - f2 - 3.0 * f0) / (2.0 * h);
}

template <class F>
void fill_grid(std::vector<double>& out, bool parallel, F&& f) {
  const long n = static_cast<long>(out.size());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i);
  } else {
    // Serial reference path; must produce bit-identical values.
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i);
  }
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

// Z(z) R(theta + pi/2) equals a left rotation times Z(1/z) R(theta), and left
// rotations never change the objective. Fold the found optimum into the
// theta in (-pi/4, pi/4] sector so it is comparable with the analytic law.
void canonicalize(double& z, double& theta) {
  theta = std::fmod(theta, M_PI);
  if (theta < 0) theta += M_PI;
  if (theta > 0.25 * M_PI && theta <= 0.75 * M_PI) {
    z = 1.0 / z;
    theta -= 0.5 * M_PI;
  } else if (theta > 0.75 * M_PI) {
    theta -= M_PI;
  }
}

}  // namespace

OracleReport brute_force_control(const CovarianceMatrix& sigma, const BathParams& baths,
                                 const SearchSettings& settings) {
  const NormalForm nf = normal_form(sigma);
  const CovarianceMatrix base = apply_symplectic(sigma, nf.reducer);
  const double gamma_mean = 0.5 * (baths.mode1.gamma + baths.mode2.gamma);
  const double h = settings.fd_time_factor / gamma_mean;

  OracleReport report;
  {
    const OptimalSqueezings z = optimal_squeezings(squeeze_coefficients(nf));
    report.analytic_z1 = z.z1;
    report.analytic_z2 = z.z2;
  }

  double cur[2][2] = {{1.0, 0.0}, {1.0, 0.0}};  // (z, theta) per mode
  double lnz_halfwidth = settings.z_log_halfwidth;
  double th_halfwidth = 0.5 * M_PI;
  std::vector<double> values(static_cast<std::size_t>(settings.z_points) * settings.theta_points);
  bool theta_flat[2] = {false, false};

  for (int pass = 0; pass <= settings.refine_passes; ++pass) {
    for (int mode = 0; mode < 2; ++mode) {
      std::vector<double> lnz =
          linspace(std::log(cur[mode][0]) - lnz_halfwidth, std::log(cur[mode][0]) + lnz_halfwidth,
                   settings.z_points);
      std::vector<double> theta;
      if (pass == 0) {
        theta.resize(static_cast<std::size_t>(settings.theta_points));
        for (int i = 0; i < settings.theta_points; ++i)
          theta[static_cast<std::size_t>(i)] = M_PI * i / settings.theta_points;
      } else {
        theta = linspace(cur[mode][1] - th_halfwidth, cur[mode][1] + th_halfwidth, settings.theta_points);
      }

      const int nt = settings.theta_points;
      const int other = 1 - mode;
      fill_grid(values, settings.parallel, [&](long i) {
        const double z = std::exp(lnz[static_cast<std::size_t>(i / nt)]);
        const double th = theta[static_cast<std::size_t>(i % nt)];
        return mode == 0 ? fd_decay_rate(base, baths, h, z, th, cur[other][0], cur[other][1])
                         : fd_decay_rate(base, baths, h, cur[other][0], cur[other][1], z, th);
      });

      // Earliest grid index within noise of the minimum. Exactly flat
      // directions (rotations at z = 1) otherwise hand the argmin to
      // floating-point noise and strand the refinement in a wrong theta.
      double vmin = values[0];
      for (double v : values) vmin = std::min(vmin, v);
      const double tie = 1e-9 * std::max(1.0, std::abs(vmin));
      std::size_t best = 0;
      while (values[best] > vmin + tie) ++best;
      cur[mode][0] = std::exp(lnz[best / static_cast<std::size_t>(nt)]);
      cur[mode][1] = theta[best % static_cast<std::size_t>(nt)];
      canonicalize(cur[mode][0], cur[mode][1]);

      // Flat theta direction: the whole sweep at the best z is level.
      double lo = values[best], hi = values[best];
      const std::size_t row = (best / static_cast<std::size_t>(nt)) * static_cast<std::size_t>(nt);
      for (int i = 0; i < nt; ++i) {
        lo = std::min(lo, values[row + static_cast<std::size_t>(i)]);
        hi = std::max(hi, values[row + static_cast<std::size_t>(i)]);
      }
      theta_flat[mode] = (hi - lo) <= 1e-9 * std::max(1.0, std::abs(values[best]));
    }
    lnz_halfwidth = 2.0 * lnz_halfwidth / (settings.z_points - 1);
    th_halfwidth = 2.0 * th_halfwidth / (settings.theta_points - 1);
  }

  report.numeric_mode1 = {cur[0][0], cur[0][1], theta_flat[0]};
  report.numeric_mode2 = {cur[1][0], cur[1][1], theta_flat[1]};
  report.numeric_objective = fd_decay_rate(base, baths, h, cur[0][0], cur[0][1], cur[1][0], cur[1][1]);
  report.analytic_objective =
      fd_decay_rate(base, baths, h, report.analytic_z1, 0.0, report.analytic_z2, 0.0);
  report.objective_gap = report.analytic_objective - report.numeric_objective;

  // Rotating away from theta = 0 while holding z at the analytic optimum must
  // never lower the objective.
  report.rotation_flat_ok = true;
  const double at_zero = report.analytic_objective;
  const double flat_tol = 1e-8 * std::max(1.0, std::abs(at_zero));
  for (int i = 1; i < 16; ++i) {
    const double th = M_PI * i / 16;
    if (fd_decay_rate(base, baths, h, report.analytic_z1, th, report.analytic_z2, 0.0) < at_zero - flat_tol ||
        fd_decay_rate(base, baths, h, report.analytic_z1, 0.0, report.analytic_z2, th) < at_zero - flat_tol) {
      report.rotation_flat_ok = false;
      break;
    }
  }
  return report;
}

std::vector<NamedResidual> derivative_residuals(const CovarianceMatrix& sigma, const BathParams& baths) {
  const double gamma_mean = 0.5 * (baths.mode1.gamma + baths.mode2.gamma);
  const double h = 1e-6 / gamma_mean;
  // Centered stencil around t = h, entirely on the forward flow.
  const CovarianceMatrix at_h = propagate(sigma, baths, h);
  const CovarianceMatrix at_2h = propagate(sigma, baths, 2.0 * h);

  std::vector<NamedResidual> out;
  const auto rel = [](double analytic, double fd) {
    return std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1e-6});
  };

  {
    const Eigen::Matrix4d fd = (at_2h.matrix() - sigma.matrix()) / (2.0 * h);
    const Eigen::Matrix4d an = derivative(at_h, baths);
    const double scale = std::max(an.cwiseAbs().maxCoeff(), 1e-6);
    out.push_back({"matrix_derivative", (an - fd).cwiseAbs().maxCoeff() / scale});
  }
  {
    const double fd = (stable_determinant(at_2h) - stable_determinant(sigma)) / (2.0 * h);
    out.push_back({"det_sigma_rate", rel(det_sigma_rate(at_h, baths), fd)});
  }
  {
    const double fd = (invariants(at_2h).delta_tilde - invariants(sigma).delta_tilde) / (2.0 * h);
    out.push_back({"delta_tilde_rate", rel(delta_tilde_rate(at_h, baths), fd)});
  }
  const InvariantSet inv = invariants(at_h);
  if (inv.u > tol::degenerate_u * std::max(std::abs(inv.delta_tilde), 1.0) &&
      inv.sigma_tilde < 0.0) {
    // The chained PT-eigenvalue rate exists only away from the degenerate
    // spectrum, on entangled states.
    const auto two_nu_sq = [](const CovarianceMatrix& s) {
      const double nu = symplectic_eigenvalues(partial_transpose(s))[0];
      return 2.0 * nu * nu;
    };
    const double fd = (two_nu_sq(at_2h) - two_nu_sq(sigma)) / (2.0 * h);
    out.push_back({"nu_minus_rate", rel(nu_minus_rate(at_h, baths), fd)});
  }
  return out;
}

SuiteReport run_verification_suite(const SuiteSettings& settings) {
  // Draw every instance up front from one serial stream so the report is
  // identical whichever execution policy runs the checks.
  std::mt19937_64 rng(settings.seed);
  std::vector<CovarianceMatrix> states;
  std::vector<BathParams> baths;
  states.reserve(static_cast<std::size_t>(settings.states));
  baths.reserve(static_cast<std::size_t>(settings.states));
  for (int i = 0; i < settings.states; ++i) {
    states.push_back(random_entangled_state(rng));
    baths.push_back(random_baths(rng));
  }

  SuiteReport report;
  report.seed = settings.seed;
  report.states = settings.states;
  report.per_state.resize(static_cast<std::size_t>(settings.states));

  const long n = settings.states;
#pragma omp parallel for schedule(dynamic) if (settings.parallel)
  for (long i = 0; i < n; ++i) {
    const auto& sigma = states[static_cast<std::size_t>(i)];
    const auto& bath = baths[static_cast<std::size_t>(i)];
    StateCheck check;
    try {
      SearchSettings search = settings.search;
      search.parallel = false;  // parallelism lives at the state level here
      OracleReport oracle = brute_force_control(sigma, bath, search);
      const double z1 = oracle.analytic_z1 * settings.corrupt_z1;
      check.z1_gap = std::abs(oracle.numeric_mode1.z - z1);
      check.z2_gap = std::abs(oracle.numeric_mode2.z - oracle.analytic_z2);
      check.objective_gap = oracle.objective_gap;
      if (settings.corrupt_z1 != 1.0) {
        const NormalForm nf = normal_form(sigma);
        const CovarianceMatrix base = apply_symplectic(sigma, nf.reducer);
        const double h = settings.search.fd_time_factor / (0.5 * (bath.mode1.gamma + bath.mode2.gamma));
        check.objective_gap =
            fd_decay_rate(base, bath, h, z1, 0.0, oracle.analytic_z2, 0.0) - oracle.numeric_objective;
      }
      check.rotation_flat_ok = oracle.rotation_flat_ok;
      for (const auto& r : derivative_residuals(sigma, bath))
        check.max_residual = std::max(check.max_residual, r.relative);
    } catch (const std::exception&) {
      // A throwing law (non-positive coefficient) is itself a reportable
      // violation; nothing may escape the parallel region.
      check.coefficients_positive = false;
    }
    report.per_state[static_cast<std::size_t>(i)] = check;
  }

  for (const auto& check : report.per_state) {
    report.max_z_gap = std::max({report.max_z_gap, check.z1_gap, check.z2_gap});
    report.max_objective_gap = std::max(report.max_objective_gap, check.objective_gap);
    report.max_derivative_residual = std::max(report.max_derivative_residual, check.max_residual);
    if (!check.rotation_flat_ok) ++report.rotation_flat_violations;
    if (!check.coefficients_positive) ++report.coefficient_violations;
  }
  report.pass = report.max_z_gap < 1e-3 && report.max_objective_gap < 1e-6 &&
                report.max_derivative_residual < 1e-4 && report.rotation_flat_violations == 0 &&
                report.coefficient_violations == 0;
  return report;
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["states"] = states;
  j["max_z_gap"] = max_z_gap;
  j["max_objective_gap"] = max_objective_gap;
  j["max_derivative_residual"] = max_derivative_residual;
  j["rotation_flat_violations"] = rotation_flat_violations;
  j["coefficient_violations"] = coefficient_violations;
  j["pass"] = pass;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& check : per_state) {
    per.push_back({{"z1_gap", check.z1_gap},
                   {"z2_gap", check.z2_gap},
                   {"objective_gap", check.objective_gap},
                   {"max_residual", check.max_residual},
                   {"rotation_flat_ok", check.rotation_flat_ok},
                   {"coefficients_positive", check.coefficients_positive}});
  }
  j["per_state"] = per;
  return j;
}

}  // namespace negctrl
