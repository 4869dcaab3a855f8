#include "negctrl/control.hpp"

#include <algorithm>
#include <cmath>

namespace negctrl {

namespace {

double u_of(double a, double b, double c_plus, double c_minus) {
  const double d2 = a * a - b * b;
  const double arg = d2 * d2 + 4.0 * a * b * (c_plus * c_plus + c_minus * c_minus) -
                     4.0 * c_plus * c_minus * (a * a + b * b);
  return std::sqrt(std::max(arg, 0.0));
}

bool effectively_separable(const CovarianceMatrix& sigma) {
  const InvariantSet inv = invariants(sigma);
  const double scale = std::max(std::abs(inv.delta_tilde), 1.0);
  if (inv.u <= tol::degenerate_u * scale) return true;  // control law undefined at u = 0
  return pt_min_eigenvalue(sigma) >= 1.0;
}

}  // namespace

SqueezeCoefficients squeeze_coefficients(double a, double b, double c_plus, double c_minus) {
  const double u = u_of(a, b, c_plus, c_minus);
  SqueezeCoefficients c{};
  c.law = ControlLaw::negativity;
  c.v1 = a * (b * b - a * a + u) + 2.0 * c_plus * (a * c_minus - b * c_plus);
  c.w1 = a * (b * b - a * a + u) + 2.0 * c_minus * (a * c_plus - b * c_minus);
  c.v2 = b * (a * a - b * b + u) + 2.0 * c_plus * (b * c_minus - a * c_plus);
  c.w2 = b * (a * a - b * b + u) + 2.0 * c_minus * (b * c_plus - a * c_minus);
  if (!c.all_positive())
    throw std::runtime_error("squeeze_coefficients: non-positive coefficient for an entangled state");
  return c;
}

SqueezeCoefficients squeeze_coefficients(const NormalForm& nf) {
  return squeeze_coefficients(nf.a, nf.b, nf.c_plus, nf.c_minus);
}

SqueezeCoefficients sigma_squeeze_coefficients(double a, double b, double c_plus, double c_minus) {
  SqueezeCoefficients c{};
  c.law = ControlLaw::sigma_tilde;
  c.v1 = b * (a * b - c_plus * c_plus) - a;
  c.w1 = b * (a * b - c_minus * c_minus) - a;
  c.v2 = a * (a * b - c_plus * c_plus) - b;
  c.w2 = a * (a * b - c_minus * c_minus) - b;
  return c;
}

SqueezeCoefficients sigma_squeeze_coefficients(const NormalForm& nf) {
  return sigma_squeeze_coefficients(nf.a, nf.b, nf.c_plus, nf.c_minus);
}

OptimalSqueezings optimal_squeezings(const SqueezeCoefficients& coeffs) {
  OptimalSqueezings out;
  const auto solve_one = [&out](double v, double w) {
    if (v > 0 && w > 0) {
      const double z = std::pow(w / v, 0.25);
      if (z > tol::max_control_squeeze || z < 1.0 / tol::max_control_squeeze) {
        out.clamped = true;
        return std::clamp(z, 1.0 / tol::max_control_squeeze, tol::max_control_squeeze);
      }
      return z;
    }
    // v z^2 + w / z^2 has no interior minimum: the optimum runs away to the
    // squeeze clamp (towards large z when v <= 0, small z when w <= 0).
    out.clamped = true;
    return v <= 0 ? tol::max_control_squeeze : 1.0 / tol::max_control_squeeze;
  };
  out.z1 = solve_one(coeffs.v1, coeffs.w1);
  out.z2 = solve_one(coeffs.v2, coeffs.w2);
  return out;
}

SymplecticTransform optimal_control_both(const CovarianceMatrix& sigma) {
  if (effectively_separable(sigma)) return SymplecticTransform::identity();
  const NormalForm nf = normal_form(sigma);
  const OptimalSqueezings z = optimal_squeezings(squeeze_coefficients(nf));
  return SymplecticTransform::local(squeeze_matrix(z.z1), squeeze_matrix(z.z2)) * nf.reducer;
}

SymplecticTransform optimal_control_single(const CovarianceMatrix& sigma, int mode) {
  if (mode != 1 && mode != 2) throw std::invalid_argument("optimal_control_single: mode must be 1 or 2");
  if (effectively_separable(sigma)) return SymplecticTransform::identity();
  const NormalForm nf = normal_form(sigma);
  const OptimalSqueezings z = optimal_squeezings(squeeze_coefficients(nf));
  if (mode == 1)
    return SymplecticTransform::on_mode(1, squeeze_matrix(z.z1) * nf.reducer.mode1_block());
  return SymplecticTransform::on_mode(2, squeeze_matrix(z.z2) * nf.reducer.mode2_block());
}

SymplecticTransform control_for(const CovarianceMatrix& sigma, ControlLaw law, ControlScope scope,
                                bool* clamped) {
  if (clamped) *clamped = false;
  if (law == ControlLaw::none) return SymplecticTransform::identity();
  if (effectively_separable(sigma)) return SymplecticTransform::identity();

  const NormalForm nf = normal_form(sigma);
  const SqueezeCoefficients coeffs =
      law == ControlLaw::negativity ? squeeze_coefficients(nf) : sigma_squeeze_coefficients(nf);
  const OptimalSqueezings z = optimal_squeezings(coeffs);
  if (clamped) *clamped = z.clamped;

  switch (scope) {
    case ControlScope::both_modes:
      return SymplecticTransform::local(squeeze_matrix(z.z1), squeeze_matrix(z.z2)) * nf.reducer;
    case ControlScope::mode_1:
      return SymplecticTransform::on_mode(1, squeeze_matrix(z.z1) * nf.reducer.mode1_block());
    case ControlScope::mode_2:
      return SymplecticTransform::on_mode(2, squeeze_matrix(z.z2) * nf.reducer.mode2_block());
  }
  throw std::logic_error("control_for: unreachable");
}

const TrajectoryPoint& Trajectory::at_or_after(double t) const {
  for (const auto& p : points)
    if (p.t >= t - 1e-12) return p;
  return points.back();
}

namespace {

TrajectoryPoint make_point(double t, const CovarianceMatrix& state, bool control_applied) {
  TrajectoryPoint p;
  p.t = t;
  p.state = state;
  const InvariantSet inv = invariants(state);
  p.nu_minus = pt_min_eigenvalue(state);
  p.log_neg = p.nu_minus >= 1.0 ? 0.0 : -std::log2(p.nu_minus);
  p.sigma_tilde = inv.sigma_tilde;
  p.det_sigma = inv.det_sigma;
  p.delta_tilde = inv.delta_tilde;
  p.control_applied = control_applied;
  return p;
}

}  // namespace

Trajectory simulate(const CovarianceMatrix& sigma0, const BathParams& baths,
                    const ControlStrategy& strategy, double horizon, double dt) {
  if (!(dt > 0) || !(horizon > 0)) throw std::invalid_argument("simulate: horizon and dt must be positive");
  if (!is_physical(sigma0)) throw std::invalid_argument("simulate: initial state is not physical");
  if (strategy.schedule.kind == ControlSchedule::Kind::at_times) {
    double prev = -1.0;
    for (double t : strategy.schedule.times) {
      if (!(t >= 0) || t > horizon * (1 + 1e-12) || t <= prev)
        throw std::invalid_argument("simulate: schedule times must be strictly increasing within the horizon");
      prev = t;
    }
  }

  const long n_steps = std::max<long>(1, std::lround(std::ceil(horizon / dt - 1e-9)));
  Trajectory traj;
  traj.points.reserve(static_cast<std::size_t>(n_steps) + 1);

  CovarianceMatrix state = sigma0;
  std::size_t next_scheduled = 0;
  for (long k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    bool fire = false;
    switch (strategy.schedule.kind) {
      case ControlSchedule::Kind::initial_only:
        fire = (k == 0);
        break;
      case ControlSchedule::Kind::every_step:
        fire = true;
        break;
      case ControlSchedule::Kind::at_times:
        if (next_scheduled < strategy.schedule.times.size() &&
            strategy.schedule.times[next_scheduled] <= t + 0.5 * dt) {
          fire = true;
          ++next_scheduled;
        }
        break;
    }
    if (fire && strategy.law != ControlLaw::none) {
      bool clamped = false;
      const SymplecticTransform s = control_for(state, strategy.law, strategy.scope, &clamped);
      if (clamped) ++traj.clamp_warnings;
      if (!s.is_identity()) {
        state = apply_symplectic(state, s);
        traj.controls.emplace_back(t, s);
      }
    }
    traj.points.push_back(make_point(t, state, fire && strategy.law != ControlLaw::none));
    if (k < n_steps) state = propagate(state, baths, dt);
  }
  return traj;
}

std::optional<double> death_time(const CovarianceMatrix& sigma0, const BathParams& baths,
                                 const ControlStrategy& strategy, double horizon, double dt) {
  const Trajectory traj = simulate(sigma0, baths, strategy, horizon, dt);
  if (traj.points.front().nu_minus >= 1.0) return 0.0;

  for (std::size_t k = 1; k < traj.points.size(); ++k) {
    if (traj.points[k].nu_minus < 1.0) continue;
    // Separability is reached inside (t_{k-1}, t_k]; controls only fire at
    // grid points, so the flow over the bracket is exactly free propagation
    // from the recorded post-control state.
    const CovarianceMatrix& base = traj.points[k - 1].state;
    double lo = 0.0, hi = traj.points[k].t - traj.points[k - 1].t;
    while (hi - lo > 1e-4) {
      const double mid = 0.5 * (lo + hi);
      if (pt_min_eigenvalue(propagate(base, baths, mid)) >= 1.0)
        hi = mid;
      else
        lo = mid;
    }
    return traj.points[k - 1].t + 0.5 * (lo + hi);
  }
  return std::nullopt;
}

}  // namespace negctrl
