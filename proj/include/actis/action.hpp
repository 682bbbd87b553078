#pragma once

#include <cmath>
#include <vector>

#include "actis/error.hpp"
#include "actis/integrate.hpp"
#include "actis/potential.hpp"

namespace actis {

/// Classical trajectory between fixed endpoints, sampled on a uniform time
/// grid. Produced by the boundary-value solver; may also be built directly
/// for testing.
template <int D>
struct Trajectory {
  double travel_time = 0.0;
  Point<D> q_in{};
  Point<D> q_fi{};
  std::vector<double> times;
  std::vector<Point<D>> positions;
  std::vector<Point<D>> velocities;
  double residual = 0.0;              // endpoint mismatch, length units
  int iterations = 0;                 // shooting iterations spent
  double shooting_sensitivity = 0.0;  // T / sigma_min(dq_T/dv_0)
  bool caustic_warning = false;
};

struct ActionValue {
  double value = 0.0;
  double quadrature_error = 0.0;  // estimated, same units
};

namespace detail {

/// Composite Simpson over uniformly spaced samples; falls back to a 3/8 block
/// at the tail when the interval count is odd. n >= 3 samples.
inline double simpson_uniform(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  const std::size_t intervals = n - 1;
  double s = 0.0;
  std::size_t last = intervals;  // index bound of the straight-Simpson block
  if (intervals % 2 != 0) {
    if (intervals < 3) {  // single interval: trapezoid is all we can do
      return 0.5 * h * (f[0] + f[1]);
    }
    last = intervals - 3;
    s += 3.0 * h / 8.0 *
         (f[last] + 3.0 * f[last + 1] + 3.0 * f[last + 2] + f[last + 3]);
  }
  if (last >= 2) {
    double acc = f[0] + f[last];
    for (std::size_t i = 1; i < last; i += 2) acc += 4.0 * f[i];
    for (std::size_t i = 2; i < last; i += 2) acc += 2.0 * f[i];
    s += h / 3.0 * acc;
  }
  return s;
}

}  // namespace detail

/// Action S = int_0^T [ (m/2) qdot^2 - V(q) ] dt along the sampled trajectory,
/// by composite Simpson on the stored samples. The error estimate compares
/// against the half-resolution quadrature.
template <int D>
ActionValue evaluate_action(const SystemParams& sys, const PolynomialPotential<D>& pot,
                            const Trajectory<D>& traj) {
  validate_system<D>(sys);
  const std::size_t n = traj.times.size();
  if (n < 3 || traj.positions.size() != n || traj.velocities.size() != n)
    throw Error(ErrorCode::invalid_trajectory, "trajectory needs >= 3 aligned samples");

  std::vector<double> lagrangian(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v2 = 0.0;
    for (int d = 0; d < D; ++d) {
      v2 += traj.velocities[i][d] * traj.velocities[i][d];
      if (!std::isfinite(traj.positions[i][d]) || !std::isfinite(traj.velocities[i][d]))
        throw Error(ErrorCode::invalid_trajectory, "non-finite trajectory sample");
    }
    lagrangian[i] = 0.5 * sys.mass * v2 - pot.value(traj.positions[i]);
  }
  const double h = traj.times[1] - traj.times[0];
  const double fine = detail::simpson_uniform(lagrangian, h);

  double err = 0.0;
  if (n >= 5 && (n - 1) % 2 == 0) {
    std::vector<double> coarse;
    coarse.reserve(n / 2 + 1);
    for (std::size_t i = 0; i < n; i += 2) coarse.push_back(lagrangian[i]);
    const double rough = detail::simpson_uniform(coarse, 2.0 * h);
    err = std::abs(fine - rough) / 15.0;  // Richardson error model, order 4
  }
  return {fine, err};
}

/// Closed-form harmonic-oscillator action between endpoints x_a, x_b in time
/// T: (m w / 2 sin wT) [ (x_a^2 + x_b^2) cos wT - 2 x_a . x_b ].
/// Valid in any dimension through the dot product. Near sin(wT) = 0 the
/// family of trajectories is singular (caustic) and the formula diverges.
template <int D>
double harmonic_action_analytic(const SystemParams& sys, double omega,
                                const Point<D>& x_a, const Point<D>& x_b, double T,
                                double eps_sing = 1e-8) {
  validate_system<D>(sys);
  if (!(omega > 0.0)) throw Error(ErrorCode::config, "omega must be positive");
  if (!(T > 0.0)) throw Error(ErrorCode::config, "travel time must be positive");
  const double s = std::sin(omega * T);
  if (std::abs(s) <= eps_sing)
    throw Error(ErrorCode::caustic_singularity,
                "omega*T within eps of a multiple of pi (sin(wT) ~ 0)");
  const double c = std::cos(omega * T);
  double a2 = 0.0, b2 = 0.0, ab = 0.0;
  for (int i = 0; i < D; ++i) {
    a2 += x_a[i] * x_a[i];
    b2 += x_b[i] * x_b[i];
    ab += x_a[i] * x_b[i];
  }
  return sys.mass * omega / (2.0 * s) * ((a2 + b2) * c - 2.0 * ab);
}

}  // namespace actis
