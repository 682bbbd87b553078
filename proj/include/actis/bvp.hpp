#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "actis/action.hpp"
#include "actis/integrate.hpp"
#include "actis/potential.hpp"

namespace actis {

struct BvpOptions {
  double tolerance = 1e-10;        // endpoint mismatch, max-norm
  int max_newton_iterations = 60;  // per homotopy stage
  int steps_per_unit_time = 512;
  int min_steps = 256;
  Scheme scheme = Scheme::yoshida4;
  int max_homotopy_stages = 64;    // continuation budget (stage attempts)
  int restarts = 11;               // extra velocity-guess restarts
  double caustic_sensitivity = 1e3;
  double fd_epsilon = 1e-7;        // Jacobian finite-difference scale
};

namespace detail {

template <int D>
PhaseState<D> propagate_endpoint(const SymplecticStepper<D>& stepper,
                                 const Point<D>& q_in, const Point<D>& v0,
                                 double mass, double h, long n_steps) {
  PhaseState<D> s;
  s.q = q_in;
  for (int i = 0; i < D; ++i) s.p[i] = mass * v0[i];
  for (long n = 0; n < n_steps; ++n) stepper.step(s, h);
  return s;
}

template <int D>
struct ShootState {
  Point<D> velocity{};
  double misfit = std::numeric_limits<double>::infinity();
  double jac[D][D] = {};
  bool jac_valid = false;
  int iterations = 0;
};

template <int D>
double max_abs_diff(const Point<D>& a, const Point<D>& b) {
  double m = 0.0;
  for (int i = 0; i < D; ++i) {
    const double d = std::abs(a[i] - b[i]);
    if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
    if (d > m) m = d;
  }
  return m;
}

/// Damped Newton on the shooting map v0 -> q(T). Returns true on convergence;
/// `st` always carries the best iterate seen.
template <int D>
bool newton_shoot(const PolynomialPotential<D>& pot, double mass, const Point<D>& q_in,
                  const Point<D>& q_fi, double h, long n_steps, const BvpOptions& opt,
                  ShootState<D>& st) {
  SymplecticStepper<D> stepper(pot, mass, opt.scheme);
  Point<D> v = st.velocity;
  PhaseState<D> end = propagate_endpoint<D>(stepper, q_in, v, mass, h, n_steps);
  double misfit = max_abs_diff<D>(end.q, q_fi);
  st.misfit = misfit;
  st.velocity = v;

  for (int it = 0; it < opt.max_newton_iterations; ++it) {
    if (misfit < opt.tolerance) return true;
    if (!std::isfinite(misfit)) return false;
    ++st.iterations;

    // Finite-difference Jacobian d q(T) / d v0, one propagation per column.
    double J[D][D];
    for (int c = 0; c < D; ++c) {
      const double eps = opt.fd_epsilon * std::max(1.0, std::abs(v[c]));
      Point<D> vp = v;
      vp[c] += eps;
      const PhaseState<D> pert = propagate_endpoint<D>(stepper, q_in, vp, mass, h, n_steps);
      for (int r = 0; r < D; ++r) J[r][c] = (pert.q[r] - end.q[r]) / eps;
    }

    // Solve J dv = q_fi - q(T).
    Point<D> rhs;
    for (int r = 0; r < D; ++r) rhs[r] = q_fi[r] - end.q[r];
    Point<D> dv{};
    if constexpr (D == 1) {
      if (J[0][0] == 0.0 || !std::isfinite(J[0][0])) return false;
      dv[0] = rhs[0] / J[0][0];
    } else {
      const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
      if (det == 0.0 || !std::isfinite(det)) return false;
      dv[0] = (rhs[0] * J[1][1] - rhs[1] * J[0][1]) / det;
      dv[1] = (J[0][0] * rhs[1] - J[1][0] * rhs[0]) / det;
    }
    for (int r = 0; r < D; ++r)
      for (int c = 0; c < D; ++c) st.jac[r][c] = J[r][c];
    st.jac_valid = true;

    // Backtracking: accept the first step that reduces the misfit.
    bool improved = false;
    double scale = 1.0;
    for (int half = 0; half < 10; ++half, scale *= 0.5) {
      Point<D> vt;
      for (int i = 0; i < D; ++i) vt[i] = v[i] + scale * dv[i];
      const PhaseState<D> trial = propagate_endpoint<D>(stepper, q_in, vt, mass, h, n_steps);
      const double m_trial = max_abs_diff<D>(trial.q, q_fi);
      if (m_trial < misfit) {
        v = vt;
        end = trial;
        misfit = m_trial;
        st.velocity = v;
        st.misfit = misfit;
        improved = true;
        break;
      }
    }
    if (!improved) return misfit < opt.tolerance;
  }
  return st.misfit < opt.tolerance;
}

/// Smallest singular value of the stored 2x2 (or 1x1) shooting Jacobian.
template <int D>
double sigma_min(const double J[D][D]) {
  if constexpr (D == 1) {
    return std::abs(J[0][0]);
  } else {
    const double a = J[0][0], b = J[0][1], c = J[1][0], d = J[1][1];
    const double t = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double disc = std::max(0.0, t * t - 4.0 * det * det);
    const double s2 = 0.5 * (t - std::sqrt(disc));
    return std::sqrt(std::max(0.0, s2));
  }
}

}  // namespace detail

/// Two-point boundary-value solve: find the classical trajectory from q_in to
/// q_fi in time T by shooting on the initial velocity. The initial guess is
/// the free-particle velocity; if direct shooting fails, the potential is
/// switched on gradually (homotopy continuation), warm-starting each stage.
/// A caustic warning is attached when the shooting sensitivity T/sigma_min
/// exceeds the configured threshold (near-conjugate endpoints).
template <int D>
Trajectory<D> solve_trajectory_bvp(const SystemParams& sys,
                                   const PolynomialPotential<D>& pot,
                                   const Point<D>& q_in, const Point<D>& q_fi, double T,
                                   const BvpOptions& opt = {}) {
  validate_system<D>(sys);
  if (!(T > 0.0)) throw Error(ErrorCode::config, "travel time must be positive");
  // The identically-zero potential is allowed (free particle); anything else
  // must be confining or the shooting map may have no root.
  if (!pot.terms().empty() && !pot.confining())
    throw Error(ErrorCode::config, "potential must be confining for the BVP solve");
  for (int i = 0; i < D; ++i)
    if (!std::isfinite(q_in[i]) || !std::isfinite(q_fi[i]))
      throw Error(ErrorCode::config, "non-finite endpoint");

  long n_steps = std::max<long>(opt.min_steps,
                                std::lround(opt.steps_per_unit_time * T));
  if (n_steps % 2 != 0) ++n_steps;
  const double h = T / static_cast<double>(n_steps);

  Point<D> free_guess;
  for (int i = 0; i < D; ++i) free_guess[i] = (q_fi[i] - q_in[i]) / T;

  detail::ShootState<D> best;
  best.velocity = free_guess;
  int total_iterations = 0;
  bool solved = false;
  detail::ShootState<D> st;

  // Deterministic restart ladder of velocity-guess scalings.
  const double restart_scale[] = {1.0, 0.5, 1.5, 2.0, 0.25, 3.0};
  const int n_restarts = std::min<int>(1 + std::max(0, opt.restarts),
                                       static_cast<int>(std::size(restart_scale)));

  for (int attempt = 0; attempt < n_restarts && !solved; ++attempt) {
    st = detail::ShootState<D>();
    for (int i = 0; i < D; ++i) st.velocity[i] = free_guess[i] * restart_scale[attempt];

    // Direct shot at full strength.
    if (detail::newton_shoot<D>(pot, sys.mass, q_in, q_fi, h, n_steps, opt, st)) {
      solved = true;
    } else {
      // Homotopy: continue the solution in the potential strength s: 0 -> 1.
      double s_cur = 0.0, step = 0.5;
      int budget = opt.max_homotopy_stages;
      detail::ShootState<D> hs;
      for (int i = 0; i < D; ++i) hs.velocity[i] = free_guess[i] * restart_scale[attempt];
      while (s_cur < 1.0 && budget > 0) {
        const double s_next = std::min(1.0, s_cur + step);
        detail::ShootState<D> trial = hs;
        trial.iterations = 0;
        const PolynomialPotential<D> scaled = pot.scaled(s_next);
        --budget;
        if (detail::newton_shoot<D>(scaled, sys.mass, q_in, q_fi, h, n_steps, opt, trial)) {
          s_cur = s_next;
          hs = trial;
          step = std::min(step * 1.7, 1.0 - s_cur + 1e-16);
        } else {
          step *= 0.5;
          if (step < 1e-4) break;
        }
        total_iterations += trial.iterations;
      }
      if (s_cur >= 1.0) {
        st = hs;
        st.iterations = 0;  // homotopy stages were already counted
        solved = true;
      }
    }
    total_iterations += st.iterations;
    if (st.misfit < best.misfit) best = st;
  }

  // Last-resort tier for 1-D: when the homotopy path folds, the solution sits
  // on a higher-|v| branch of the oscillatory shooting map. Scan an expanding
  // velocity window for sign changes and, among the brackets, take the root
  // closest to the free-particle guess (deterministic branch selection).
  if constexpr (D == 1) {
    if (!solved) {
      SymplecticStepper<1> full(pot, sys.mass, opt.scheme);
      const double v_free = free_guess[0];
      const double base = std::max(1.0, std::abs(v_free));
      auto misfit_at = [&](double v) {
        const PhaseState<1> end =
            detail::propagate_endpoint<1>(full, q_in, {v}, sys.mass, h, n_steps);
        return end.q[0] - q_fi[0];
      };
      for (int expand = 1; expand <= 7 && !solved; ++expand) {
        const double window = base * static_cast<double>(1 << expand);
        const int n_scan = 512;
        double best_root = 0.0, best_dist = std::numeric_limits<double>::infinity();
        double f_prev = misfit_at(-window);
        double v_prev = -window;
        for (int i = 1; i <= n_scan; ++i) {
          const double v = -window + 2.0 * window * i / n_scan;
          const double f = misfit_at(v);
          if (std::isfinite(f_prev) && std::isfinite(f) &&
              ((f_prev < 0.0) != (f < 0.0))) {
            double lo = v_prev, hi = v, flo = f_prev;
            for (int bis = 0; bis < 80; ++bis) {
              const double mid = 0.5 * (lo + hi);
              const double fm = misfit_at(mid);
              if (!std::isfinite(fm)) break;
              if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
              } else {
                hi = mid;
              }
              if (hi - lo < 1e-15 * std::max(1.0, std::abs(mid))) break;
            }
            const double root = 0.5 * (lo + hi);
            const double dist = std::abs(root - v_free);
            if (dist < best_dist) {
              best_dist = dist;
              best_root = root;
            }
          }
          f_prev = f;
          v_prev = v;
        }
        if (std::isfinite(best_dist)) {
          st = detail::ShootState<1>();
          st.velocity = {best_root};
          if (detail::newton_shoot<1>(pot, sys.mass, q_in, q_fi, h, n_steps, opt, st)) {
            solved = true;
            total_iterations += st.iterations;
          } else if (st.misfit < best.misfit) {
            best = st;
          }
        }
      }
    }
  }

  if (!solved) {
    std::ostringstream os;
    os << "bvp shooting failed; best endpoint residual " << best.misfit;
    throw Error(ErrorCode::bvp_failure, os.str());
  }

  // Final pass with sample storage.
  SymplecticStepper<D> stepper(pot, sys.mass, opt.scheme);
  Trajectory<D> traj;
  traj.travel_time = T;
  traj.q_in = q_in;
  traj.q_fi = q_fi;
  traj.times.resize(n_steps + 1);
  traj.positions.resize(n_steps + 1);
  traj.velocities.resize(n_steps + 1);
  PhaseState<D> s;
  s.q = q_in;
  for (int i = 0; i < D; ++i) s.p[i] = sys.mass * st.velocity[i];
  for (long n = 0;; ++n) {
    traj.times[n] = n * h;
    traj.positions[n] = s.q;
    for (int i = 0; i < D; ++i) traj.velocities[n][i] = s.p[i] / sys.mass;
    if (n == n_steps) break;
    stepper.step(s, h);
  }
  traj.times.back() = T;
  traj.residual = detail::max_abs_diff<D>(s.q, q_fi);
  traj.iterations = total_iterations;
  if (st.jac_valid) {
    const double smin = detail::sigma_min<D>(st.jac);
    traj.shooting_sensitivity = smin > 0.0 ? T / smin
                                           : std::numeric_limits<double>::infinity();
    traj.caustic_warning = traj.shooting_sensitivity > opt.caustic_sensitivity;
  }
  return traj;
}

}  // namespace actis
