#pragma once

#include <cmath>
#include <vector>

#include "actis/error.hpp"
#include "actis/potential.hpp"

namespace actis {

template <int D>
struct PhaseState {
  Point<D> q{};
  Point<D> p{};
};

template <int D>
inline bool finite(const PhaseState<D>& s) {
  for (int i = 0; i < D; ++i)
    if (!std::isfinite(s.q[i]) || !std::isfinite(s.p[i])) return false;
  return true;
}

template <int D>
struct PhasePath {
  std::vector<double> times;
  std::vector<PhaseState<D>> states;
};

enum class Scheme { verlet2, yoshida4 };

template <int D>
inline double kinetic_energy(const SystemParams& sys, const PhaseState<D>& s) {
  double p2 = 0.0;
  for (int i = 0; i < D; ++i) p2 += s.p[i] * s.p[i];
  return 0.5 * p2 / sys.mass;
}

template <int D>
inline double total_energy(const SystemParams& sys, const PolynomialPotential<D>& pot,
                           const PhaseState<D>& s) {
  return kinetic_energy(sys, s) + pot.value(s.q);
}

/// Fixed-step symplectic stepper for H = p^2/2m + V(q), with optional
/// simultaneous tangent-space propagation (variational equations).
template <int D>
class SymplecticStepper {
 public:
  SymplecticStepper(const PolynomialPotential<D>& pot, double mass,
                    Scheme scheme = Scheme::yoshida4)
      : pot_(&pot), inv_mass_(1.0 / mass) {
    if (scheme == Scheme::verlet2) {
      n_stages_ = 1;
      drift_[0] = 0.5;
      kick_[0] = 1.0;
      drift_[1] = 0.5;
      kick_[1] = 0.0;
    } else {
      // Yoshida triple-jump composition of leapfrog, order 4.
      const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
      const double w0 = 1.0 - 2.0 * w1;
      n_stages_ = 3;
      drift_[0] = 0.5 * w1;
      kick_[0] = w1;
      drift_[1] = 0.5 * (w0 + w1);
      kick_[1] = w0;
      drift_[2] = 0.5 * (w0 + w1);
      kick_[2] = w1;
      drift_[3] = 0.5 * w1;
      kick_[3] = 0.0;
    }
  }

  void step(PhaseState<D>& s, double dt) const {
    for (int k = 0; k <= n_stages_; ++k) {
      const double cd = drift_[k] * dt;
      for (int i = 0; i < D; ++i) s.q[i] += cd * s.p[i] * inv_mass_;
      if (kick_[k] != 0.0) {
        const Point<D> g = pot_->gradient(s.q);
        const double ck = kick_[k] * dt;
        for (int i = 0; i < D; ++i) s.p[i] -= ck * g[i];
      }
    }
  }

  void step_with_tangent(PhaseState<D>& s, PhaseState<D>& tan, double dt) const {
    for (int k = 0; k <= n_stages_; ++k) {
      const double cd = drift_[k] * dt;
      for (int i = 0; i < D; ++i) {
        s.q[i] += cd * s.p[i] * inv_mass_;
        tan.q[i] += cd * tan.p[i] * inv_mass_;
      }
      if (kick_[k] != 0.0) {
        const Point<D> g = pot_->gradient(s.q);
        const Point<D> hd = pot_->hessian_apply(s.q, tan.q);
        const double ck = kick_[k] * dt;
        for (int i = 0; i < D; ++i) {
          s.p[i] -= ck * g[i];
          tan.p[i] -= ck * hd[i];
        }
      }
    }
  }

 private:
  const PolynomialPotential<D>* pot_;
  double inv_mass_;
  int n_stages_;
  double drift_[4]{};
  double kick_[4]{};
};

/// Propagates an initial phase point for t_end with fixed step dt and returns
/// the sampled path (every `sample_stride` steps, endpoints always included).
/// Throws blow-up if a non-finite state appears, reporting the last valid time.
template <int D>
PhasePath<D> integrate_hamiltonian(const SystemParams& sys,
                                   const PolynomialPotential<D>& pot,
                                   const PhaseState<D>& initial, double t_end,
                                   double dt, Scheme scheme = Scheme::yoshida4,
                                   int sample_stride = 1) {
  validate_system<D>(sys);
  if (!(dt > 0.0)) throw Error(ErrorCode::config, "dt must be positive");
  if (!(t_end > 0.0)) throw Error(ErrorCode::config, "t_end must be positive");
  if (!finite(initial)) throw Error(ErrorCode::config, "non-finite initial state");
  if (sample_stride < 1) sample_stride = 1;

  const auto n_steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));
  const double h = t_end / static_cast<double>(n_steps);
  SymplecticStepper<D> stepper(pot, sys.mass, scheme);

  PhasePath<D> path;
  path.times.reserve(static_cast<std::size_t>(n_steps / sample_stride) + 2);
  path.states.reserve(path.times.capacity());
  PhaseState<D> s = initial;
  path.times.push_back(0.0);
  path.states.push_back(s);
  for (long n = 1; n <= n_steps; ++n) {
    stepper.step(s, h);
    if (!finite(s)) {
      std::ostringstream os;
      os << "integration blew up; last valid time " << (n - 1) * h;
      throw Error(ErrorCode::blow_up, os.str());
    }
    if (n % sample_stride == 0 || n == n_steps) {
      path.times.push_back(n * h);
      path.states.push_back(s);
    }
  }
  return path;
}

}  // namespace actis
