#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "actis/error.hpp"

namespace actis {

template <int D>
using Point = std::array<double, D>;

/// Mechanical system constants. The spatial dimension lives in the template
/// parameter of the attached potential; `dimension` is kept for provenance
/// and is validated against it at entry points.
struct SystemParams {
  double mass = 1.0;
  double hbar = 1.0;
  int dimension = 1;
};

template <int D>
inline void validate_system(const SystemParams& sys) {
  if (!(sys.mass > 0.0)) throw Error(ErrorCode::config, "mass must be positive");
  if (!(sys.hbar > 0.0)) throw Error(ErrorCode::config, "hbar must be positive");
  if (sys.dimension != D)
    throw Error(ErrorCode::config, "system dimension does not match potential arity");
}

template <int D>
struct PolyTerm {
  std::array<int, D> exponents;
  double coefficient;
};

/// Even-monomial polynomial potential V(q) = sum_t c_t * prod_i q_i^{e_ti}.
/// Parity symmetry is enforced at construction: every exponent must be even
/// and nonnegative.
template <int D>
class PolynomialPotential {
  static_assert(D == 1 || D == 2, "supported dimensions are 1 and 2");

 public:
  PolynomialPotential() = default;

  explicit PolynomialPotential(std::vector<PolyTerm<D>> terms) {
    for (const auto& t : terms) {
      for (int e : t.exponents) {
        if (e < 0) throw Error(ErrorCode::config, "negative exponent in potential");
        if (e % 2 != 0)
          throw Error(ErrorCode::parity, "odd exponent breaks parity symmetry");
      }
      if (t.coefficient != 0.0) add_term(t);
    }
  }

  double value(const Point<D>& q) const {
    double v = 0.0;
    for (const auto& t : terms_) {
      double m = t.coefficient;
      for (int i = 0; i < D; ++i) m *= ipow(q[i], t.exponents[i]);
      v += m;
    }
    return v;
  }

  Point<D> gradient(const Point<D>& q) const {
    Point<D> g{};
    for (const auto& t : terms_) {
      for (int i = 0; i < D; ++i) {
        if (t.exponents[i] == 0) continue;
        double m = t.coefficient * t.exponents[i] * ipow(q[i], t.exponents[i] - 1);
        for (int j = 0; j < D; ++j)
          if (j != i) m *= ipow(q[j], t.exponents[j]);
        g[i] += m;
      }
    }
    return g;
  }

  /// Hessian-vector product H(q) * d, used by tangent-space propagation.
  Point<D> hessian_apply(const Point<D>& q, const Point<D>& d) const {
    Point<D> out{};
    for (const auto& t : terms_) {
      for (int i = 0; i < D; ++i) {
        for (int j = 0; j < D; ++j) {
          const int ei = t.exponents[i];
          const int ej = t.exponents[j];
          double m;
          if (i == j) {
            if (ei < 2) continue;
            m = t.coefficient * ei * (ei - 1) * ipow(q[i], ei - 2);
            for (int k = 0; k < D; ++k)
              if (k != i) m *= ipow(q[k], t.exponents[k]);
          } else {
            if (ei < 1 || ej < 1) continue;
            m = t.coefficient * ei * ej * ipow(q[i], ei - 1) * ipow(q[j], ej - 1);
            for (int k = 0; k < D; ++k)
              if (k != i && k != j) m *= ipow(q[k], t.exponents[k]);
          }
          out[i] += m * d[j];
        }
      }
    }
    return out;
  }

  double coefficient(const std::array<int, D>& exps) const {
    for (const auto& t : terms_)
      if (t.exponents == exps) return t.coefficient;
    return 0.0;
  }

  const std::vector<PolyTerm<D>>& terms() const { return terms_; }

  int max_degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, total_degree(t));
    return d;
  }

  /// Leading-degree coefficients nonnegative and some positive coefficient of
  /// degree >= 2 present.
  bool confining() const {
    const int dmax = max_degree();
    if (dmax < 2) return false;
    bool has_positive = false;
    for (const auto& t : terms_) {
      if (total_degree(t) == dmax && t.coefficient < 0.0) return false;
      if (total_degree(t) >= 2 && t.coefficient > 0.0) has_positive = true;
    }
    return has_positive;
  }

  PolynomialPotential scaled(double factor) const {
    PolynomialPotential out = *this;
    for (auto& t : out.terms_) t.coefficient *= factor;
    return out;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& t : terms_) {
      if (!first) os << " ";
      first = false;
      for (int i = 0; i < D; ++i) os << t.exponents[i] << (i + 1 < D ? "," : ":");
      os << t.coefficient;
    }
    return os.str();
  }

 private:
  static int total_degree(const PolyTerm<D>& t) {
    int d = 0;
    for (int e : t.exponents) d += e;
    return d;
  }

  static double ipow(double x, int n) {
    double r = 1.0;
    for (double b = x; n > 0; n >>= 1, b *= b)
      if (n & 1) r *= b;
    return r;
  }

  void add_term(const PolyTerm<D>& t) {
    for (auto& existing : terms_) {
      if (existing.exponents == t.exponents) {
        existing.coefficient += t.coefficient;
        return;
      }
    }
    terms_.push_back(t);
  }

  std::vector<PolyTerm<D>> terms_;
};

/// V(x) = (m w^2 / 2) x^2
inline PolynomialPotential<1> harmonic_potential_1d(double mass, double omega) {
  return PolynomialPotential<1>({{{2}, 0.5 * mass * omega * omega}});
}

/// V(x) = (m w^2 / 2) x^2 + lambda x^4
inline PolynomialPotential<1> quartic_potential_1d(double mass, double omega,
                                                   double lambda) {
  return PolynomialPotential<1>({{{2}, 0.5 * mass * omega * omega}, {{4}, lambda}});
}

/// V(x,y) = (m w^2 / 2)(x^2 + y^2)
inline PolynomialPotential<2> harmonic_potential_2d(double mass, double omega) {
  const double v2 = 0.5 * mass * omega * omega;
  return PolynomialPotential<2>({{{2, 0}, v2}, {{0, 2}, v2}});
}

/// V(x,y) = (m w^2 / 2)(x^2 + y^2) + lambda x^2 y^2; lambda controls chaoticity.
inline PolynomialPotential<2> coupled_quartic_2d(double mass, double omega,
                                                 double lambda) {
  const double v2 = 0.5 * mass * omega * omega;
  return PolynomialPotential<2>({{{2, 0}, v2}, {{0, 2}, v2}, {{2, 2}, lambda}});
}

}  // namespace actis
