#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "actis/action_matrix.hpp"
#include "actis/error.hpp"
#include "actis/rng.hpp"

namespace actis {

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  std::string source;
};

struct UnfoldedSpectrum {
  std::vector<double> levels;  // nondecreasing, edge-truncated
  int fit_degree = 0;
  std::vector<double> fit_coefficients;  // Chebyshev basis on the scaled domain
  double domain_lo = 0.0, domain_hi = 0.0;
  double fit_residual = 0.0;  // rms deviation of the staircase fit
  double mean_spacing = 0.0;
  bool monotone_full_range = true;  // diagnostic: fit monotone over the whole
                                    // spectrum, including truncated edges
};

struct BinningSpec {
  int bins = 40;
  double lo = 0.0;
  double hi = 4.0;
};

struct SpacingSample {
  std::vector<double> spacings;
  std::vector<double> bin_edges;
  std::vector<double> densities;  // normalized by total count; in-range integral
                                  // is 1 - overflow_mass
  double overflow_mass = 0.0;
  std::size_t sample_size = 0;
};

struct FitResult {
  double brody_q = 0.0;
  double ks_poisson = 1.0;
  double ks_wigner = 1.0;
  double chi2_per_bin = 0.0;
  bool small_sample_warning = false;
};

enum class RefKind { poisson, wigner_goe, brody };

/// Eigenvalues of a dense symmetric matrix (row-major storage), ascending.
inline Spectrum eigenvalues_sym(const std::vector<double>& values, std::size_t n,
                                std::string source = {}) {
  if (n == 0 || values.size() != n * n)
    throw Error(ErrorCode::config, "matrix storage size mismatch");
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values[i * n + j];
      if (!std::isfinite(v))
        throw Error(ErrorCode::config, "non-finite matrix entry");
      m(i, j) = v;
    }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::config, "matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::eigensolver, "symmetric eigensolve did not converge");
  Spectrum spec;
  spec.eigenvalues.assign(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + n);
  std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end());
  spec.source = std::move(source);
  return spec;
}

template <int D>
Spectrum eigenvalues(const ActionMatrix<D>& mat) {
  return eigenvalues_sym(mat.values, mat.size(), "action-matrix");
}

namespace detail {

inline double cheb_eval(const std::vector<double>& c, double t) {
  // Clenshaw recurrence
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

}  // namespace detail

/// Unfolding: least-squares polynomial fit (Chebyshev basis, given degree) of
/// the integrated level-counting staircase N(sigma), then each level is mapped
/// through the fit. A 5% edge fraction (configurable) is discarded from each
/// end before spacing analysis; polynomial staircase fits ring at sparse
/// spectral edges, which is what the truncation is for. The retained mapped
/// sequence must be nondecreasing: tiny numerical dips are clamped, real ones
/// raise unfolding-degeneracy. Monotonicity over the full range (edges
/// included) is reported as a diagnostic flag.
inline UnfoldedSpectrum unfold(const Spectrum& spectrum, int degree,
                               double edge_fraction = 0.05) {
  const auto& ev = spectrum.eigenvalues;
  const std::size_t n = ev.size();
  if (degree < 1) throw Error(ErrorCode::config, "unfolding degree must be >= 1");
  if (n < static_cast<std::size_t>(degree) + 2)
    throw Error(ErrorCode::insufficient_data, "need at least degree+2 levels");
  if (!(edge_fraction >= 0.0 && edge_fraction < 0.5))
    throw Error(ErrorCode::config, "edge fraction must be in [0, 0.5)");
  if (!std::is_sorted(ev.begin(), ev.end()))
    throw Error(ErrorCode::config, "spectrum must be sorted");
  const double lo = ev.front(), hi = ev.back();
  if (!(hi > lo))
    throw Error(ErrorCode::unfolding_degeneracy, "spectrum has zero spread");

  // Chebyshev-Vandermonde least squares on t in [-1, 1].
  const int ncoef = degree + 1;
  Eigen::MatrixXd A(n, ncoef);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * (ev[i] - lo) / (hi - lo) - 1.0;
    double t0 = 1.0, t1 = t;
    A(i, 0) = 1.0;
    if (ncoef > 1) A(i, 1) = t;
    for (int k = 2; k < ncoef; ++k) {
      const double tk = 2.0 * t * t1 - t0;
      A(i, k) = tk;
      t0 = t1;
      t1 = tk;
    }
    b(i) = static_cast<double>(i) + 0.5;
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);

  UnfoldedSpectrum out;
  out.fit_degree = degree;
  out.fit_coefficients.assign(coef.data(), coef.data() + ncoef);
  out.domain_lo = lo;
  out.domain_hi = hi;

  std::vector<double> mapped(n);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * (ev[i] - lo) / (hi - lo) - 1.0;
    mapped[i] = detail::cheb_eval(out.fit_coefficients, t);
    const double r = mapped[i] - (static_cast<double>(i) + 0.5);
    rss += r * r;
  }
  out.fit_residual = std::sqrt(rss / n);

  for (std::size_t i = 1; i < n; ++i)
    if (mapped[i] < mapped[i - 1]) out.monotone_full_range = false;

  const auto cut = static_cast<std::size_t>(std::floor(edge_fraction * n));
  out.levels.assign(mapped.begin() + cut, mapped.end() - cut);
  if (out.levels.size() < 2)
    throw Error(ErrorCode::insufficient_data, "edge truncation left < 2 levels");

  // Monotonicity over the retained range; clamp dips within rounding noise.
  const double span = out.levels.back() - out.levels.front();
  const double tol = 1e-9 * std::max(1.0, std::abs(span));
  for (std::size_t i = 1; i < out.levels.size(); ++i) {
    if (out.levels[i] < out.levels[i - 1] - tol)
      throw Error(ErrorCode::unfolding_degeneracy,
                  "fitted integrated density is not monotone over the spectrum");
    if (out.levels[i] < out.levels[i - 1]) out.levels[i] = out.levels[i - 1];
  }
  out.mean_spacing =
      (out.levels.back() - out.levels.front()) / (out.levels.size() - 1);
  return out;
}

/// Nearest-neighbor spacings and their normalized histogram.
inline SpacingSample spacing_distribution(const UnfoldedSpectrum& unfolded,
                                          const BinningSpec& binning = {}) {
  const auto& lv = unfolded.levels;
  if (lv.size() < 2)
    throw Error(ErrorCode::insufficient_data, "need at least 2 levels for spacings");
  if (binning.bins < 1 || !(binning.hi > binning.lo))
    throw Error(ErrorCode::config, "invalid binning spec");

  SpacingSample s;
  s.spacings.resize(lv.size() - 1);
  for (std::size_t i = 0; i + 1 < lv.size(); ++i) s.spacings[i] = lv[i + 1] - lv[i];
  s.sample_size = s.spacings.size();

  const double width = (binning.hi - binning.lo) / binning.bins;
  s.bin_edges.resize(binning.bins + 1);
  for (int k = 0; k <= binning.bins; ++k) s.bin_edges[k] = binning.lo + k * width;
  std::vector<std::size_t> counts(binning.bins, 0);
  std::size_t overflow = 0;
  for (const double v : s.spacings) {
    if (v < binning.lo || v >= binning.hi) {
      ++overflow;
      continue;
    }
    auto k = static_cast<std::size_t>((v - binning.lo) / width);
    if (k >= counts.size()) k = counts.size() - 1;
    ++counts[k];
  }
  s.densities.resize(binning.bins);
  for (int k = 0; k < binning.bins; ++k)
    s.densities[k] = static_cast<double>(counts[k]) / (s.sample_size * width);
  s.overflow_mass = static_cast<double>(overflow) / s.sample_size;
  return s;
}

/// Unit-mean Brody normalization constant b(q) = Gamma((q+2)/(q+1))^(q+1).
inline double brody_b(double q) {
  return std::pow(std::tgamma((q + 2.0) / (q + 1.0)), q + 1.0);
}

/// Reference spacing densities: Poisson e^-s, Wigner-GOE surmise
/// (pi s/2) e^(-pi s^2/4), Brody interpolation with unit mean.
inline double reference_pdf(RefKind kind, double s, double q = 0.0) {
  if (s < 0.0) throw Error(ErrorCode::domain, "spacing must be nonnegative");
  switch (kind) {
    case RefKind::poisson:
      return std::exp(-s);
    case RefKind::wigner_goe:
      return 0.5 * M_PI * s * std::exp(-0.25 * M_PI * s * s);
    case RefKind::brody: {
      if (q < 0.0 || q > 1.0)
        throw Error(ErrorCode::domain, "brody parameter must be in [0, 1]");
      const double b = brody_b(q);
      if (s == 0.0) return q == 0.0 ? b : 0.0;
      return (q + 1.0) * b * std::pow(s, q) * std::exp(-b * std::pow(s, q + 1.0));
    }
  }
  throw Error(ErrorCode::domain, "unknown reference kind");
}

inline double reference_cdf(RefKind kind, double s, double q = 0.0) {
  if (s < 0.0) throw Error(ErrorCode::domain, "spacing must be nonnegative");
  switch (kind) {
    case RefKind::poisson:
      return 1.0 - std::exp(-s);
    case RefKind::wigner_goe:
      return 1.0 - std::exp(-0.25 * M_PI * s * s);
    case RefKind::brody: {
      if (q < 0.0 || q > 1.0)
        throw Error(ErrorCode::domain, "brody parameter must be in [0, 1]");
      return 1.0 - std::exp(-brody_b(q) * std::pow(s, q + 1.0));
    }
  }
  throw Error(ErrorCode::domain, "unknown reference kind");
}

/// One-sample Kolmogorov-Smirnov distance of the spacings against a
/// reference distribution.
inline double ks_distance(std::vector<double> spacings, RefKind kind, double q = 0.0) {
  if (spacings.empty())
    throw Error(ErrorCode::insufficient_data, "empty spacing sample");
  std::sort(spacings.begin(), spacings.end());
  const double n = static_cast<double>(spacings.size());
  double d = 0.0;
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    const double f = reference_cdf(kind, std::max(0.0, spacings[i]), q);
    d = std::max(d, std::abs(f - (i + 1) / n));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov distance.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw Error(ErrorCode::insufficient_data, "empty spacing sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

/// Maximum-likelihood Brody parameter on the raw spacings plus KS distances
/// against the pure references. A sample smaller than 50 sets the warning
/// flag; identical spacings cannot support a fit.
inline FitResult fit_spacings(const SpacingSample& sample) {
  const auto& s = sample.spacings;
  if (s.empty()) throw Error(ErrorCode::insufficient_data, "empty spacing sample");
  const auto [mn, mx] = std::minmax_element(s.begin(), s.end());
  if (*mx == *mn)
    throw Error(ErrorCode::fit_degenerate, "all spacings identical");

  FitResult out;
  out.small_sample_warning = s.size() < 50;

  double sum_log = 0.0;
  bool has_zero = false;
  for (const double v : s) {
    if (v <= 0.0)
      has_zero = true;
    else
      sum_log += std::log(v);
  }
  const double n = static_cast<double>(s.size());

  auto neg_loglik = [&](double q) {
    if (has_zero && q > 0.0) return std::numeric_limits<double>::infinity();
    const double b = brody_b(q);
    double sum_pow = 0.0;
    for (const double v : s) sum_pow += std::pow(v, q + 1.0);
    return -(n * std::log(q + 1.0) + n * std::log(b) + q * sum_log - b * sum_pow);
  };

  if (has_zero) {
    out.brody_q = 0.0;
  } else {
    // golden-section minimize over q in [0, 1]
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = 1.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = neg_loglik(x1), f2 = neg_loglik(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = neg_loglik(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = neg_loglik(x2);
      }
    }
    double q_best = 0.5 * (a + b);
    double f_best = neg_loglik(q_best);
    for (const double q : {0.0, 1.0}) {  // endpoints can win
      const double f = neg_loglik(q);
      if (f < f_best) {
        f_best = f;
        q_best = q;
      }
    }
    out.brody_q = q_best;
  }

  out.ks_poisson = ks_distance(s, RefKind::poisson);
  out.ks_wigner = ks_distance(s, RefKind::wigner_goe);

  // chi-squared per occupied-range bin against the fitted Brody density
  if (!sample.densities.empty()) {
    double chi2 = 0.0;
    int used = 0;
    for (std::size_t k = 0; k + 1 < sample.bin_edges.size(); ++k) {
      const double p = reference_cdf(RefKind::brody, sample.bin_edges[k + 1], out.brody_q) -
                       reference_cdf(RefKind::brody, sample.bin_edges[k], out.brody_q);
      const double expected = p * static_cast<double>(sample.sample_size);
      if (expected < 1e-9) continue;
      const double width = sample.bin_edges[k + 1] - sample.bin_edges[k];
      const double observed = sample.densities[k] * sample.sample_size * width;
      chi2 += (observed - expected) * (observed - expected) / expected;
      ++used;
    }
    out.chi2_per_bin = used > 0 ? chi2 / used : 0.0;
  }
  return out;
}

/// GOE-like symmetric matrix: off-diagonal N(0, v), diagonal N(0, 2v),
/// deterministic in the seed (counter-based draws keyed by (i, j)).
inline std::vector<double> goe_sample(std::size_t n, std::uint64_t seed,
                                      double variance = 1.0) {
  if (n < 2) throw Error(ErrorCode::config, "GOE sample needs n >= 2");
  std::vector<double> m(n * n);
  const double off = std::sqrt(variance);
  const double diag = std::sqrt(2.0 * variance);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double z = rng::normal_pair(seed, i, j).first;
      const double v = (i == j ? diag : off) * z;
      m[i * n + j] = v;
      m[j * n + i] = v;
    }
  return m;
}

}  // namespace actis
