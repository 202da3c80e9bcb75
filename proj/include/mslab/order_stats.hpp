#pragma once

// Order statistics of i.i.d. continuous parents: marginal, joint and Markov
// transition densities, moments, differential entropies, and the zero-rate
// distortion D_n(0) = (1/n) sum_r var(X_(r:n)).
//
// Integrals against the parent density are taken in probability space: with
// u = F(x), E[g(X_(r:K))] = int_0^1 g(Q(u)) beta(u; r, K-r+1) du, which maps
// infinite tails onto (0, 1) through the parent quantile function.
//
// Entropies are in bits. Closed forms whose constants come from natural-log
// derivations ((K-1)/2 and the harmonic-number terms) are scaled by log2(e).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "mslab/distributions.hpp"
#include "mslab/error.hpp"
#include "mslab/quadrature.hpp"

namespace mslab {

/// X_(r:K): the r-th smallest of K i.i.d. draws from `parent`.
struct OrderStatSpec {
  ContinuousParent parent;
  unsigned K;
  unsigned r;

  OrderStatSpec(ContinuousParent p, unsigned block, unsigned rank) : parent(p), K(block), r(rank) {
    if (K < 1 || r < 1 || r > K)
      throw invalid_argument("OrderStatSpec: need 1 <= r <= K (got r=" + std::to_string(r) +
                             ", K=" + std::to_string(K) + ")");
  }
};

namespace detail {

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

inline double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Density of Beta(r, K - r + 1) at u.
inline double order_beta_pdf(unsigned K, unsigned r, double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = r, b = K - r + 1.0;
  return std::exp((a - 1.0) * std::log(u) + (b - 1.0) * std::log1p(-u) - log_beta(a, b));
}

/// Initial partition around the bulk of Beta(r, K - r + 1).
inline std::vector<double> beta_breakpoints(unsigned K, unsigned r) {
  const double m = r / (K + 1.0);
  const double sd = std::sqrt(m * (1.0 - m) / (K + 2.0));
  std::vector<double> b;
  for (double s : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) {
    const double x = m + s * sd;
    if (x > 0.0 && x < 1.0) b.push_back(x);
  }
  return b;
}

inline quad::Options tight_options() {
  quad::Options o;
  o.rel_tol = 1e-11;
  o.abs_tol = 1e-14;
  o.max_subdivisions = 8000;
  return o;
}

inline double harmonic(unsigned k) {
  double h = 0.0;
  for (unsigned m = 1; m <= k; ++m) h += 1.0 / m;
  return h;
}

}  // namespace detail

/// F_(r:K)(x) = sum_{i=r}^{K} C(K, i) F^i (1 - F)^{K - i}.
inline double os_marginal_cdf(const OrderStatSpec& spec, double x) {
  const double F = spec.parent.cdf(x), S = spec.parent.sf(x);
  if (F <= 0.0) return 0.0;
  if (S <= 0.0) return 1.0;
  double sum = 0.0;
  for (unsigned i = spec.r; i <= spec.K; ++i)
    sum += std::exp(detail::log_choose(spec.K, i) + i * std::log(F) + (spec.K - i) * std::log(S));
  return std::min(1.0, sum);
}

/// Same quantity through the regularized incomplete beta I_F(r, K - r + 1).
inline double os_marginal_cdf_ibeta(const OrderStatSpec& spec, double x) {
  const double F = spec.parent.cdf(x);
  if (F <= 0.0) return 0.0;
  if (F >= 1.0) return 1.0;
  return boost::math::ibeta(static_cast<double>(spec.r), spec.K - spec.r + 1.0, F);
}

/// f_(r:K)(x) = (1 - F)^{K-r} F^{r-1} f / B(r, K - r + 1).
inline double os_marginal_pdf(const OrderStatSpec& spec, double x) {
  const double f = spec.parent.pdf(x);
  if (f <= 0.0) return 0.0;
  const double F = spec.parent.cdf(x), S = spec.parent.sf(x);
  const double a = spec.r, b = spec.K - spec.r + 1.0;
  return std::pow(S, b - 1.0) * std::pow(F, a - 1.0) * f * std::exp(-detail::log_beta(a, b));
}

/// Density of X_(r+1:K) given X_(r:K) = x, evaluated at y; zero for y <= x.
inline double os_transition_pdf(const ContinuousParent& parent, unsigned K, unsigned r, double x,
                                double y) {
  if (r < 1 || r >= K) throw invalid_argument("os_transition_pdf: need 1 <= r < K");
  if (y <= x) return 0.0;
  const double sx = parent.sf(x);
  if (sx <= 0.0) return 0.0;
  const double ratio = parent.sf(y) / sx;
  const double m = K - r;
  return m * std::pow(ratio, m - 1.0) * parent.pdf(y) / sx;
}

/// Joint density of all K order statistics: K! prod f(x_i) on the cone x_1 <= ... <= x_K.
inline double os_joint_pdf(const ContinuousParent& parent, std::span<const double> x) {
  if (!std::is_sorted(x.begin(), x.end())) return 0.0;
  double log_p = std::lgamma(x.size() + 1.0);
  for (double xi : x) {
    const double f = parent.pdf(xi);
    if (f <= 0.0) return 0.0;
    log_p += std::log(f);
  }
  return std::exp(log_p);
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of X_(r:K) by adaptive quadrature in probability space.
inline Moments os_moments(const OrderStatSpec& spec) {
  const auto& parent = spec.parent;
  const auto breaks = detail::beta_breakpoints(spec.K, spec.r);
  const auto opts = detail::tight_options();
  auto first = [&](double u) { return parent.quantile(u) * detail::order_beta_pdf(spec.K, spec.r, u); };
  const double mean = quad::integrate(first, 0.0, 1.0, opts, breaks).value;
  auto second = [&](double u) {
    const double d = parent.quantile(u) - mean;
    return d * d * detail::order_beta_pdf(spec.K, spec.r, u);
  };
  const double var = quad::integrate(second, 0.0, 1.0, opts, breaks).value;
  return {mean, var};
}

/// D_n(0): average variance of the n order statistics. Uniform parents use the
/// Beta closed form var(X_(r:n)) = (b - a)^2 r (n - r + 1) / ((n + 1)^2 (n + 2)).
inline double os_avg_variance(const ContinuousParent& parent, unsigned n) {
  if (n < 1) throw invalid_argument("os_avg_variance: n >= 1 required");
  double total = 0.0;
  if (parent.family() == Family::uniform) {
    const auto p = parent.params();
    const double width2 = (p[1] - p[0]) * (p[1] - p[0]);
    for (unsigned r = 1; r <= n; ++r)
      total += width2 * r * (n - r + 1.0) / ((n + 1.0) * (n + 1.0) * (n + 2.0));
  } else {
    for (unsigned r = 1; r <= n; ++r) total += os_moments({parent, n, r}).variance;
  }
  return total / n;
}

struct DistortionCurve {
  std::string parent_label;
  std::vector<std::pair<unsigned, double>> points;  // (n, D_n(0))

  bool nonincreasing(double slack = 0.0) const {
    for (std::size_t i = 1; i < points.size(); ++i)
      if (points[i].second > points[i - 1].second + slack) return false;
    return true;
  }
};

inline DistortionCurve zero_rate_distortion_curve(const ContinuousParent& parent, unsigned n_max) {
  DistortionCurve curve{parent.label(), {}};
  for (unsigned n = 1; n <= n_max; ++n) curve.points.emplace_back(n, os_avg_variance(parent, n));
  return curve;
}

/// Q_n(w) = X_(floor(w n) + 1 : n).
inline double empirical_quantile(std::span<const double> sample, double w) {
  if (sample.empty()) throw invalid_argument("empirical_quantile: empty sample");
  if (!(w > 0.0 && w < 1.0)) throw invalid_argument("empirical_quantile: w must lie in (0, 1)");
  std::vector<double> v(sample.begin(), sample.end());
  const auto index = std::min(v.size() - 1, static_cast<std::size_t>(std::floor(w * v.size())));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(index), v.end());
  return v[index];
}

/// h(X_(r:K)) = -int f_(r) log2 f_(r), by quadrature.
inline double os_marginal_entropy(const OrderStatSpec& spec) {
  const auto& parent = spec.parent;
  auto integrand = [&](double u) {
    const double b = detail::order_beta_pdf(spec.K, spec.r, u);
    if (b <= 0.0) return 0.0;
    return -b * (std::log2(b) + parent.log2_pdf(parent.quantile(u)));
  };
  return quad::integrate(integrand, 0.0, 1.0, detail::tight_options(),
                         detail::beta_breakpoints(spec.K, spec.r))
      .value;
}

/// Closed-form average marginal entropy
///   h(X) - log K - (1/K) sum_i log C(K-1, i-1) + (K-1)/2 nats-to-bits.
inline double os_avg_marginal_entropy(const ContinuousParent& parent, unsigned K) {
  if (K < 1) throw invalid_argument("os_avg_marginal_entropy: K >= 1 required");
  double binom_term = 0.0;
  for (unsigned i = 1; i <= K; ++i) binom_term += detail::log_choose(K - 1, i - 1);
  binom_term *= log2e / K;
  return parent.differential_entropy() - std::log2(static_cast<double>(K)) - binom_term +
         0.5 * (K - 1.0) * log2e;
}

/// Average of os_marginal_entropy over r = 1..K (the quadrature route).
inline double os_avg_marginal_entropy_quadrature(const ContinuousParent& parent, unsigned K) {
  double sum = 0.0;
  for (unsigned r = 1; r <= K; ++r) sum += os_marginal_entropy({parent, K, r});
  return sum / K;
}

/// h(X_(1:K), ..., X_(K:K)) = K h(X) - log2 K!.
inline double os_joint_entropy(const ContinuousParent& parent, unsigned K) {
  if (K < 1) throw invalid_argument("os_joint_entropy: K >= 1 required");
  return K * parent.differential_entropy() - std::lgamma(K + 1.0) * log2e;
}

/// h(X_(r+1:K) | X_(r:K)) from the harmonic-number closed form plus the
/// double integral of f(y) log f(y) [1 - F(y)]^{K-r-1} F(x)^{r-1} f(x) over
/// x < y, evaluated by nested adaptive quadrature.
inline double os_conditional_entropy(const ContinuousParent& parent, unsigned K, unsigned r) {
  if (r < 1 || r >= K) throw invalid_argument("os_conditional_entropy: need 1 <= r < K");
  const unsigned m = K - r;
  const double constant_nats =
      -std::log(static_cast<double>(m)) - detail::harmonic(K) + detail::harmonic(m) + 1.0 - 1.0 / m;
  // K! / (Gamma(K - r) Gamma(r))
  const double coef = std::exp(std::lgamma(K + 1.0) - std::lgamma(static_cast<double>(m)) -
                               std::lgamma(static_cast<double>(r)));
  quad::Options inner_opts;
  inner_opts.rel_tol = 1e-11;
  inner_opts.abs_tol = 1e-15;
  auto inner = [&](double u) {
    auto g = [&](double v) {
      return parent.log2_pdf(parent.quantile(v)) * std::pow(1.0 - v, m - 1.0);
    };
    return quad::integrate(g, u, 1.0, inner_opts).value;
  };
  auto outer = [&](double u) { return std::pow(u, r - 1.0) * inner(u); };
  quad::Options outer_opts;
  outer_opts.rel_tol = 1e-10;
  outer_opts.abs_tol = 1e-13;
  const double expected_log_f =
      coef * quad::integrate(outer, 0.0, 1.0, outer_opts, detail::beta_breakpoints(K, r)).value;
  return constant_nats * log2e - expected_log_f;
}

}  // namespace mslab
