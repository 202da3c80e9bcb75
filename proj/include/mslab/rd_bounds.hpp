#pragma once

// Rate-distortion computations for multisets: the reverse-waterfilling
// solution for error-frequency distortion on a type alphabet, a Blahut-Arimoto
// oracle, Shannon lower/upper bounds for sorted Gaussian pairs, and the
// logarithmic bit budget of the superletter construction.
//
// Rates are in bits and are totals over the block unless stated otherwise.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mslab/bigcount.hpp"
#include "mslab/distributions.hpp"
#include "mslab/error.hpp"
#include "mslab/multiset_core.hpp"

namespace mslab {

struct RDPoint {
  double rate_bits = 0.0;
  double distortion = 0.0;
};

struct RDCurve {
  std::string label;
  std::vector<RDPoint> points;
  std::vector<double> parameters;  // theta, slope or distortion per point

  /// Distortion nonincreasing as rate increases (after sorting by rate).
  bool monotone(double slack = 1e-12) const {
    auto pts = points;
    std::sort(pts.begin(), pts.end(),
              [](const RDPoint& a, const RDPoint& b) { return a.rate_bits < b.rate_bits; });
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i].distortion > pts[i - 1].distortion + slack) return false;
    for (const auto& p : pts)
      if (p.rate_bits < -slack || p.distortion < -slack) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// Error-frequency distortion on a type alphabet

struct ErokhinParam {
  double theta = 0.0;
  std::size_t N = 0;  // atoms with probability > theta
  double S = 0.0;     // their total probability
  double distortion = 0.0;
  double rate_bits = 0.0;
};

namespace detail {

inline std::vector<double> sorted_desc(std::span<const double> pmf) {
  std::vector<double> p(pmf.begin(), pmf.end());
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw invalid_argument("rate-distortion: invalid pmf entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw invalid_argument("rate-distortion: pmf must sum to 1");
  std::sort(p.begin(), p.end(), std::greater<>());
  return p;
}

inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace detail

/// D_theta = 1 - S_theta + theta (N_theta - 1)
/// R_theta = -sum_{p > theta} p log2 p + (1 - D) log2 (1 - D) + (N_theta - 1) theta log2 theta
inline ErokhinParam erokhin_at(std::span<const double> sorted_pmf, double theta) {
  ErokhinParam e;
  e.theta = theta;
  double neg_plogp = 0.0;
  for (double p : sorted_pmf) {
    if (p > theta) {
      ++e.N;
      e.S += p;
      neg_plogp -= detail::xlog2x(p);
    }
  }
  const double nm1 = static_cast<double>(e.N) - 1.0;
  e.distortion = 1.0 - e.S + theta * nm1;
  e.rate_bits = neg_plogp + detail::xlog2x(1.0 - e.distortion) + nm1 * detail::xlog2x(theta);
  e.distortion = std::max(0.0, e.distortion);
  e.rate_bits = std::max(0.0, e.rate_bits);
  return e;
}

/// Parametric R(D) curve for 0/1 distortion between types, from theta = 0
/// (lossless) to theta = second largest probability (zero rate).
inline RDCurve erokhin_rd(std::span<const double> pmf, std::size_t grid = 200) {
  const auto p = detail::sorted_desc(pmf);
  RDCurve c;
  c.label = "erokhin";
  std::size_t positive = 0;
  for (double v : p) positive += v > 0.0;
  if (p.size() < 2 || positive < 2) {
    c.points.push_back({0.0, 0.0});
    c.parameters.push_back(0.0);
    return c;
  }
  const double theta_max = p[1];
  std::vector<double> thetas;
  for (std::size_t i = 0; i <= grid; ++i) thetas.push_back(theta_max * i / std::max<std::size_t>(grid, 1));
  for (double v : p)
    if (v <= theta_max) thetas.push_back(v);
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  for (double t : thetas) {
    const auto e = erokhin_at(p, t);
    c.points.push_back({e.rate_bits, e.distortion});
    c.parameters.push_back(t);
  }
  return c;
}

/// R(D) for 0/1 distortion, inverting the continuous nondecreasing D_theta by bisection.
inline double erokhin_rate_at_distortion(std::span<const double> pmf, double D) {
  if (D < 0.0) throw invalid_argument("erokhin_rate_at_distortion: D must be >= 0");
  const auto p = detail::sorted_desc(pmf);
  if (p.size() < 2 || p[1] <= 0.0) return 0.0;
  if (D >= 1.0 - p[0]) return 0.0;
  double lo = 0.0, hi = p[1];
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (erokhin_at(p, mid).distortion < D ? lo : hi) = mid;
  }
  return erokhin_at(p, 0.5 * (lo + hi)).rate_bits;
}

// ---------------------------------------------------------------------------
// Blahut-Arimoto

struct BAOptions {
  double rel_tol = 1e-9;
  unsigned max_iterations = 200000;
};

/// Blahut-Arimoto at each slope beta: Q(y|x) proportional to r(y) 2^{-beta d(x,y)}.
/// `distortion` is row-major |X| x |Y|.
inline RDCurve blahut_arimoto(std::span<const double> pmf, std::span<const double> distortion,
                              std::size_t reproduction_size, std::span<const double> betas,
                              const BAOptions& opts = {}) {
  const std::size_t nx = pmf.size(), ny = reproduction_size;
  if (nx == 0 || ny == 0) throw invalid_argument("blahut_arimoto: empty alphabet");
  if (distortion.size() != nx * ny)
    throw invalid_argument("blahut_arimoto: distortion matrix has the wrong size");
  for (double d : distortion)
    if (!(d >= 0.0)) throw invalid_argument("blahut_arimoto: distortion must be nonnegative");
  RDCurve c;
  c.label = "ba";
  std::vector<double> A(nx * ny), r(ny), rn(ny);
  for (double beta : betas) {
    if (!(beta >= 0.0)) throw invalid_argument("blahut_arimoto: slopes must be nonnegative");
    for (std::size_t k = 0; k < nx * ny; ++k) A[k] = std::exp2(-beta * distortion[k]);
    std::fill(r.begin(), r.end(), 1.0 / ny);
    double R = 0.0, D = 0.0, prevR = -1.0, prevD = -1.0;
    bool converged = false;
    for (unsigned it = 0; it < opts.max_iterations; ++it) {
      std::fill(rn.begin(), rn.end(), 0.0);
      R = 0.0;
      D = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        if (pmf[x] <= 0.0) continue;
        double z = 0.0;
        for (std::size_t y = 0; y < ny; ++y) z += r[y] * A[x * ny + y];
        for (std::size_t y = 0; y < ny; ++y) {
          const double q = r[y] * A[x * ny + y] / z;
          if (q <= 0.0) continue;
          rn[y] += pmf[x] * q;
          D += pmf[x] * q * distortion[x * ny + y];
          R += pmf[x] * q * std::log2(q / r[y]);
        }
      }
      r.swap(rn);
      if (std::abs(R - prevR) <= opts.rel_tol * std::max(1.0, R) &&
          std::abs(D - prevD) <= opts.rel_tol * std::max(1.0, D)) {
        converged = true;
        break;
      }
      prevR = R;
      prevD = D;
    }
    if (!converged)
      throw convergence_error("blahut_arimoto: no convergence at slope " + std::to_string(beta), R,
                              std::abs(R - prevR));
    c.points.push_back({std::max(0.0, R), D});
    c.parameters.push_back(beta);
  }
  return c;
}

/// 0/1 distortion matrix on an alphabet of size m.
inline std::vector<double> hamming_matrix(std::size_t m) {
  std::vector<double> d(m * m, 1.0);
  for (std::size_t i = 0; i < m; ++i) d[i * m + i] = 0.0;
  return d;
}

// ---------------------------------------------------------------------------
// Gaussian order statistics, K = 2

/// Whether a distortion argument is the block total E||X - Z||^2 or the per-letter average.
enum class DistortionScale { total, per_letter };

inline std::string to_string(DistortionScale s) {
  return s == DistortionScale::total ? "total" : "per_letter";
}

/// Shannon lower bound for K sorted letters:
///   max(0, h(X_(1:K), ..., X_(K:K)) - (K/2) log2(2 pi e d)), d the per-letter MSE.
inline double slb_os(const ContinuousParent& parent, unsigned K, double D,
                     DistortionScale scale = DistortionScale::total) {
  if (!(D > 0.0)) throw invalid_argument("slb: D must be > 0");
  if (K < 1) throw invalid_argument("slb: K >= 1 required");
  const double d = scale == DistortionScale::total ? D / K : D;
  const double h_joint = K * parent.differential_entropy() - std::lgamma(K + 1.0) * log2e;
  return std::max(0.0, h_joint - 0.5 * K * std::log2(2.0 * std::numbers::pi * std::numbers::e * d));
}

/// SLB for a sorted standard-normal pair: log2(1/D) for total D, i.e.
/// log2(1/d) - 1 for per-letter d.
inline double slb_os_gaussian(double D, DistortionScale scale = DistortionScale::total) {
  return slb_os(ContinuousParent::gaussian(0.0, 1.0), 2, D, scale);
}

/// Covariance of (X_(1:2), X_(2:2)) for a standard normal parent.
inline std::array<std::array<double, 2>, 2> os_covariance_gaussian_k2() {
  const double ip = 1.0 / std::numbers::pi;
  return {{{1.0 - ip, ip}, {ip, 1.0 - ip}}};
}

/// Eigenvalues of a symmetric 2x2 matrix, descending.
inline std::array<double, 2> symmetric_eigenvalues(const std::array<std::array<double, 2>, 2>& m) {
  const double mid = 0.5 * (m[0][0] + m[1][1]);
  const double rad = std::hypot(0.5 * (m[0][0] - m[1][1]), m[0][1]);
  return {mid + rad, mid - rad};
}

/// Sample covariance of sorted standard-normal pairs.
inline std::array<std::array<double, 2>, 2> mc_sorted_gaussian_covariance(std::size_t trials,
                                                                          SeedSpec seed) {
  if (trials < 2) throw invalid_argument("mc_sorted_gaussian_covariance: need >= 2 trials");
  UniformStream u(seed);
  double m0 = 0, m1 = 0, c00 = 0, c01 = 0, c11 = 0;
  for (std::size_t t = 1; t <= trials; ++t) {
    double a = detail::standard_normal_quantile(u()), b = detail::standard_normal_quantile(u());
    if (a > b) std::swap(a, b);
    const double d0 = a - m0, d1 = b - m1;
    m0 += d0 / t;
    m1 += d1 / t;
    c00 += d0 * (a - m0);
    c01 += d0 * (b - m1);
    c11 += d1 * (b - m1);
  }
  const double k = 1.0 / (trials - 1);
  return {{{c00 * k, c01 * k}, {c01 * k, c11 * k}}};
}

/// Reverse waterfilling over independent Gaussian components with variances
/// `sigma2` at total distortion D: sum_i max(0, 1/2 log2(sigma_i^2 / lambda)).
inline double reverse_waterfill(std::span<const double> sigma2, double D) {
  if (!(D > 0.0)) throw invalid_argument("reverse_waterfill: D must be > 0");
  double total = 0.0;
  for (double s : sigma2) total += s;
  if (D >= total) return 0.0;
  // Water level lambda solves sum_i min(lambda, sigma_i^2) = D.
  std::vector<double> s(sigma2.begin(), sigma2.end());
  std::sort(s.begin(), s.end());
  double below = 0.0, lambda = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double cand = (D - below) / (s.size() - i);
    if (cand <= s[i]) {
      lambda = cand;
      break;
    }
    below += s[i];
  }
  double rate = 0.0;
  for (double v : s)
    if (v > lambda) rate += 0.5 * std::log2(v / lambda);
  return rate;
}

/// Shannon upper bound for a sorted standard-normal pair (Gaussian with the
/// same covariance, eigenvalues 1 and 1 - 2/pi), three-branch form in total D.
inline double sub_os_gaussian(double D, DistortionScale scale = DistortionScale::total) {
  if (!(D > 0.0)) throw invalid_argument("sub: D must be > 0");
  const double Dt = scale == DistortionScale::total ? D : 2.0 * D;
  const double b1 = 2.0 - 4.0 / std::numbers::pi;
  const double b2 = 2.0 - 2.0 / std::numbers::pi;
  if (Dt >= b2) return 0.0;
  if (Dt <= b1) return 0.5 * std::log2(b1 / Dt) + 0.5 * std::log2(2.0 / Dt);
  return 0.5 * std::log2(1.0 / (Dt - 1.0 + 2.0 / std::numbers::pi));
}

// ---------------------------------------------------------------------------
// Superletter budget

/// Bits to enumerate the multiset of n/N superletters over an alphabet of
/// 2^{N R} reproduction blocks: ceil(log2 C(n/N + 2^{NR} - 1, 2^{NR} - 1)).
inline std::uint64_t lossy_logn_budget(std::uint64_t n, std::uint64_t N, double R) {
  if (N < 1) throw invalid_argument("lossy_logn_budget: N >= 1 required");
  if (n % N != 0) throw invalid_argument("lossy_logn_budget: n must be divisible by N");
  if (!(R >= 0.0)) throw invalid_argument("lossy_logn_budget: R must be >= 0");
  const double NR = N * R;
  const double rounded = std::round(NR);
  if (std::abs(NR - rounded) > 1e-9) throw invalid_argument("lossy_logn_budget: N*R must be an integer");
  if (rounded > 62) throw invalid_argument("lossy_logn_budget: N*R must be <= 62");
  const std::uint64_t M = std::uint64_t{1} << static_cast<unsigned>(rounded);
  return ceil_log2(type_count(n / N, M));
}

}  // namespace mslab
