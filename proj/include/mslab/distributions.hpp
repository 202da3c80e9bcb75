#pragma once

// Parent distributions: a finite discrete pmf and three continuous families,
// plus deterministic inverse-cdf sampling keyed by (seed, stream).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mslab/error.hpp"

namespace mslab {

inline constexpr double log2e = std::numbers::log2e;

/// -p log2 p with the 0 log 0 = 0 convention.
inline double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

inline double entropy_bits(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) h += plogp(p);
  return h;
}

/// Probability vector over the letters {1, ..., |X|}.
class DiscretePMF {
 public:
  explicit DiscretePMF(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw invalid_argument("DiscretePMF: alphabet must be nonempty");
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p))
        throw invalid_argument("DiscretePMF: probabilities must be finite and >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "DiscretePMF: probabilities sum to " << sum << ", expected 1";
      throw invalid_argument(msg.str());
    }
  }

  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  /// Probability of a 1-based letter.
  double operator()(std::size_t letter) const { return probs_.at(letter - 1); }
  double entropy() const { return entropy_bits(probs_); }

 private:
  std::vector<double> probs_;
};

enum class Family { uniform, gaussian, exponential };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::uniform: return "uniform";
    case Family::gaussian: return "gaussian";
    case Family::exponential: return "exponential";
  }
  return "unknown";
}

namespace detail {

// Acklam's rational approximation followed by one Halley step against erfc;
// the refined value is accurate to a few ulps across (0, 1).
inline double standard_normal_quantile(double w) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  if (w > 0.5) return -standard_normal_quantile(1.0 - w);
  constexpr double w_low = 0.02425;
  double x;
  if (w < w_low) {
    const double q = std::sqrt(-2.0 * std::log(w));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = w - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - w;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace detail

/// A continuous parent: Uniform(a, b), Gaussian(mean, variance) or Exponential(rate).
class ContinuousParent {
 public:
  static ContinuousParent uniform(double a, double b) {
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
      throw invalid_argument("Uniform parent requires finite a < b");
    return ContinuousParent(Family::uniform, a, b);
  }
  static ContinuousParent gaussian(double mean, double variance) {
    if (!(variance > 0.0) || !std::isfinite(mean) || !std::isfinite(variance))
      throw invalid_argument("Gaussian parent requires variance > 0");
    return ContinuousParent(Family::gaussian, mean, std::sqrt(variance));
  }
  static ContinuousParent exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
      throw invalid_argument("Exponential parent requires rate > 0");
    return ContinuousParent(Family::exponential, rate, 0.0);
  }

  Family family() const noexcept { return family_; }

  /// Parameters in the family's natural order: (a, b), (mean, variance), (rate).
  std::vector<double> params() const {
    switch (family_) {
      case Family::uniform: return {p0_, p1_};
      case Family::gaussian: return {p0_, p1_ * p1_};
      case Family::exponential: return {p0_};
    }
    return {};
  }

  double lower() const noexcept {
    switch (family_) {
      case Family::uniform: return p0_;
      case Family::gaussian: return -INFINITY;
      case Family::exponential: return 0.0;
    }
    return -INFINITY;
  }
  double upper() const noexcept {
    return family_ == Family::uniform ? p1_ : INFINITY;
  }

  double cdf(double x) const noexcept {
    switch (family_) {
      case Family::uniform:
        return x <= p0_ ? 0.0 : x >= p1_ ? 1.0 : (x - p0_) / (p1_ - p0_);
      case Family::gaussian:
        return 0.5 * std::erfc(-(x - p0_) / (p1_ * std::numbers::sqrt2));
      case Family::exponential:
        return x <= 0.0 ? 0.0 : -std::expm1(-p0_ * x);
    }
    return 0.0;
  }

  /// Survival function 1 - F(x), evaluated without cancellation in the upper tail.
  double sf(double x) const noexcept {
    switch (family_) {
      case Family::uniform:
        return x <= p0_ ? 1.0 : x >= p1_ ? 0.0 : (p1_ - x) / (p1_ - p0_);
      case Family::gaussian:
        return 0.5 * std::erfc((x - p0_) / (p1_ * std::numbers::sqrt2));
      case Family::exponential:
        return x <= 0.0 ? 1.0 : std::exp(-p0_ * x);
    }
    return 0.0;
  }

  double pdf(double x) const noexcept {
    switch (family_) {
      case Family::uniform:
        return (x < p0_ || x > p1_) ? 0.0 : 1.0 / (p1_ - p0_);
      case Family::gaussian: {
        const double z = (x - p0_) / p1_;
        return std::exp(-0.5 * z * z) / (p1_ * std::sqrt(2.0 * std::numbers::pi));
      }
      case Family::exponential:
        return x < 0.0 ? 0.0 : p0_ * std::exp(-p0_ * x);
    }
    return 0.0;
  }

  /// log2 f(x); -inf outside the support.
  double log2_pdf(double x) const noexcept {
    switch (family_) {
      case Family::uniform:
        return (x < p0_ || x > p1_) ? -INFINITY : -std::log2(p1_ - p0_);
      case Family::gaussian: {
        const double z = (x - p0_) / p1_;
        return (-0.5 * z * z) * log2e - std::log2(p1_ * std::sqrt(2.0 * std::numbers::pi));
      }
      case Family::exponential:
        return x < 0.0 ? -INFINITY : std::log2(p0_) - p0_ * x * log2e;
    }
    return -INFINITY;
  }

  /// Q(w) = inf{x : F(x) >= w}; w must lie in (0, 1).
  double quantile(double w) const {
    if (!(w > 0.0 && w < 1.0)) {
      std::ostringstream msg;
      msg << "quantile: probability " << w << " outside (0, 1)";
      throw std::domain_error(msg.str());
    }
    switch (family_) {
      case Family::uniform: return p0_ + w * (p1_ - p0_);
      case Family::gaussian: return p0_ + p1_ * detail::standard_normal_quantile(w);
      case Family::exponential: return -std::log1p(-w) / p0_;
    }
    return 0.0;
  }

  double mean() const noexcept {
    switch (family_) {
      case Family::uniform: return 0.5 * (p0_ + p1_);
      case Family::gaussian: return p0_;
      case Family::exponential: return 1.0 / p0_;
    }
    return 0.0;
  }

  double variance() const noexcept {
    switch (family_) {
      case Family::uniform: return (p1_ - p0_) * (p1_ - p0_) / 12.0;
      case Family::gaussian: return p1_ * p1_;
      case Family::exponential: return 1.0 / (p0_ * p0_);
    }
    return 0.0;
  }

  /// Closed-form differential entropy h(X) in bits.
  double differential_entropy() const noexcept {
    switch (family_) {
      case Family::uniform: return std::log2(p1_ - p0_);
      case Family::gaussian:
        return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * p1_ * p1_);
      case Family::exponential: return std::log2(std::numbers::e / p0_);
    }
    return 0.0;
  }

  std::string label() const {
    std::ostringstream out;
    out.precision(12);
    switch (family_) {
      case Family::uniform: out << "uniform(" << p0_ << "," << p1_ << ")"; break;
      case Family::gaussian: out << "gaussian(" << p0_ << "," << p1_ * p1_ << ")"; break;
      case Family::exponential: out << "exponential(" << p0_ << ")"; break;
    }
    return out.str();
  }

 private:
  ContinuousParent(Family f, double p0, double p1) : family_(f), p0_(p0), p1_(p1) {}

  Family family_;
  double p0_;  // a | mean | rate
  double p1_;  // b | sigma | unused
};

/// Identifies a reproducible random stream.
struct SeedSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Uniform variates on the open interval (0, 1), deterministic per SeedSpec.
class UniformStream {
 public:
  explicit UniformStream(SeedSpec spec)
      : engine_(detail::splitmix64(spec.seed ^ detail::splitmix64(spec.stream + 1))) {}

  double operator()() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// n i.i.d. draws from a continuous parent by the inverse-cdf method.
inline std::vector<double> sample(const ContinuousParent& parent, std::size_t n, SeedSpec seed) {
  UniformStream u(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = parent.quantile(u());
  return out;
}

/// n i.i.d. 1-based letters from a discrete pmf by the inverse-cdf method.
inline std::vector<int> sample(const DiscretePMF& pmf, std::size_t n, SeedSpec seed) {
  std::vector<double> cumulative(pmf.size());
  std::partial_sum(pmf.probs().begin(), pmf.probs().end(), cumulative.begin());
  UniformStream u(seed);
  std::vector<int> out(n);
  for (auto& letter : out) {
    const double w = u() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), w);
    // Skip zero-probability letters that share the cumulative value.
    if (it == cumulative.end()) it = std::prev(cumulative.end());
    letter = static_cast<int>(it - cumulative.begin()) + 1;
  }
  return out;
}

/// n i.i.d. draws from Geometric(p) on {1, 2, ...}: P(k) = (1 - p)^{k-1} p.
inline std::vector<std::uint64_t> sample_geometric(double p, std::size_t n, SeedSpec seed) {
  if (!(p > 0.0 && p <= 1.0)) throw invalid_argument("sample_geometric: p must lie in (0, 1]");
  UniformStream u(seed);
  std::vector<std::uint64_t> out(n);
  if (p == 1.0) {
    std::fill(out.begin(), out.end(), 1);
    return out;
  }
  const double denom = std::log1p(-p);
  for (auto& k : out) {
    const double v = std::ceil(std::log1p(-u()) / denom);
    k = static_cast<std::uint64_t>(std::max(1.0, v));
  }
  return out;
}

}  // namespace mslab
