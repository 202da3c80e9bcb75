#pragma once

// Universal multiset coding: dictionary/pattern split, compositions (pattern
// types) with their n-1 separator bits, the unary histogram code, and
// log-blocklength-normalized redundancy of the equiprobable-types mixture.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <unordered_map>
#include <vector>

#include "mslab/bigcount.hpp"
#include "mslab/bitstream.hpp"
#include "mslab/distributions.hpp"
#include "mslab/error.hpp"
#include "mslab/multiset_core.hpp"
#include "mslab/quadrature.hpp"

namespace mslab {

/// Dictionary indices of a sequence's letters: psi_1 = 1 and each first
/// occurrence introduces the next index.
using Pattern = std::vector<std::uint64_t>;

inline bool is_valid_pattern(std::span<const std::uint64_t> pattern) {
  std::uint64_t max_seen = 0;
  for (auto psi : pattern) {
    if (psi < 1 || psi > max_seen + 1) return false;
    max_seen = std::max(max_seen, psi);
  }
  return true;
}

template <class T>
struct DictionaryPattern {
  std::vector<T> dictionary;  // distinct letters in order of first appearance
  Pattern pattern;
};

template <class T>
DictionaryPattern<T> dict_pattern_decompose(std::span<const T> sequence) {
  if (sequence.empty()) throw invalid_argument("dict_pattern_decompose: sequence must be nonempty");
  DictionaryPattern<T> out;
  out.pattern.reserve(sequence.size());
  for (const T& x : sequence) {
    auto it = std::find(out.dictionary.begin(), out.dictionary.end(), x);
    if (it == out.dictionary.end()) {
      out.dictionary.push_back(x);
      out.pattern.push_back(out.dictionary.size());
    } else {
      out.pattern.push_back(static_cast<std::uint64_t>(it - out.dictionary.begin()) + 1);
    }
  }
  return out;
}

template <class T>
DictionaryPattern<T> dict_pattern_decompose(const std::vector<T>& sequence) {
  return dict_pattern_decompose(std::span<const T>(sequence));
}

template <class T>
std::vector<T> dict_pattern_recompose(const DictionaryPattern<T>& dp) {
  if (!is_valid_pattern(dp.pattern)) throw invalid_argument("dict_pattern_recompose: invalid pattern");
  std::vector<T> out;
  out.reserve(dp.pattern.size());
  for (auto psi : dp.pattern) {
    if (psi > dp.dictionary.size())
      throw invalid_argument("dict_pattern_recompose: pattern index beyond dictionary");
    out.push_back(dp.dictionary[psi - 1]);
  }
  return out;
}

/// Ordered list of positive parts summing to n (the type of a pattern).
using Composition = std::vector<std::uint64_t>;

inline std::uint64_t composition_total(std::span<const std::uint64_t> parts) {
  std::uint64_t n = 0;
  for (auto c : parts) {
    if (c == 0) throw invalid_argument("composition: parts must be >= 1");
    n += c;
  }
  return n;
}

/// 2^(n-1): one free separator bit between each pair of adjacent places.
inline BigCount composition_count(std::uint64_t n) {
  if (n < 1) throw invalid_argument("composition_count: n >= 1 required");
  return BigCount(1) << (n - 1);
}

// Separator bit i (i = 1..n-1) is set when a part ends after place i; the
// rank reads those bits with place 1 as the most significant bit.
inline BigCount composition_rank(std::span<const std::uint64_t> parts) {
  const std::uint64_t n = composition_total(parts);
  if (n < 1) throw invalid_argument("composition_rank: empty composition");
  BigCount rank = 0;
  std::uint64_t place = 0;
  for (std::size_t j = 0; j + 1 < parts.size(); ++j) {
    place += parts[j];
    boost::multiprecision::bit_set(rank, n - 1 - place);
  }
  return rank;
}

inline Composition composition_unrank(const BigCount& rank, std::uint64_t n) {
  if (rank < 0 || rank >= composition_count(n))
    throw invalid_argument("composition_unrank: rank " + to_string(rank) + " outside [0, 2^" +
                           std::to_string(n - 1) + ")");
  Composition parts;
  std::uint64_t run = 1;
  for (std::uint64_t place = 1; place < n; ++place) {
    if (boost::multiprecision::bit_test(rank, n - 1 - place)) {
      parts.push_back(run);
      run = 1;
    } else {
      ++run;
    }
  }
  parts.push_back(run);
  return parts;
}

/// Per bin, k_i zeros then a one: length sum(k) + #bins.
inline Bitstream histogram_encode(std::span<const std::uint64_t> counts) {
  Bitstream out;
  for (auto k : counts) {
    for (std::uint64_t i = 0; i < k; ++i) out.push_back(false);
    out.push_back(true);
  }
  return out;
}

inline std::vector<std::uint64_t> histogram_decode(const Bitstream& bits) {
  std::vector<std::uint64_t> counts;
  std::uint64_t zeros = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) {
      counts.push_back(zeros);
      zeros = 0;
    } else {
      ++zeros;
    }
  }
  if (zeros != 0) throw decode_error("histogram_decode: stream does not end with a 1");
  return counts;
}

// Elias codes for positive integers.

inline void elias_gamma_encode(std::uint64_t x, Bitstream& out) {
  if (x == 0) throw invalid_argument("elias_gamma_encode: x >= 1 required");
  const unsigned width = std::bit_width(x);
  for (unsigned i = 1; i < width; ++i) out.push_back(false);
  out.append_bits(x, width);
}

inline std::uint64_t elias_gamma_decode(BitReader& in) {
  unsigned zeros = 0;
  while (!in.read_bit()) {
    if (++zeros > 63) throw decode_error("elias_gamma_decode: value exceeds 64 bits");
  }
  return (std::uint64_t{1} << zeros) | in.read_bits(zeros);
}

inline void elias_delta_encode(std::uint64_t x, Bitstream& out) {
  if (x == 0) throw invalid_argument("elias_delta_encode: x >= 1 required");
  const unsigned width = std::bit_width(x);
  elias_gamma_encode(width, out);
  out.append_bits(x, width - 1);
}

inline std::uint64_t elias_delta_decode(BitReader& in) {
  const std::uint64_t width = elias_gamma_decode(in);
  if (width > 64) throw decode_error("elias_delta_decode: value exceeds 64 bits");
  return (std::uint64_t{1} << (width - 1)) | in.read_bits(static_cast<unsigned>(width - 1));
}

inline std::size_t elias_delta_length(std::uint64_t x) {
  const unsigned width = std::bit_width(x);
  return 2 * std::bit_width(width) - 1 + width - 1;
}

/// Universal code for a multiset over {1, 2, ...}. Layout:
///   delta(n + 1) | n-1 separator bits of the pattern type | delta of the
///   first differences of the sorted distinct letters.
/// Listing order of the input is irrelevant.
inline Bitstream universal_encode(std::span<const std::uint64_t> multiset) {
  std::vector<std::uint64_t> sorted(multiset.begin(), multiset.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() == 0)
    throw invalid_argument("universal_encode: letters must be positive integers");
  Bitstream out;
  elias_delta_encode(sorted.size() + 1, out);
  if (sorted.empty()) return out;
  // The sorted listing's pattern type: run lengths of equal letters.
  for (std::size_t i = 1; i < sorted.size(); ++i) out.push_back(sorted[i] != sorted[i - 1]);
  std::uint64_t previous = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    elias_delta_encode(sorted[i] - previous, out);
    previous = sorted[i];
  }
  return out;
}

inline Bitstream universal_encode(const std::vector<std::uint64_t>& multiset) {
  return universal_encode(std::span<const std::uint64_t>(multiset));
}

/// Inverse of universal_encode; returns the multiset in nondecreasing order.
inline std::vector<std::uint64_t> universal_decode(const Bitstream& bits) {
  BitReader in(bits);
  const std::uint64_t n = elias_delta_decode(in) - 1;
  std::vector<std::uint64_t> out;
  if (n > 0) {
    if (in.remaining() < n - 1) throw decode_error("universal_decode: truncated pattern type");
    std::vector<std::uint64_t> runs{1};
    for (std::uint64_t i = 1; i < n; ++i) {
      if (in.read_bit())
        runs.push_back(1);
      else
        ++runs.back();
    }
    out.reserve(n);
    std::uint64_t letter = 0;
    for (auto run : runs) {
      const std::uint64_t diff = elias_delta_decode(in);
      if (letter > UINT64_MAX - diff) throw decode_error("universal_decode: letter overflow");
      letter += diff;
      out.insert(out.end(), run, letter);
    }
  }
  if (!in.at_end()) throw decode_error("universal_decode: trailing bits");
  return out;
}

/// Mean universal_encode length per letter over `trials` Geometric(p) multisets of size n.
inline double measure_universal_rate(std::size_t n, double p, std::size_t trials, SeedSpec seed) {
  double total = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto letters = sample_geometric(p, n, {seed.seed, seed.stream * 1000003 + t});
    total += static_cast<double>(universal_encode(letters).size());
  }
  return total / (static_cast<double>(trials) * static_cast<double>(n));
}

/// Probability of each binary type under the uniform mixture over theta: 1/(n+1).
inline double uniform_mixture_type_pmf(std::uint64_t n) {
  if (n < 1) throw invalid_argument("uniform_mixture_type_pmf: n >= 1 required");
  return 1.0 / (static_cast<double>(n) + 1.0);
}

struct RedundancyPoint {
  std::uint64_t n = 0;
  std::size_t alphabet_size = 2;
  double h_types = 0.0;  // H({X}) under the equiprobable-types mixture, bits
  double h_cond = 0.0;   // H({X} | Theta), bits
  double normalized = 0.0;  // (h_types - h_cond) / log2 n
};

namespace detail {

inline std::vector<double> log_factorials(std::uint64_t n) {
  std::vector<double> table(n + 1, 0.0);
  for (std::uint64_t k = 1; k <= n; ++k) table[k] = table[k - 1] + std::log(static_cast<double>(k));
  return table;
}

// Entropy (bits) of Binomial(n, theta); terms beyond 40 standard deviations
// are below double precision and skipped.
inline double binomial_entropy(std::uint64_t n, double theta, const std::vector<double>& logfact) {
  if (n == 0 || theta <= 0.0 || theta >= 1.0) return 0.0;
  const double mean = n * theta;
  const double spread = 40.0 * std::sqrt(mean * (1.0 - theta)) + 40.0;
  const auto lo = static_cast<std::uint64_t>(std::max(0.0, std::floor(mean - spread)));
  const auto hi = static_cast<std::uint64_t>(std::min(static_cast<double>(n), std::ceil(mean + spread)));
  const double lt = std::log(theta), lq = std::log1p(-theta);
  double h = 0.0;
  for (std::uint64_t k = lo; k <= hi; ++k) {
    const double l = logfact[n] - logfact[k] - logfact[n - k] + k * lt + (n - k) * lq;
    h -= std::exp(l) * l;
  }
  return h * log2e;
}

}  // namespace detail

inline constexpr double theta_clamp = 1e-9;

/// Log-blocklength normalized redundancy for binary multisets under the
/// uniform prior on theta, with H({X} | Theta) integrated numerically.
inline RedundancyPoint normalized_redundancy_binary(std::uint64_t n, const quad::Options& opts = {}) {
  if (n < 2) throw invalid_argument("normalized_redundancy_binary: n >= 2 required");
  const auto logfact = detail::log_factorials(n);
  auto integrand = [&](double theta) { return detail::binomial_entropy(n, theta, logfact); };
  std::vector<double> breaks;
  for (double b = 1.0 / n; b < 0.5; b *= 4.0) breaks.push_back(b);
  // Symmetric in theta <-> 1 - theta.
  const auto half = quad::integrate(integrand, theta_clamp, 0.5, opts, breaks);
  RedundancyPoint out;
  out.n = n;
  out.alphabet_size = 2;
  out.h_types = std::log2(static_cast<double>(n) + 1.0);
  out.h_cond = 2.0 * half.value;
  out.normalized = (out.h_types - out.h_cond) / std::log2(static_cast<double>(n));
  return out;
}

/// Limit of the normalized redundancy for alphabet size |X|: (|X| - 1) / 2.
inline double normalized_redundancy_general(std::size_t alphabet_size) {
  if (alphabet_size < 2) throw invalid_argument("normalized_redundancy_general: |X| >= 2 required");
  return (static_cast<double>(alphabet_size) - 1.0) / 2.0;
}

/// Finite-n normalized redundancy under the Dirichlet(1, ..., 1) mixture (the
/// equiprobable-types prior) for |X| in {2, 3}. For |X| = 3 the simplex is
/// parametrized by stick breaking, p = (u, (1-u) v, (1-u)(1-v)), under which
/// u ~ Beta(1, 2) and v ~ Uniform(0, 1) independently, and the multinomial
/// entropy splits as H(K1) + E[H(K2 | K1)].
inline RedundancyPoint normalized_redundancy_empirical(std::size_t alphabet_size, std::uint64_t n,
                                                       int panels_per_side = 12,
                                                       int points_per_panel = 8) {
  if (alphabet_size == 2) return normalized_redundancy_binary(n);
  if (alphabet_size != 3)
    throw invalid_argument("normalized_redundancy_empirical: only |X| in {2, 3} is enumerated");
  if (n < 2) throw invalid_argument("normalized_redundancy_empirical: n >= 2 required");
  const auto logfact = detail::log_factorials(n);
  const auto rule = quad::composite_rule(quad::graded_unit_edges(panels_per_side, theta_clamp),
                                         points_per_panel);
  // h_v[m] = H(Bin(m, v)) for every node v, reused across all u nodes.
  std::vector<std::vector<double>> h_v(rule.nodes.size(), std::vector<double>(n + 1));
  for (std::size_t j = 0; j < rule.nodes.size(); ++j)
    for (std::uint64_t m = 0; m <= n; ++m) h_v[j][m] = detail::binomial_entropy(m, rule.nodes[j], logfact);

  double h_cond = 0.0;
  std::vector<double> pk(n + 1);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    const double lu = std::log(u), lq = std::log1p(-u);
    for (std::uint64_t k = 0; k <= n; ++k)
      pk[k] = std::exp(logfact[n] - logfact[k] - logfact[n - k] + k * lu + (n - k) * lq);
    const double h_first = detail::binomial_entropy(n, u, logfact);
    const double density_u = 2.0 * (1.0 - u);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      double h_rest = 0.0;
      for (std::uint64_t k = 0; k <= n; ++k) h_rest += pk[k] * h_v[j][n - k];
      h_cond += rule.weights[i] * rule.weights[j] * density_u * (h_first + h_rest);
    }
  }
  RedundancyPoint out;
  out.n = n;
  out.alphabet_size = 3;
  out.h_types = log2_big(type_count(n, 3));
  out.h_cond = h_cond;
  out.normalized = (out.h_types - out.h_cond) / std::log2(static_cast<double>(n));
  return out;
}

}  // namespace mslab
