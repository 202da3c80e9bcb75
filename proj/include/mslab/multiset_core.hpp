#pragma once

// Multisets as types (count vectors): the order/value split of a sequence,
// type-class counting and ranking, and exact/asymptotic multiset entropies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mslab/bigcount.hpp"
#include "mslab/distributions.hpp"
#include "mslab/error.hpp"

namespace mslab {

/// Letter counts (k_1, ..., k_|X|) of a multiset over {1, ..., |X|}.
class TypeVector {
 public:
  explicit TypeVector(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
    if (counts_.empty()) throw invalid_argument("TypeVector: alphabet size must be >= 1");
    n_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  }

  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t count(std::size_t letter) const { return counts_.at(letter - 1); }
  std::uint64_t n() const noexcept { return n_; }
  std::size_t alphabet_size() const noexcept { return counts_.size(); }

  friend bool operator==(const TypeVector&, const TypeVector&) = default;
  friend auto operator<=>(const TypeVector& a, const TypeVector& b) {
    return a.counts_ <=> b.counts_;
  }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_ = 0;
};

/// Type of a sequence (or multiset listing) with letters in {1, ..., alphabet_size}.
template <class Int>
TypeVector type_of(std::span<const Int> letters, std::size_t alphabet_size) {
  if (alphabet_size == 0) throw invalid_argument("type_of: alphabet size must be >= 1");
  std::vector<std::uint64_t> counts(alphabet_size, 0);
  for (Int x : letters) {
    if (x < 1 || static_cast<std::uint64_t>(x) > alphabet_size)
      throw invalid_argument("type_of: letter " + std::to_string(x) + " outside {1.." +
                             std::to_string(alphabet_size) + "}");
    ++counts[static_cast<std::size_t>(x) - 1];
  }
  return TypeVector(std::move(counts));
}

template <class Int>
TypeVector type_of(const std::vector<Int>& letters, std::size_t alphabet_size) {
  return type_of(std::span<const Int>(letters), alphabet_size);
}

/// Permutation carrying the sorted block back to the original order:
/// original[perm[i]] == sorted[i] (0-based positions).
class OrderIndex {
 public:
  explicit OrderIndex(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
    std::vector<bool> seen(perm_.size(), false);
    for (auto p : perm_) {
      if (p >= perm_.size() || seen[p]) throw invalid_argument("OrderIndex: not a permutation");
      seen[p] = true;
    }
  }
  std::span<const std::size_t> perm() const noexcept { return perm_; }
  std::size_t size() const noexcept { return perm_.size(); }
  bool is_identity() const {
    for (std::size_t i = 0; i < perm_.size(); ++i)
      if (perm_[i] != i) return false;
    return true;
  }
  friend bool operator==(const OrderIndex&, const OrderIndex&) = default;
  friend auto operator<=>(const OrderIndex& a, const OrderIndex& b) { return a.perm_ <=> b.perm_; }

 private:
  std::vector<std::size_t> perm_;
};

template <class T>
struct Decomposition {
  OrderIndex order;
  std::vector<T> sorted;
};

/// Splits a sequence into its sorted values and the order index. Ties keep
/// their original relative order.
template <class T>
Decomposition<T> decompose(std::span<const T> sequence) {
  if (sequence.empty()) throw invalid_argument("decompose: sequence must be nonempty");
  std::vector<std::size_t> perm(sequence.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t i, std::size_t j) { return sequence[i] < sequence[j]; });
  std::vector<T> sorted(sequence.size());
  for (std::size_t i = 0; i < perm.size(); ++i) sorted[i] = sequence[perm[i]];
  return {OrderIndex(std::move(perm)), std::move(sorted)};
}

template <class T>
Decomposition<T> decompose(const std::vector<T>& sequence) {
  return decompose(std::span<const T>(sequence));
}

template <class T>
std::vector<T> recompose(const OrderIndex& order, std::span<const T> sorted) {
  if (order.size() != sorted.size()) throw invalid_argument("recompose: length mismatch");
  std::vector<T> out(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) out[order.perm()[i]] = sorted[i];
  return out;
}

template <class T>
std::vector<T> recompose(const Decomposition<T>& d) {
  return recompose(d.order, std::span<const T>(d.sorted));
}

/// Number of types of size n over an alphabet of the given size:
/// C(n + |X| - 1, |X| - 1).
inline BigCount type_count(std::uint64_t n, std::uint64_t alphabet_size) {
  if (alphabet_size == 0) throw invalid_argument("type_count: alphabet size must be >= 1");
  return binomial(n + alphabet_size - 1, alphabet_size - 1);
}

// Ranking uses the stars-and-bars picture: a type of size n over |X| letters is
// the (|X|-1)-subset of bar positions {0, ..., n+|X|-2}, bar j sitting at
// k_1 + ... + k_j + (j - 1). The rank is the colexicographic rank of that
// subset in the combinatorial number system: sum_j C(bar_j, j).

inline BigCount type_rank(const TypeVector& t) {
  BigCount rank = 0;
  std::uint64_t prefix = 0;
  for (std::size_t j = 1; j < t.alphabet_size(); ++j) {
    prefix += t.count(j);
    rank += binomial(prefix + j - 1, j);
  }
  return rank;
}

inline TypeVector type_unrank(const BigCount& rank, std::uint64_t n, std::uint64_t alphabet_size) {
  const BigCount total = type_count(n, alphabet_size);
  if (rank < 0 || rank >= total)
    throw invalid_argument("type_unrank: rank " + to_string(rank) + " outside [0, " +
                           to_string(total) + ")");
  std::vector<std::uint64_t> bars(alphabet_size, 0);
  BigCount r = rank;
  std::uint64_t hi = n + alphabet_size - 2;  // largest admissible bar position
  for (std::uint64_t j = alphabet_size - 1; j >= 1; --j) {
    // Largest position b in [j-1, hi] with C(b, j) <= r.
    std::uint64_t lo = j - 1, up = hi;
    while (lo < up) {
      const std::uint64_t mid = lo + (up - lo + 1) / 2;
      if (binomial(mid, j) <= r)
        lo = mid;
      else
        up = mid - 1;
    }
    bars[j] = lo;
    r -= binomial(lo, j);
    hi = lo == 0 ? 0 : lo - 1;
  }
  std::vector<std::uint64_t> counts(alphabet_size, 0);
  std::uint64_t previous = 0;  // k_1 + ... + k_{j-1}
  for (std::uint64_t j = 1; j < alphabet_size; ++j) {
    const std::uint64_t prefix = bars[j] - (j - 1);
    counts[j - 1] = prefix - previous;
    previous = prefix;
  }
  counts[alphabet_size - 1] = n - previous;
  return TypeVector(std::move(counts));
}

namespace detail {

template <class Visitor>
void visit_types(std::vector<std::uint64_t>& counts, std::size_t position, std::uint64_t remaining,
                 Visitor& visit) {
  if (position + 1 == counts.size()) {
    counts[position] = remaining;
    visit(std::span<const std::uint64_t>(counts));
    return;
  }
  for (std::uint64_t c = 0; c <= remaining; ++c) {
    counts[position] = c;
    visit_types(counts, position + 1, remaining - c, visit);
  }
}

}  // namespace detail

/// Visits every type of size n over the alphabet, lexicographic in the counts.
template <class Visitor>
void for_each_type(std::uint64_t n, std::size_t alphabet_size, Visitor&& visit) {
  if (alphabet_size == 0) throw invalid_argument("for_each_type: alphabet size must be >= 1");
  std::vector<std::uint64_t> counts(alphabet_size, 0);
  detail::visit_types(counts, 0, n, visit);
}

namespace detail {

inline double log_multinomial_pmf(std::span<const std::uint64_t> counts, std::span<const double> p) {
  std::uint64_t n = 0;
  double log_prob = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    n += counts[i];
    if (counts[i] == 0) continue;
    if (p[i] <= 0.0) return -INFINITY;
    log_prob += counts[i] * std::log(p[i]) - std::lgamma(static_cast<double>(counts[i]) + 1.0);
  }
  return log_prob + std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace detail

/// Multinomial probability of type t under i.i.d. draws from p.
inline double multinomial_type_pmf(const TypeVector& t, const DiscretePMF& p) {
  if (t.alphabet_size() != p.size())
    throw invalid_argument("multinomial_type_pmf: type and pmf dimensions differ");
  return std::exp(detail::log_multinomial_pmf(t.counts(), p.probs()));
}

inline constexpr double default_enumeration_guard = 1e7;

/// Exact H({X_1..X_n}) = H(K_1, ..., K_|X|) by enumerating all types.
inline double multiset_entropy_exact(std::uint64_t n, const DiscretePMF& p,
                                     double guard = default_enumeration_guard) {
  const BigCount count = type_count(n, p.size());
  if (count > BigCount(static_cast<std::uint64_t>(guard)))
    throw guard_exceeded("multiset_entropy_exact: " + to_string(count) +
                         " types exceed the enumeration guard; use binomial_entropy_asymptotic");
  double h = 0.0;
  for_each_type(n, p.size(), [&](std::span<const std::uint64_t> counts) {
    const double lp = detail::log_multinomial_pmf(counts, p.probs());
    if (std::isfinite(lp)) h -= std::exp(lp) * lp;
  });
  return h * log2e;
}

/// Exact entropy of Binomial(n, p) in bits.
inline double binomial_entropy_exact(std::uint64_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw invalid_argument("binomial_entropy_exact: p outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  const double lnf = std::lgamma(static_cast<double>(n) + 1.0);
  double h = 0.0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double l = lnf - std::lgamma(k + 1.0) - std::lgamma(static_cast<double>(n - k) + 1.0) +
                     k * lp + static_cast<double>(n - k) * lq;
    h -= std::exp(l) * l;
  }
  return h * log2e;
}

/// Leading de Moivre term: 1/2 log2(2 pi e p (1-p) n).
inline double binomial_entropy_asymptotic(std::uint64_t n, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw invalid_argument("binomial_entropy_asymptotic: p must lie strictly inside (0, 1)");
  if (n < 1) throw invalid_argument("binomial_entropy_asymptotic: n >= 1 required");
  return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * p * (1.0 - p) *
                         static_cast<double>(n));
}

/// Explicit distribution over all |X|^n sequences; index = sum (x_i - 1) |X|^(n-i)
/// (first letter most significant).
class SequenceDistribution {
 public:
  SequenceDistribution(std::size_t alphabet_size, std::size_t n, std::vector<double> probs)
      : alphabet_size_(alphabet_size), n_(n), probs_(std::move(probs)) {
    if (alphabet_size_ == 0 || n_ == 0)
      throw invalid_argument("SequenceDistribution: alphabet size and n must be >= 1");
    const double outcomes = std::pow(static_cast<double>(alphabet_size_), static_cast<double>(n_));
    if (outcomes > 1e6) throw guard_exceeded("SequenceDistribution: more than 1e6 outcomes");
    if (probs_.size() != static_cast<std::size_t>(outcomes))
      throw invalid_argument("SequenceDistribution: need |X|^n probabilities");
    const double sum = std::accumulate(probs_.begin(), probs_.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) throw invalid_argument("SequenceDistribution: does not sum to 1");
  }

  static SequenceDistribution iid(const DiscretePMF& p, std::size_t n) {
    const std::size_t a = p.size();
    const double outcomes = std::pow(static_cast<double>(a), static_cast<double>(n));
    if (outcomes > 1e6) throw guard_exceeded("SequenceDistribution::iid: more than 1e6 outcomes");
    std::vector<double> probs(static_cast<std::size_t>(outcomes), 1.0);
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
      std::size_t rest = idx;
      for (std::size_t i = 0; i < n; ++i) {
        probs[idx] *= p.probs()[rest % a];
        rest /= a;
      }
    }
    return SequenceDistribution(a, n, std::move(probs));
  }

  /// Point mass on one sequence.
  static SequenceDistribution deterministic(std::size_t alphabet_size, const std::vector<int>& seq) {
    const double outcomes =
        std::pow(static_cast<double>(alphabet_size), static_cast<double>(seq.size()));
    if (outcomes > 1e6) throw guard_exceeded("SequenceDistribution: more than 1e6 outcomes");
    std::vector<double> probs(static_cast<std::size_t>(outcomes), 0.0);
    std::size_t idx = 0;
    for (int x : seq) {
      if (x < 1 || static_cast<std::size_t>(x) > alphabet_size)
        throw invalid_argument("SequenceDistribution: letter outside alphabet");
      idx = idx * alphabet_size + static_cast<std::size_t>(x - 1);
    }
    probs[idx] = 1.0;
    return SequenceDistribution(alphabet_size, seq.size(), std::move(probs));
  }

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t n() const noexcept { return n_; }
  std::span<const double> probs() const noexcept { return probs_; }

  std::vector<int> sequence(std::size_t index) const {
    std::vector<int> seq(n_);
    for (std::size_t i = n_; i-- > 0;) {
      seq[i] = static_cast<int>(index % alphabet_size_) + 1;
      index /= alphabet_size_;
    }
    return seq;
  }

 private:
  std::size_t alphabet_size_;
  std::size_t n_;
  std::vector<double> probs_;
};

struct EntropyDecomposition {
  double h_sequence = 0.0;   // H((X_1..X_n))
  double h_multiset = 0.0;   // H({X_1..X_n})
  double h_order = 0.0;      // H(J | multiset), J from the stable decomposition
  /// Order entropy if J were uniform over each type class: sum_M P(M) log2 |T(M)|.
  double h_order_exchangeable = 0.0;
  /// h_sequence - h_multiset - h_order_exchangeable; zero for exchangeable sources.
  double residual = 0.0;
  bool exchangeable = false;
};

/// Exhaustive-enumeration check of H(sequence) = H(multiset) + H(order).
inline EntropyDecomposition entropy_decomposition_check(const SequenceDistribution& joint) {
  struct ClassInfo {
    double prob = 0.0;
    std::uint64_t size = 0;
    double pmin = INFINITY, pmax = 0.0;
  };
  std::map<std::vector<std::uint64_t>, ClassInfo> classes;
  EntropyDecomposition out;
  const auto probs = joint.probs();
  for (std::size_t idx = 0; idx < probs.size(); ++idx) {
    const auto seq = joint.sequence(idx);
    const auto t = type_of(seq, joint.alphabet_size());
    auto& info = classes[std::vector<std::uint64_t>(t.counts().begin(), t.counts().end())];
    info.prob += probs[idx];
    ++info.size;
    info.pmin = std::min(info.pmin, probs[idx]);
    info.pmax = std::max(info.pmax, probs[idx]);
    out.h_sequence += plogp(probs[idx]);
  }
  out.exchangeable = true;
  for (const auto& [counts, info] : classes) {
    out.h_multiset += plogp(info.prob);
    out.h_order_exchangeable += info.prob * std::log2(static_cast<double>(info.size));
    if (info.pmax - info.pmin > 1e-12 * std::max(1.0, info.pmax)) out.exchangeable = false;
  }
  // H(J | M): the sequence is a bijective function of (M, J).
  for (std::size_t idx = 0; idx < probs.size(); ++idx) {
    if (probs[idx] <= 0.0) continue;
    const auto t = type_of(joint.sequence(idx), joint.alphabet_size());
    const double pm = classes[std::vector<std::uint64_t>(t.counts().begin(), t.counts().end())].prob;
    out.h_order += probs[idx] * std::log2(pm / probs[idx]);
  }
  out.residual = out.h_sequence - out.h_multiset - out.h_order_exchangeable;
  return out;
}

}  // namespace mslab
