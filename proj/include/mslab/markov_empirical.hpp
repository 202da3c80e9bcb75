#pragma once

// The sequence/multiset continuum: multisets of sliding k-grams, Markov type
// count bounds, brute-force counts of distinct k-gram multisets, and plug-in
// entropy tables over a corpus of equal-length sequences.
//
// k-grams are overlapping windows: a length-n sequence has n - k + 1 of them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "mslab/bigcount.hpp"
#include "mslab/distributions.hpp"
#include "mslab/error.hpp"
#include "mslab/multiset_core.hpp"

namespace mslab {

using Letter = std::int64_t;
using Sequence = std::vector<Letter>;

struct KGramMultiset {
  std::size_t k = 1;
  std::map<Sequence, std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [g, c] : counts) t += c;
    return t;
  }
  friend bool operator==(const KGramMultiset&, const KGramMultiset&) = default;
  friend auto operator<=>(const KGramMultiset&, const KGramMultiset&) = default;
};

inline KGramMultiset kgram_multiset(std::span<const Letter> seq, std::size_t k) {
  if (k < 1 || k > seq.size())
    throw invalid_argument("kgram_multiset: need 1 <= k <= n (k=" + std::to_string(k) +
                           ", n=" + std::to_string(seq.size()) + ")");
  KGramMultiset m;
  m.k = k;
  for (std::size_t i = 0; i + k <= seq.size(); ++i)
    ++m.counts[Sequence(seq.begin() + static_cast<std::ptrdiff_t>(i),
                        seq.begin() + static_cast<std::ptrdiff_t>(i + k))];
  return m;
}

inline KGramMultiset kgram_multiset(const Sequence& seq, std::size_t k) {
  return kgram_multiset(std::span<const Letter>(seq), k);
}

/// (n + 1)^{|X|^l}: the count bound on Markov types of order l.
inline BigCount markov_type_count_bound(std::uint64_t n, std::uint64_t alphabet_size, unsigned l) {
  if (alphabet_size < 1 || l < 1) throw invalid_argument("markov_type_count_bound: |X|, l >= 1 required");
  const BigCount cells = pow_big(BigCount(alphabet_size), l);
  if (cells > BigCount(std::uint64_t{1} << 32))
    throw guard_exceeded("markov_type_count_bound: exponent |X|^l too large");
  return pow_big(BigCount(n + 1), cells.convert_to<std::uint64_t>());
}

inline constexpr std::uint64_t default_sequence_guard = std::uint64_t{1} << 22;

/// Number of distinct k-gram multisets over all |X|^n sequences, by enumeration.
inline std::uint64_t distinct_kgram_multiset_count(std::size_t n, std::size_t alphabet_size, std::size_t k,
                                                   std::uint64_t guard = default_sequence_guard) {
  if (n < 1 || alphabet_size < 1) throw invalid_argument("distinct_kgram_multiset_count: n, |X| >= 1");
  if (k < 1 || k > n) throw invalid_argument("distinct_kgram_multiset_count: need 1 <= k <= n");
  const double log_total = n * std::log2(static_cast<double>(alphabet_size));
  if (log_total > std::log2(static_cast<double>(guard)))
    throw guard_exceeded("distinct_kgram_multiset_count: |X|^n exceeds the enumeration guard");
  std::uint64_t total = 1, cells = 1;
  for (std::size_t i = 0; i < n; ++i) total *= alphabet_size;
  for (std::size_t i = 0; i < k; ++i) cells *= alphabet_size;
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<std::uint32_t> digits(n), counts(cells);
  for (std::uint64_t s = 0; s < total; ++s) {
    std::uint64_t v = s;
    for (std::size_t i = n; i-- > 0;) digits[i] = static_cast<std::uint32_t>(v % alphabet_size), v /= alphabet_size;
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i + k <= n; ++i) {
      std::uint64_t g = 0;
      for (std::size_t j = 0; j < k; ++j) g = g * alphabet_size + digits[i + j];
      ++counts[g];
    }
    seen.insert(counts);
  }
  return seen.size();
}

// ---------------------------------------------------------------------------
// Entropy tables

struct EntropyRow {
  std::string label;       // "sequence", "<k>-gram multiset" or "multiset"
  std::size_t k = 0;       // gram length; n for the sequence row, 1 for the multiset row
  double entropy_bits = 0.0;
  double bound_bits = 0.0;  // log2 of the number of possible representations
  bool bound_exact = false;  // true when the count was enumerated
};

struct EntropyTable {
  std::size_t n = 0;
  std::size_t alphabet_size = 0;
  std::size_t corpus_size = 0;
  std::vector<EntropyRow> rows;

  /// Rows nonincreasing from the sequence row down to the multiset row.
  bool monotone(double slack = 1e-12) const {
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].entropy_bits > rows[i - 1].entropy_bits + slack) return false;
    return true;
  }
  bool within_bounds(double slack = 1e-9) const {
    for (const auto& r : rows)
      if (r.entropy_bits > r.bound_bits + slack) return false;
    return true;
  }
};

/// One sequence per line, integer letters separated by whitespace; blank lines skipped.
inline std::vector<Sequence> parse_corpus(std::istream& in) {
  std::vector<Sequence> corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    Sequence s;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      Letter v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size())
        throw invalid_argument("corpus line " + std::to_string(lineno) + ": '" + tok + "' is not an integer");
      s.push_back(v);
    }
    if (!s.empty()) corpus.push_back(std::move(s));
  }
  return corpus;
}

namespace detail {

template <class Key>
double plugin_entropy(const std::vector<Key>& keys) {
  std::map<Key, std::size_t> freq;
  for (const auto& k : keys) ++freq[k];
  double h = 0.0;
  const double n = static_cast<double>(keys.size());
  for (const auto& [k, c] : freq) h += plogp(c / n);
  return h;
}

}  // namespace detail

/// Plug-in entropies of the corpus under each representation: the full
/// sequence, the multiset of k-grams for each requested 1 < k < n (longest
/// first), and the plain multiset. The alphabet is the set of letters seen.
inline EntropyTable empirical_entropy_table(const std::vector<Sequence>& corpus, std::vector<std::size_t> grams,
                                            std::uint64_t guard = default_sequence_guard) {
  if (corpus.empty()) throw invalid_argument("empirical_entropy_table: empty corpus");
  const std::size_t n = corpus.front().size();
  if (n == 0) throw invalid_argument("empirical_entropy_table: empty sequences");
  std::set<Letter> letters;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].size() != n)
      throw invalid_argument("empirical_entropy_table: sequence " + std::to_string(i + 1) + " has length " +
                             std::to_string(corpus[i].size()) + ", expected " + std::to_string(n));
    letters.insert(corpus[i].begin(), corpus[i].end());
  }
  for (auto g : grams)
    if (g < 1) throw invalid_argument("empirical_entropy_table: gram lengths must be >= 1");
  const std::size_t A = letters.size();
  std::map<Letter, std::size_t> index;
  for (Letter l : letters) index.emplace(l, index.size());

  EntropyTable table;
  table.n = n;
  table.alphabet_size = A;
  table.corpus_size = corpus.size();

  const bool enumerable = n * std::log2(static_cast<double>(std::max<std::size_t>(A, 1))) <=
                          std::log2(static_cast<double>(guard));
  const double seq_bound = n * std::log2(static_cast<double>(A));

  auto bound_for = [&](std::size_t k, EntropyRow& row) {
    if (k == n) {
      row.bound_bits = seq_bound;
      row.bound_exact = true;
      return;
    }
    if (enumerable) {
      row.bound_bits = std::log2(static_cast<double>(distinct_kgram_multiset_count(n, A, k, guard)));
      row.bound_exact = true;
      return;
    }
    const double cells = std::pow(static_cast<double>(A), static_cast<double>(k));
    double analytic = seq_bound;
    if (cells < 1e15)
      analytic = std::min(analytic, log2_big(type_count(n - k + 1, static_cast<std::uint64_t>(cells))));
    row.bound_bits = analytic;
  };

  {
    EntropyRow row{"sequence", n, detail::plugin_entropy(corpus), 0.0, false};
    bound_for(n, row);
    table.rows.push_back(row);
  }
  std::sort(grams.begin(), grams.end(), std::greater<>());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  for (auto k : grams) {
    if (k <= 1 || k >= n) continue;
    std::vector<KGramMultiset> reps;
    reps.reserve(corpus.size());
    for (const auto& s : corpus) reps.push_back(kgram_multiset(s, k));
    EntropyRow row{std::to_string(k) + "-gram multiset", k, detail::plugin_entropy(reps), 0.0, false};
    bound_for(k, row);
    table.rows.push_back(row);
  }
  {
    std::vector<std::vector<std::uint64_t>> types;
    for (const auto& s : corpus) {
      std::vector<std::uint64_t> c(A, 0);
      for (Letter l : s) ++c[index.at(l)];
      types.push_back(std::move(c));
    }
    EntropyRow row{"multiset", 1, detail::plugin_entropy(types), 0.0, true};
    row.bound_bits = log2_big(type_count(n, A));
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace mslab
