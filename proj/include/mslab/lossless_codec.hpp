#pragma once

// Lossless codecs for multisets drawn from a known distribution: a fixed-length
// enumerative code over the type alphabet and a Huffman code over types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "mslab/bigcount.hpp"
#include "mslab/bitstream.hpp"
#include "mslab/distributions.hpp"
#include "mslab/error.hpp"
#include "mslab/multiset_core.hpp"

namespace mslab {

/// ceil(log2 C(n + |X| - 1, |X| - 1)): bits used by the enumerative code.
inline std::uint64_t enum_code_length(std::uint64_t n, std::uint64_t alphabet_size) {
  return ceil_log2(type_count(n, alphabet_size));
}

inline Bitstream enum_encode(const TypeVector& t) {
  Bitstream out;
  out.append_big(type_rank(t), enum_code_length(t.n(), t.alphabet_size()));
  return out;
}

inline TypeVector enum_decode(const Bitstream& bits, std::uint64_t n, std::uint64_t alphabet_size) {
  const std::uint64_t width = enum_code_length(n, alphabet_size);
  if (bits.size() != width)
    throw decode_error("enum_decode: expected " + std::to_string(width) + " bits, got " +
                       std::to_string(bits.size()));
  BitReader reader(bits);
  const BigCount rank = reader.read_big(width);
  if (rank >= type_count(n, alphabet_size))
    throw decode_error("enum_decode: rank " + to_string(rank) + " is not a valid type");
  return type_unrank(rank, n, alphabet_size);
}

/// Prefix code over the type alphabet K(X, n), indexed by type rank.
class PrefixCode {
 public:
  PrefixCode(std::uint64_t n, std::size_t alphabet_size, std::vector<std::string> codewords)
      : n_(n), alphabet_size_(alphabet_size), codewords_(std::move(codewords)) {
    for (std::size_t r = 0; r < codewords_.size(); ++r) lookup_.emplace(codewords_[r], r);
    if (lookup_.size() != codewords_.size())
      throw invalid_argument("PrefixCode: duplicate codewords");
  }

  std::uint64_t n() const noexcept { return n_; }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t size() const noexcept { return codewords_.size(); }
  const std::string& codeword(std::size_t rank) const { return codewords_.at(rank); }

  double kraft_sum() const {
    double sum = 0.0;
    for (const auto& w : codewords_) sum += std::ldexp(1.0, -static_cast<int>(w.size()));
    return sum;
  }

  bool is_prefix_free() const {
    // In lexicographic order a prefix sorts immediately before some extension of it.
    std::vector<std::string> sorted(codewords_);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
      if (sorted[i + 1].compare(0, sorted[i].size(), sorted[i]) == 0) return false;
    return true;
  }

  double expected_length(const DiscretePMF& p) const {
    double length = 0.0;
    for (std::size_t r = 0; r < codewords_.size(); ++r)
      length += multinomial_type_pmf(type_unrank(r, n_, alphabet_size_), p) *
                static_cast<double>(codewords_[r].size());
    return length;
  }

  /// Decodes one codeword starting at the reader's position.
  std::size_t decode_one(BitReader& reader) const {
    std::string prefix;
    while (true) {
      if (auto it = lookup_.find(prefix); it != lookup_.end()) return it->second;
      if (prefix.size() >= max_length()) throw decode_error("PrefixCode: invalid codeword");
      prefix.push_back(reader.read_bit() ? '1' : '0');
    }
  }

  std::size_t max_length() const {
    std::size_t m = 0;
    for (const auto& w : codewords_) m = std::max(m, w.size());
    return m;
  }

 private:
  std::uint64_t n_;
  std::size_t alphabet_size_;
  std::vector<std::string> codewords_;
  std::map<std::string, std::size_t> lookup_;
};

/// Huffman code over all types of size n under the multinomial distribution.
/// Ties merge the node holding the lowest type rank first.
inline PrefixCode build_optimal_code(std::uint64_t n, const DiscretePMF& p,
                                     double guard = default_enumeration_guard) {
  const BigCount count_big = type_count(n, p.size());
  if (count_big > BigCount(static_cast<std::uint64_t>(guard)))
    throw guard_exceeded("build_optimal_code: " + to_string(count_big) +
                         " types exceed the enumeration guard");
  const auto count = count_big.convert_to<std::size_t>();
  if (count == 1) return PrefixCode(n, p.size(), {""});

  struct Node {
    double prob;
    std::size_t min_rank;
    std::size_t id;
  };
  auto later = [](const Node& a, const Node& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.min_rank > b.min_rank;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(later)> heap(later);
  std::vector<std::size_t> parent(2 * count - 1, 0);
  std::vector<char> branch(2 * count - 1, 0);
  for (std::size_t r = 0; r < count; ++r)
    heap.push({multinomial_type_pmf(type_unrank(r, n, p.size()), p), r, r});
  std::size_t next_id = count;
  while (heap.size() > 1) {
    const Node zero = heap.top();
    heap.pop();
    const Node one = heap.top();
    heap.pop();
    parent[zero.id] = parent[one.id] = next_id;
    branch[zero.id] = '0';
    branch[one.id] = '1';
    heap.push({zero.prob + one.prob, std::min(zero.min_rank, one.min_rank), next_id++});
  }
  const std::size_t root = next_id - 1;
  std::vector<std::string> codewords(count);
  for (std::size_t r = 0; r < count; ++r) {
    std::string w;
    for (std::size_t id = r; id != root; id = parent[id]) w.push_back(branch[id]);
    std::reverse(w.begin(), w.end());
    codewords[r] = std::move(w);
  }
  return PrefixCode(n, p.size(), std::move(codewords));
}

/// Encodes the multiset of letters in `sequence` (order discarded).
template <class Int>
Bitstream encode_multiset(std::span<const Int> sequence, const PrefixCode& code) {
  if (sequence.size() != code.n())
    throw invalid_argument("encode_multiset: sequence length " + std::to_string(sequence.size()) +
                           " differs from code block length " + std::to_string(code.n()));
  const auto t = type_of(sequence, code.alphabet_size());
  Bitstream out;
  for (char c : code.codeword(type_rank(t).template convert_to<std::size_t>())) out.push_back(c == '1');
  return out;
}

template <class Int>
Bitstream encode_multiset(const std::vector<Int>& sequence, const PrefixCode& code) {
  return encode_multiset(std::span<const Int>(sequence), code);
}

inline TypeVector decode_multiset(const Bitstream& bits, const PrefixCode& code) {
  BitReader reader(bits);
  const std::size_t rank = code.decode_one(reader);
  if (!reader.at_end()) throw decode_error("decode_multiset: trailing bits after codeword");
  return type_unrank(rank, code.n(), code.alphabet_size());
}

}  // namespace mslab
