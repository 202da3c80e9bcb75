#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mslab/markov_empirical.hpp"

using namespace mslab;

TEST(KGram, SlidingWindows) {
  const auto m = kgram_multiset(Sequence{0, 1, 1}, 2);
  EXPECT_EQ(m.total(), 2u);
  EXPECT_EQ(m.counts.at(Sequence({0, 1})), 1u);
  EXPECT_EQ(m.counts.at(Sequence({1, 1})), 1u);
}

TEST(KGram, ExtremeLengths) {
  const Sequence s{2, 0, 2, 1, 2};
  const auto one = kgram_multiset(s, 1);
  EXPECT_EQ(one.counts.size(), 3u);
  EXPECT_EQ(one.counts.at(Sequence({2})), 3u);
  const auto full = kgram_multiset(s, s.size());
  ASSERT_EQ(full.counts.size(), 1u);
  EXPECT_EQ(full.counts.begin()->first, s);
  EXPECT_THROW(kgram_multiset(s, 0), invalid_argument);
  EXPECT_THROW(kgram_multiset(s, 6), invalid_argument);
}

TEST(MarkovBound, Formula) {
  EXPECT_EQ(markov_type_count_bound(4, 2, 1), BigCount(25));
  EXPECT_EQ(markov_type_count_bound(3, 2, 2), BigCount(256));
  EXPECT_THROW(markov_type_count_bound(3, 0, 1), invalid_argument);
}

TEST(DistinctCounts, KnownValues) {
  // k = 1 reduces to the number of types; k = n to the number of sequences.
  for (std::size_t n = 1; n <= 10; ++n) {
    EXPECT_EQ(distinct_kgram_multiset_count(n, 2, 1), n + 1);
    EXPECT_EQ(distinct_kgram_multiset_count(n, 2, n), std::uint64_t{1} << n);
  }
  EXPECT_EQ(distinct_kgram_multiset_count(5, 3, 1), 21u);
  // Binary length 3, pairs: only 010 and 101 collide.
  EXPECT_EQ(distinct_kgram_multiset_count(3, 2, 2), 7u);
}

TEST(DistinctCounts, MonotoneInKAndBelowMarkovBound) {
  for (std::size_t n = 2; n <= 12; ++n) {
    std::uint64_t prev = 0;
    for (std::size_t k = 1; k <= std::min<std::size_t>(n, 4); ++k) {
      const auto c = distinct_kgram_multiset_count(n, 2, k);
      EXPECT_GE(c, prev);
      prev = c;
      if (k >= 2) {
        EXPECT_LE(BigCount(c), 2 * markov_type_count_bound(n, 2, static_cast<unsigned>(k)));
      }
    }
  }
  EXPECT_THROW(distinct_kgram_multiset_count(30, 2, 2, 1024), guard_exceeded);
}

TEST(EntropyTable, RepeatedSequenceIsZero) {
  const std::vector<Sequence> corpus(10, Sequence{0, 1, 0, 0, 1});
  const auto t = empirical_entropy_table(corpus, {2, 3});
  for (const auto& r : t.rows) EXPECT_EQ(r.entropy_bits, 0.0);
  EXPECT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[1].k, 3u);
  EXPECT_EQ(t.rows[2].k, 2u);
}

TEST(EntropyTable, AllBinarySequences) {
  std::vector<Sequence> corpus;
  for (int s = 0; s < 32; ++s) {
    Sequence q;
    for (int i = 4; i >= 0; --i) q.push_back((s >> i) & 1);
    corpus.push_back(q);
  }
  const auto t = empirical_entropy_table(corpus, {2, 3, 4});
  EXPECT_NEAR(t.rows.front().entropy_bits, 5.0, 1e-12);
  EXPECT_NEAR(t.rows.front().bound_bits, 5.0, 1e-12);
  // Multiset row is the entropy of Binomial(5, 1/2).
  double hb = 0;
  for (int w = 0; w <= 5; ++w) {
    const double p = std::tgamma(6.0) / (std::tgamma(w + 1.0) * std::tgamma(6.0 - w)) / 32;
    hb -= p * std::log2(p);
  }
  EXPECT_NEAR(t.rows.back().entropy_bits, hb, 1e-12);
  EXPECT_NEAR(t.rows.back().bound_bits, std::log2(6.0), 1e-12);
  EXPECT_TRUE(t.monotone());
  // With every sequence present, entropies equal the log of the distinct counts.
  for (const auto& r : t.rows) {
    EXPECT_TRUE(r.bound_exact);
    EXPECT_LE(r.entropy_bits, r.bound_bits + 1e-12);
  }
  EXPECT_NEAR(t.rows[3].bound_bits, std::log2(double(distinct_kgram_multiset_count(5, 2, 2))), 1e-12);
}

TEST(EntropyTable, RejectsBadCorpora) {
  EXPECT_THROW(empirical_entropy_table({}, {}), invalid_argument);
  EXPECT_THROW(empirical_entropy_table({Sequence{0, 1}, Sequence{1}}, {}), invalid_argument);
}

TEST(Corpus, Parse) {
  std::istringstream in("0 1 1\n\n  2 0 1  \n");
  const auto c = parse_corpus(in);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[1], (Sequence{2, 0, 1}));
  std::istringstream bad("0 x 1\n");
  EXPECT_THROW(parse_corpus(bad), invalid_argument);
}
