#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "mslab/multiset_core.hpp"

using namespace mslab;

TEST(TypeOf, CountsLetters) {
  const std::vector<int> seq{2, 1, 2, 3, 2};
  const auto t = type_of(seq, 3);
  EXPECT_EQ(t.count(1), 1u);
  EXPECT_EQ(t.count(2), 3u);
  EXPECT_EQ(t.count(3), 1u);
  EXPECT_EQ(t.n(), 5u);
  EXPECT_THROW(type_of(std::vector<int>{0, 1}, 3), invalid_argument);
  EXPECT_THROW(type_of(std::vector<int>{4}, 3), invalid_argument);
}

TEST(Decompose, RoundTripAndStability) {
  const std::vector<int> seq{3, 1, 3, 2, 1};
  const auto d = decompose(seq);
  EXPECT_EQ(d.sorted, (std::vector<int>{1, 1, 2, 3, 3}));
  EXPECT_EQ(recompose(d), seq);
  // Equal letters keep their original relative order.
  EXPECT_LT(d.order.perm()[0], d.order.perm()[1]);
  EXPECT_THROW(decompose(std::vector<int>{}), invalid_argument);
}

TEST(Decompose, RandomRoundTrips) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng() % 20);
    for (auto& x : v) x = static_cast<double>(rng() % 5);
    const auto d = decompose(v);
    EXPECT_TRUE(std::is_sorted(d.sorted.begin(), d.sorted.end()));
    EXPECT_EQ(recompose(d), v);
  }
}

TEST(TypeCount, SmallValues) {
  EXPECT_EQ(type_count(3, 2), BigCount(4));
  EXPECT_EQ(type_count(12, 8), BigCount(50388));
  EXPECT_EQ(type_count(0, 5), BigCount(1));
  EXPECT_EQ(type_count(7, 1), BigCount(1));
  EXPECT_THROW(type_count(3, 0), invalid_argument);
}

TEST(TypeRank, BijectionOnSmallAlphabets) {
  for (std::uint64_t A : {1u, 2u, 3u, 4u}) {
    for (std::uint64_t n : {0u, 1u, 4u, 6u}) {
      const auto total = type_count(n, A).convert_to<std::size_t>();
      std::set<std::vector<std::uint64_t>> seen;
      for (std::size_t r = 0; r < total; ++r) {
        const auto t = type_unrank(r, n, A);
        EXPECT_EQ(t.n(), n);
        EXPECT_EQ(type_rank(t), BigCount(r));
        seen.insert({t.counts().begin(), t.counts().end()});
      }
      EXPECT_EQ(seen.size(), total);
      EXPECT_THROW(type_unrank(total, n, A), invalid_argument);
    }
  }
}

TEST(TypeRank, LargeRoundTrip) {
  std::vector<std::uint64_t> c(40);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (i * 37) % 11;
  TypeVector t(c);
  EXPECT_EQ(type_unrank(type_rank(t), t.n(), t.alphabet_size()), t);
}

TEST(ForEachType, VisitsEveryTypeOnce) {
  std::size_t visits = 0;
  for_each_type(5, 3, [&](std::span<const std::uint64_t> c) {
    std::uint64_t s = 0;
    for (auto x : c) s += x;
    EXPECT_EQ(s, 5u);
    ++visits;
  });
  EXPECT_EQ(visits, 21u);
}

TEST(MultisetEntropy, FrozenOracle) {
  // Brute-force over all 3^4 sequences at 30-digit precision.
  EXPECT_NEAR(multiset_entropy_exact(4, DiscretePMF({0.2, 0.3, 0.5})), 3.3890118109935186, 1e-12);
  EXPECT_NEAR(multiset_entropy_exact(2, DiscretePMF({0.5, 0.5})), 1.5, 1e-14);
  EXPECT_THROW(multiset_entropy_exact(100, DiscretePMF(std::vector<double>(20, 0.05)), 1e6), guard_exceeded);
}

TEST(BinomialEntropy, FrozenOracleAndAsymptotics) {
  EXPECT_NEAR(binomial_entropy_exact(100, 0.5), 4.3690114092230158, 1e-12);
  EXPECT_NEAR(binomial_entropy_exact(400, 0.5), 5.3690229248773931, 1e-12);
  EXPECT_NEAR(binomial_entropy_asymptotic(100, 0.5), 4.3690236800680035, 1e-12);
  EXPECT_NEAR(binomial_entropy_exact(100, 0.5), multiset_entropy_exact(100, DiscretePMF({0.5, 0.5})), 1e-10);
  EXPECT_THROW(binomial_entropy_asymptotic(10, 0.0), invalid_argument);
}

TEST(EntropyDecomposition, IidSourcesAreExchangeable) {
  for (auto probs : {std::vector<double>{0.3, 0.7}, std::vector<double>{0.2, 0.5, 0.3}}) {
    DiscretePMF p(probs);
    for (std::size_t n = 1; n <= 5; ++n) {
      const auto d = entropy_decomposition_check(SequenceDistribution::iid(p, n));
      EXPECT_NEAR(d.h_sequence, n * p.entropy(), 1e-10);
      EXPECT_NEAR(d.h_sequence, d.h_multiset + d.h_order, 1e-10);
      EXPECT_NEAR(d.h_order, d.h_order_exchangeable, 1e-10);
      EXPECT_NEAR(d.residual, 0.0, 1e-10);
      EXPECT_TRUE(d.exchangeable);
    }
  }
}

TEST(EntropyDecomposition, NonExchangeableSource) {
  // Mass only on 12 and 21 with unequal weights.
  SequenceDistribution joint(2, 2, {0.0, 0.9, 0.1, 0.0});
  const auto d = entropy_decomposition_check(joint);
  EXPECT_FALSE(d.exchangeable);
  EXPECT_NEAR(d.h_multiset, 0.0, 1e-15);
  EXPECT_NEAR(d.h_sequence, d.h_multiset + d.h_order, 1e-12);
  EXPECT_GT(std::abs(d.residual), 0.1);
}

TEST(EntropyDecomposition, DeterministicSequence) {
  const auto d = entropy_decomposition_check(SequenceDistribution::deterministic(3, {1, 3, 2}));
  EXPECT_EQ(d.h_sequence, 0.0);
  EXPECT_EQ(d.h_multiset, 0.0);
  EXPECT_EQ(d.h_order, 0.0);
}
