#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mslab/lossless_codec.hpp"

using namespace mslab;

TEST(EnumCode, LengthMatchesCeilLog2) {
  EXPECT_EQ(enum_code_length(3, 2), 2u);   // 4 types
  EXPECT_EQ(enum_code_length(12, 8), 16u);  // 50388 types
  EXPECT_EQ(enum_code_length(5, 1), 0u);
}

TEST(EnumCode, RoundTripAllTypes) {
  for (std::uint64_t A : {2u, 3u, 5u})
    for (std::uint64_t n : {1u, 3u, 6u}) {
      const auto total = type_count(n, A).convert_to<std::size_t>();
      for (std::size_t r = 0; r < total; ++r) {
        const auto t = type_unrank(r, n, A);
        const auto bits = enum_encode(t);
        EXPECT_EQ(bits.size(), enum_code_length(n, A));
        EXPECT_EQ(enum_decode(bits, n, A), t);
      }
    }
}

TEST(EnumCode, RejectsBadStreams) {
  EXPECT_THROW(enum_decode(Bitstream::from_string("1"), 3, 2), decode_error);
  // 3 types for n = 2, |X| = 2 use 2 bits; rank 3 is invalid.
  EXPECT_THROW(enum_decode(Bitstream::from_string("11"), 2, 2), decode_error);
}

TEST(HuffmanCode, KraftAndPrefixProperties) {
  DiscretePMF p({0.1, 0.2, 0.3, 0.4});
  const auto code = build_optimal_code(5, p);
  EXPECT_EQ(code.size(), 56u);
  EXPECT_TRUE(code.is_prefix_free());
  EXPECT_NEAR(code.kraft_sum(), 1.0, 1e-12);
}

TEST(HuffmanCode, ExpectedLengthWithinOneBitOfEntropy) {
  for (auto probs : {std::vector<double>{0.5, 0.5}, std::vector<double>{0.9, 0.1},
                     std::vector<double>{0.2, 0.3, 0.5}}) {
    DiscretePMF p(probs);
    for (std::uint64_t n : {1u, 4u, 9u}) {
      const auto code = build_optimal_code(n, p);
      const double H = multiset_entropy_exact(n, p);
      const double L = code.expected_length(p);
      EXPECT_GE(L, H - 1e-9);
      EXPECT_LT(L, H + 1.0);
    }
  }
}

TEST(HuffmanCode, BinaryHalfSmallCase) {
  // Types of n = 2 under (1/2, 1/2) have probabilities 1/4, 1/2, 1/4.
  const auto code = build_optimal_code(2, DiscretePMF({0.5, 0.5}));
  EXPECT_EQ(code.codeword(1).size(), 1u);
  EXPECT_EQ(code.codeword(0).size(), 2u);
  EXPECT_EQ(code.codeword(2).size(), 2u);
  EXPECT_NEAR(code.expected_length(DiscretePMF({0.5, 0.5})), 1.5, 1e-15);
}

TEST(HuffmanCode, SingleTypeUsesEmptyCodeword) {
  const auto code = build_optimal_code(4, DiscretePMF({1.0}));
  EXPECT_EQ(code.size(), 1u);
  EXPECT_EQ(code.codeword(0), "");
}

TEST(HuffmanCode, GuardExceeded) {
  EXPECT_THROW(build_optimal_code(100, DiscretePMF(std::vector<double>(10, 0.1)), 1e5), guard_exceeded);
}

TEST(MultisetCodec, OrderIsDiscarded) {
  DiscretePMF p({0.2, 0.3, 0.5});
  const auto code = build_optimal_code(6, p);
  const std::vector<int> a{3, 1, 2, 3, 3, 1}, b{1, 1, 2, 3, 3, 3};
  EXPECT_EQ(encode_multiset(a, code), encode_multiset(b, code));
  EXPECT_EQ(decode_multiset(encode_multiset(a, code), code), type_of(b, 3));
}

TEST(MultisetCodec, RandomRoundTrips) {
  DiscretePMF p({0.05, 0.15, 0.3, 0.5});
  const auto code = build_optimal_code(8, p);
  const auto letters = sample(p, 8 * 500, {3, 0});
  for (std::size_t b = 0; b < 500; ++b) {
    std::vector<int> block(letters.begin() + 8 * b, letters.begin() + 8 * (b + 1));
    EXPECT_EQ(decode_multiset(encode_multiset(block, code), code), type_of(block, 4));
  }
}

TEST(MultisetCodec, ErrorsOnBadInput) {
  const auto code = build_optimal_code(3, DiscretePMF({0.5, 0.5}));
  EXPECT_THROW(encode_multiset(std::vector<int>{1, 2}, code), invalid_argument);
  auto bits = encode_multiset(std::vector<int>{1, 2, 2}, code);
  bits.push_back(true);
  EXPECT_THROW(decode_multiset(bits, code), decode_error);
}
