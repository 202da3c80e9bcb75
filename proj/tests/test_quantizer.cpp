#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mslab/quantizer.hpp"

using namespace mslab;

namespace {
const auto G = ContinuousParent::gaussian(0, 1);
}

TEST(Codebook, Validation) {
  EXPECT_THROW(Codebook(2, {}, CodebookSpace::unordered), invalid_argument);
  EXPECT_THROW(Codebook(2, {{1.0}}, CodebookSpace::unordered), invalid_argument);
  EXPECT_THROW(Codebook(2, {{2.0, 1.0}}, CodebookSpace::ordered), invalid_argument);
  Codebook ok(2, {{1.0, 2.0}}, CodebookSpace::ordered);
  EXPECT_EQ(ok.size(), 1u);
}

TEST(Codebook, OrderedQuantizeSortsInput) {
  Codebook cb(2, {{-1.0, 0.0}, {0.0, 1.0}}, CodebookSpace::ordered);
  const std::vector<double> x{0.9, 0.1};
  EXPECT_EQ(cb.quantize(x), (std::vector<double>{0.0, 1.0}));
}

TEST(LloydMax, OneBitGaussian) {
  const auto q = lloyd_max_1d(G, 1);
  const double a = std::sqrt(2 / std::numbers::pi);
  ASSERT_EQ(q.codebook.size(), 2u);
  EXPECT_NEAR(q.levels()[0], -a, 1e-9);
  EXPECT_NEAR(q.levels()[1], a, 1e-9);
  EXPECT_NEAR(q.distortion, 1 - 2 / std::numbers::pi, 1e-10);
}

TEST(LloydMax, ZeroBitsIsTheMean) {
  const auto e = ContinuousParent::exponential(2);
  const auto q = lloyd_max_1d(e, 0);
  EXPECT_NEAR(q.levels()[0], 0.5, 1e-10);
  EXPECT_NEAR(q.distortion, 0.25, 1e-10);
}

TEST(LloydMax, FrozenMultiLevelOracle) {
  const auto q2 = lloyd_max_1d(G, 2);
  EXPECT_NEAR(q2.levels()[2], 0.45278003, 1e-6);
  EXPECT_NEAR(q2.levels()[3], 1.51041761, 1e-6);
  EXPECT_NEAR(q2.distortion, 0.1174818478293293, 1e-8);
  const auto q3 = lloyd_max_1d(G, 3);
  EXPECT_NEAR(q3.distortion, 0.03454776078850373, 1e-8);
}

TEST(LloydMax, SymmetricAndMonotone) {
  for (unsigned R : {1u, 2u, 3u}) {
    const auto q = lloyd_max_1d(G, R);
    const auto lv = q.levels();
    for (std::size_t i = 0; i < lv.size(); ++i) EXPECT_NEAR(lv[i], -lv[lv.size() - 1 - i], 1e-8);
    for (std::size_t i = 1; i < q.history.size(); ++i) EXPECT_LE(q.history[i], q.history[i - 1] + 1e-14);
  }
}

TEST(LloydMax, IterationCapThrows) {
  LloydOptions o;
  o.max_iterations = 1;
  o.rel_tol = 0.0;
  EXPECT_THROW(lloyd_max_1d(G, 3, o), convergence_error);
}

TEST(LloydMax, GenericDensityOnBoundedSupport) {
  const auto q = lloyd_max_1d([](double) { return 1.0; }, 0.0, 1.0, {0.1, 0.2, 0.3, 0.9});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(q.levels()[i], (2 * i + 1) / 8.0, 1e-4);
  EXPECT_NEAR(q.distortion, 1.0 / (12 * 16), 1e-9);
}

TEST(OSQuantizer, ZeroAndOneBit) {
  OSQuantizerOptions o;
  o.samples = 200000;
  const auto q0 = os_quantizer_2d_gaussian(0, o);
  EXPECT_NEAR(q0.per_letter_distortion, 1 - 1 / std::numbers::pi, 1e-3);
  const auto q1 = os_quantizer_2d_gaussian(1, o);
  EXPECT_NEAR(q1.total_distortion, 2 - 4 / std::numbers::pi, 2e-3);
  for (const auto& p : q1.codebook.points) EXPECT_LE(p[0], p[1]);
  EXPECT_LE(q1.total_distortion, q0.total_distortion);
}

TEST(OSQuantizer, GridDistortionOfKnownCodebook) {
  // Two points split along x1 + x2 = 0: the rotated-coordinate solution.
  const double c = 2 / std::sqrt(std::numbers::pi);
  Codebook cb(2, {{-c, 0.0}, {0.0, c}}, CodebookSpace::ordered);
  EXPECT_NEAR(os_gaussian_pair_distortion(cb), 2 - 4 / std::numbers::pi, 1e-6);
  Codebook centroid(2, {{-1 / std::sqrt(std::numbers::pi), 1 / std::sqrt(std::numbers::pi)}}, CodebookSpace::ordered);
  EXPECT_NEAR(os_gaussian_pair_distortion(centroid), 2 - 2 / std::numbers::pi, 1e-7);
}

TEST(OSQuantizer, RejectsRate) {
  EXPECT_THROW(os_quantizer_2d_gaussian(4), invalid_argument);
}

TEST(Interchange, ProductCodebooks) {
  const double a = std::sqrt(2 / std::numbers::pi);
  const std::vector<double> lv{-a, a};
  for (unsigned K = 1; K <= 4; ++K) {
    const auto cert = interchange_check(product_codebook(lv, K));
    EXPECT_TRUE(cert.symmetric) << K;
    EXPECT_EQ(cert.orbits.size(), K + 1);  // orbits indexed by the number of +a coordinates
  }
}

TEST(Interchange, OffDiagonalPointFails) {
  const auto cert = interchange_check(Codebook(2, {{1.0, 2.0}}, CodebookSpace::unordered));
  EXPECT_FALSE(cert.symmetric);
  EXPECT_EQ(cert.violating_permutation, (std::vector<unsigned>{1, 0}));
}

TEST(Interchange, DiagonalCodebookPasses) {
  const auto cert = interchange_check(Codebook(3, {{1, 1, 1}, {-2, -2, -2}}, CodebookSpace::unordered));
  EXPECT_TRUE(cert.symmetric);
  EXPECT_EQ(cert.orbits.size(), 2u);
}

TEST(SchemeLedger, KOneIsTrivial) {
  const auto L = scheme_ledger(1);
  for (const auto& r : L.rows) {
    EXPECT_NEAR(r.rate_reduction_bits, 0.0, 1e-15);
    ASSERT_TRUE(r.distortion_factor.has_value());
    EXPECT_NEAR(*r.distortion_factor, 1.0, 1e-15);
  }
}

TEST(SchemeLedger, Identities) {
  for (unsigned K = 1; K <= 20; ++K) {
    const auto L = scheme_ledger(K);
    EXPECT_EQ(L.rows[0].rate_reduction_bits, 0.0);
    EXPECT_EQ(*L.rows[0].distortion_factor, 1.0);
    EXPECT_EQ(L.rows[3].rate_reduction_bits, L.rows[2].rate_reduction_bits);
    for (const auto& r : L.rows) EXPECT_GE(r.rate_reduction_bits, 0.0);
    EXPECT_EQ(L.g_available, K <= 2);
    // Scheme 2 is the gap between the parent and average marginal entropies.
    EXPECT_NEAR(L.rows[1].rate_reduction_bits, G.differential_entropy() - os_avg_marginal_entropy(G, K), 1e-12);
  }
  EXPECT_NEAR(scheme3_rate_reduction(2), 0.5, 1e-15);
  EXPECT_NEAR(scheme2_rate_reduction(2), 1 - 0.5 * std::numbers::log2e, 1e-15);
}

TEST(SchemeLedger, HexagonGain) {
  EXPECT_NEAR(*space_filling_gain(2), 3 * std::sqrt(3.0) / 5, 1e-15);
  EXPECT_FALSE(space_filling_gain(3).has_value());
  EXPECT_NEAR(*scheme_ledger(2).rows[3].distortion_factor, 5 / (3 * std::sqrt(3.0)), 1e-15);
}

TEST(HighRate, SchemesMatchPredictions) {
  const auto r = high_rate_validate(G, 2, 1.0 / 64, 2000000, {5, 0});
  EXPECT_NEAR(r.schemes[0].rate_bits, r.schemes[0].predicted_rate, 0.05);
  EXPECT_NEAR(r.schemes[1].rate_bits, r.schemes[1].predicted_rate, 0.05);
  EXPECT_NEAR(r.schemes[2].rate_bits, r.schemes[2].predicted_rate, 0.05);
  EXPECT_NEAR(r.schemes[0].mse, r.predicted_mse, 0.05 * r.predicted_mse);
  EXPECT_EQ(r.schemes[0].mse, r.schemes[2].mse);
}

TEST(HighRate, UniformParentKThree) {
  const auto u = ContinuousParent::uniform(0, 1);
  const auto r = high_rate_validate(u, 3, 1.0 / 128, 600000, {6, 0});
  for (const auto& s : r.schemes) EXPECT_NEAR(s.rate_bits, s.predicted_rate, 0.05) << s.scheme;
}
