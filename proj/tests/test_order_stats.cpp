#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>
#include <gtest/gtest.h>

#include "mslab/order_stats.hpp"

using namespace mslab;

namespace {
const auto G = ContinuousParent::gaussian(0, 1);
const auto U = ContinuousParent::uniform(-std::sqrt(3.0), std::sqrt(3.0));
const auto E = ContinuousParent::exponential(1);
}  // namespace

TEST(OrderStatSpec, Validates) {
  EXPECT_THROW(OrderStatSpec(G, 3, 0), invalid_argument);
  EXPECT_THROW(OrderStatSpec(G, 3, 4), invalid_argument);
}

TEST(OrderStatCdf, BinomialSumMatchesIncompleteBeta) {
  for (const auto& p : {G, U, E})
    for (unsigned K : {1u, 2u, 7u, 40u})
      for (unsigned r : {1u, (K + 1) / 2, K})
        for (double w : {0.01, 0.2, 0.5, 0.8, 0.99}) {
          const OrderStatSpec s(p, K, r);
          const double x = p.quantile(w);
          EXPECT_NEAR(os_marginal_cdf(s, x), os_marginal_cdf_ibeta(s, x), 1e-12);
        }
}

TEST(OrderStatCdf, ExtremesHaveClosedForms) {
  const double x = 0.4;
  EXPECT_NEAR(os_marginal_cdf({G, 5, 5}, x), std::pow(G.cdf(x), 5), 1e-14);
  EXPECT_NEAR(os_marginal_cdf({G, 5, 1}, x), 1 - std::pow(G.sf(x), 5), 1e-14);
}

TEST(OrderStatPdf, IntegratesToOneAndDifferentiatesCdf) {
  for (unsigned r : {1u, 3u, 6u}) {
    const OrderStatSpec s(G, 6, r);
    auto m = quad::integrate_any([&](double x) { return os_marginal_pdf(s, x); }, -INFINITY, INFINITY);
    EXPECT_NEAR(m.value, 1.0, 1e-10);
    const double x = 0.3, h = 1e-5;
    EXPECT_NEAR(os_marginal_pdf(s, x), (os_marginal_cdf(s, x + h) - os_marginal_cdf(s, x - h)) / (2 * h), 1e-7);
  }
}

TEST(TransitionPdf, SupportAndNormalization) {
  EXPECT_EQ(os_transition_pdf(G, 4, 2, 0.5, 0.5), 0.0);
  EXPECT_EQ(os_transition_pdf(G, 4, 2, 0.5, 0.1), 0.0);
  auto m = quad::integrate_any([](double y) { return os_transition_pdf(G, 4, 2, 0.5, y); }, 0.5, INFINITY);
  EXPECT_NEAR(m.value, 1.0, 1e-10);
  // Exponential: spacing after X_(r) is Exp(K - r).
  EXPECT_NEAR(os_transition_pdf(E, 5, 2, 1.0, 1.7), 3 * std::exp(-3 * 0.7), 1e-14);
  EXPECT_THROW(os_transition_pdf(G, 3, 3, 0, 1), invalid_argument);
}

TEST(Moments, FrozenGaussianOracle) {
  const auto m = os_moments({G, 3, 3});
  EXPECT_NEAR(m.mean, 0.84628437532163443, 1e-10);
  EXPECT_NEAR(m.variance, 0.55946720379736701, 1e-10);
  const auto m21 = os_moments({G, 2, 1});
  EXPECT_NEAR(m21.mean, -1 / std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_NEAR(m21.variance, 1 - 1 / std::numbers::pi, 1e-12);
}

TEST(Moments, ExponentialClosedForm) {
  // var(X_(r:n)) = sum_{j=n-r+1}^{n} 1/j^2 for rate 1.
  for (unsigned n : {4u, 10u})
    for (unsigned r = 1; r <= n; ++r) {
      double v = 0, mu = 0;
      for (unsigned j = n - r + 1; j <= n; ++j) v += 1.0 / (double(j) * j), mu += 1.0 / j;
      const auto m = os_moments({E, n, r});
      EXPECT_NEAR(m.mean, mu, 1e-10);
      EXPECT_NEAR(m.variance, v, 1e-10);
    }
}

TEST(ZeroRateDistortion, CheckPoints) {
  for (const auto& p : {G, U, E}) EXPECT_NEAR(os_avg_variance(p, 1), 1.0, 1e-10);
  EXPECT_NEAR(os_avg_variance(G, 2), 1 - 1 / std::numbers::pi, 1e-10);
  // Uniform closed form agrees with quadrature.
  double q = 0;
  for (unsigned r = 1; r <= 9; ++r) q += os_moments({U, 9, r}).variance;
  EXPECT_NEAR(os_avg_variance(U, 9), q / 9, 1e-12);
  // Exponential: n D_n(0) is the harmonic number H_n.
  double H = 0;
  for (unsigned j = 1; j <= 32; ++j) H += 1.0 / j;
  EXPECT_NEAR(32 * os_avg_variance(E, 32), H, 1e-9);
}

TEST(ZeroRateDistortion, CurveIsMonotone) {
  for (const auto& p : {G, U, E}) EXPECT_TRUE(zero_rate_distortion_curve(p, 40).nonincreasing());
}

TEST(EmpiricalQuantile, IndexConvention) {
  const std::vector<double> s{5, 1, 4, 2, 3};
  EXPECT_EQ(empirical_quantile(s, 0.01), 1.0);
  EXPECT_EQ(empirical_quantile(s, 0.2), 2.0);  // floor(1) + 1 = 2nd smallest
  EXPECT_EQ(empirical_quantile(s, 0.99), 5.0);
  EXPECT_THROW(empirical_quantile(s, 1.0), invalid_argument);
  EXPECT_THROW(empirical_quantile(std::vector<double>{}, 0.5), invalid_argument);
}

TEST(Entropy, FrozenMarginalOracle) {
  EXPECT_NEAR(os_marginal_entropy({G, 3, 1}), 1.6227796442164129, 1e-9);
  EXPECT_NEAR(os_marginal_entropy({G, 3, 2}), 1.4689250876125193, 1e-9);
  EXPECT_NEAR(os_marginal_entropy({G, 1, 1}), G.differential_entropy(), 1e-10);
}

TEST(Entropy, AverageClosedFormMatchesQuadrature) {
  for (const auto& p : {G, U, E})
    for (unsigned K : {1u, 2u, 3u, 6u})
      EXPECT_NEAR(os_avg_marginal_entropy(p, K), os_avg_marginal_entropy_quadrature(p, K), 1e-8) << p.label() << K;
}

TEST(Entropy, UniformMarginalClosedForm) {
  // For Uniform(0,1), h(X_(r:K)) is the entropy of Beta(r, K-r+1).
  const auto u01 = ContinuousParent::uniform(0, 1);
  const unsigned K = 5, r = 2;
  const double a = r, b = K - r + 1;
  const double h_nats = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b) - (a - 1) * boost::math::digamma(a) -
                        (b - 1) * boost::math::digamma(b) + (a + b - 2) * boost::math::digamma(a + b);
  EXPECT_NEAR(os_marginal_entropy({u01, K, r}), h_nats * log2e, 1e-9);
}

TEST(Entropy, ChainRuleClosesOnJoint) {
  for (const auto& p : {G, E, U})
    for (unsigned K : {2u, 3u, 5u}) {
      double sum = os_marginal_entropy({p, K, 1});
      for (unsigned r = 1; r < K; ++r) sum += os_conditional_entropy(p, K, r);
      EXPECT_NEAR(sum, os_joint_entropy(p, K), 1e-7) << p.label() << " K=" << K;
    }
}

TEST(Entropy, ConditionalFrozenOracles) {
  EXPECT_NEAR(os_conditional_entropy(G, 2, 1), 1.3257480647361594, 1e-8);
  // Exponential spacings: X_(r+1) - X_(r) ~ Exp(K - r) regardless of X_(r).
  EXPECT_NEAR(os_conditional_entropy(E, 3, 1), std::log2(std::numbers::e / 2), 1e-9);
  EXPECT_NEAR(os_conditional_entropy(E, 6, 2), std::log2(std::numbers::e / 4), 1e-9);
  EXPECT_THROW(os_conditional_entropy(G, 3, 3), invalid_argument);
}

TEST(Entropy, JointEntropy) {
  EXPECT_NEAR(os_joint_entropy(G, 2), 2 * G.differential_entropy() - 1, 1e-14);
}
