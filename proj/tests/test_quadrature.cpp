#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mslab/quadrature.hpp"

using namespace mslab;

TEST(Quadrature, PolynomialIsExact) {
  auto r = quad::integrate([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0);
  EXPECT_NEAR(r.value, 9.0 - 3.0 + 3.0, 1e-13);
}

TEST(Quadrature, EndpointSingularity) {
  // int_0^1 -log x dx = 1
  auto r = quad::integrate([](double x) { return -std::log(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0, 1e-10);
}

TEST(Quadrature, GaussianOverRealLine) {
  auto r = quad::integrate_any(
      [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); },
      -INFINITY, INFINITY);
  EXPECT_NEAR(r.value, 1.0, 1e-11);
}

TEST(Quadrature, HalfLines) {
  auto upper = quad::integrate_any([](double x) { return std::exp(-x); }, 0.0, INFINITY);
  EXPECT_NEAR(upper.value, 1.0, 1e-11);
  auto lower = quad::integrate_any([](double x) { return std::exp(x); }, -INFINITY, 0.0);
  EXPECT_NEAR(lower.value, 1.0, 1e-11);
}

TEST(Quadrature, BreakpointsHandleKinks) {
  auto r = quad::integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, {}, {0.3});
  EXPECT_NEAR(r.value, 0.5 * 0.09 + 0.5 * 0.49, 1e-14);
}

TEST(Quadrature, NonConvergenceThrows) {
  quad::Options o;
  o.max_subdivisions = 3;
  o.rel_tol = 1e-15;
  o.abs_tol = 0;
  EXPECT_THROW(quad::integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, o), convergence_error);
}

TEST(GaussLegendre, WeightsAndMoments) {
  for (int n : {1, 2, 5, 8, 16}) {
    const auto rule = quad::gauss_legendre(n);
    double w = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
      w += rule.weights[i];
      m2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    EXPECT_NEAR(w, 2.0, 1e-14);
    if (n >= 2) {
      EXPECT_NEAR(m2, 2.0 / 3.0, 1e-14);
    }
  }
}

TEST(GaussLegendre, CompositeGradedRule) {
  const auto rule = quad::composite_rule(quad::graded_unit_edges(10, 1e-9), 8);
  double s = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * -std::log(rule.nodes[i]);
  EXPECT_NEAR(s, 1.0, 1e-6);
}
