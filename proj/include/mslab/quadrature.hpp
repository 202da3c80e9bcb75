#pragma once

// Adaptive Gauss-Kronrod quadrature (7/15 pair, global subdivision in the
// style of QUADPACK's QAG) plus fixed Gauss-Legendre rules for tensor grids.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <utility>
#include <vector>

#include "mslab/error.hpp"

namespace mslab::quad {

struct Options {
  double abs_tol = 1e-13;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  int subdivisions = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // Nodes that round onto an endpoint are nudged inside so open-interval integrands stay defined.
  const double lo = std::min(a, b), hi = std::max(a, b);
  auto at = [&](double x) {
    if (x <= lo) x = std::nextafter(lo, hi);
    if (x >= hi) x = std::nextafter(hi, lo);
    return f(x);
  };
  const double fc = at(center);
  double res_k = fc * kronrod_weights[7];
  double res_g = fc * gauss_weights[3];
  double res_abs = std::abs(res_k);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kronrod_nodes[j];
    f1[j] = at(center - dx);
    f2[j] = at(center + dx);
    res_k += kronrod_weights[j] * (f1[j] + f2[j]);
    res_abs += kronrod_weights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += gauss_weights[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * res_k;
  double res_asc = kronrod_weights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    res_asc += kronrod_weights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = res_k * half;
  res_abs *= std::abs(half);
  res_asc *= std::abs(half);
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0)
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * res_abs, err);
  return {a, b, value, err};
}

}  // namespace detail

/// Integrates f over [a, b] (finite). `breakpoints` seed the initial partition.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {},
                 std::vector<double> breakpoints = {}) {
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw invalid_argument("quad::integrate: finite limits required");
  if (a == b) return {};
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  std::vector<double> edges{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double p : breakpoints)
    if (p > edges.back() && p < b) edges.push_back(p);
  edges.push_back(b);

  std::priority_queue<detail::Segment> heap;
  double total = 0.0, total_err = 0.0;
  int evals = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto s = detail::gk15(f, edges[i], edges[i + 1]);
    evals += 15;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }

  int subdivisions = 0;
  auto converged = [&] {
    return total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  };
  while (!converged()) {
    if (subdivisions >= opts.max_subdivisions) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge on [" << a << ", " << b
          << "]: estimate " << total << ", error " << total_err << " > tolerance "
          << std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) << " after "
          << subdivisions << " subdivisions";
      throw convergence_error(msg.str(), sign * total, total_err);
    }
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval can no longer be split in double precision; accept it.
      total_err -= worst.error;
      heap.push({worst.a, worst.b, worst.value, 0.0});
      if (heap.top().error == 0.0) break;
      continue;
    }
    const auto left = detail::gk15(f, worst.a, mid);
    const auto right = detail::gk15(f, mid, worst.b);
    evals += 30;
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed accumulated cancellation in the running total.
  double resum = 0.0, err = 0.0;
  while (!heap.empty()) {
    resum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sign * resum, err, evals, subdivisions};
}

/// Integrates over a possibly infinite interval by mapping onto a finite one.
template <class F>
Result integrate_any(F&& f, double a, double b, const Options& opts = {}) {
  const bool lo_inf = std::isinf(a), hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return integrate(f, a, b, opts);
  if (lo_inf && hi_inf) {
    // x = t / (1 - t^2)
    auto g = [&f](double t) {
      const double d = 1.0 - t * t;
      return f(t / d) * (1.0 + t * t) / (d * d);
    };
    return integrate(g, -1.0, 1.0, opts);
  }
  if (hi_inf) {
    // x = a + t / (1 - t)
    auto g = [&f, a](double t) {
      const double d = 1.0 - t;
      return f(a + t / d) / (d * d);
    };
    return integrate(g, 0.0, 1.0, opts);
  }
  auto g = [&f, b](double t) {
    const double d = 1.0 - t;
    return f(b - t / d) / (d * d);
  };
  return integrate(g, 0.0, 1.0, opts);
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline Rule gauss_legendre(int n) {
  if (n < 1) throw invalid_argument("gauss_legendre: n >= 1 required");
  Rule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Composite Gauss-Legendre nodes over the panels defined by `edges`.
inline Rule composite_rule(const std::vector<double>& edges, int points_per_panel) {
  const Rule base = gauss_legendre(points_per_panel);
  Rule out;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    const double mid = 0.5 * (edges[p + 1] + edges[p]);
    for (int i = 0; i < points_per_panel; ++i) {
      out.nodes.push_back(mid + half * base.nodes[i]);
      out.weights.push_back(half * base.weights[i]);
    }
  }
  return out;
}

/// Panel edges on [0, 1] refined geometrically toward both endpoints.
inline std::vector<double> graded_unit_edges(int panels_per_side, double smallest) {
  std::vector<double> left{0.0};
  const double ratio = std::pow(0.5 / smallest, 1.0 / (panels_per_side - 1));
  double x = smallest;
  for (int i = 0; i < panels_per_side - 1; ++i, x *= ratio) left.push_back(x);
  left.push_back(0.5);
  std::vector<double> edges = left;
  for (auto it = left.rbegin() + 1; it != left.rend(); ++it) edges.push_back(1.0 - *it);
  return edges;
}

}  // namespace mslab::quad
