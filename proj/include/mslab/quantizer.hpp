#pragma once

// Quantizer design for fixed-size multisets: Lloyd-Max scalar design, the
// Lloyd (LBG) design for sorted Gaussian pairs, permutation-symmetry checks
// for sort/quantize interchange, the high-rate scheme ledger, and a Monte
// Carlo validation of the high-rate predictions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "mslab/distributions.hpp"
#include "mslab/error.hpp"
#include "mslab/order_stats.hpp"
#include "mslab/quadrature.hpp"

namespace mslab {

enum class CodebookSpace { ordered, unordered };

inline std::string to_string(CodebookSpace s) {
  return s == CodebookSpace::ordered ? "ordered" : "unordered";
}

inline CodebookSpace parse_codebook_space(const std::string& s) {
  if (s == "ordered") return CodebookSpace::ordered;
  if (s == "unordered") return CodebookSpace::unordered;
  throw invalid_argument("codebook space must be 'ordered' or 'unordered', got '" + s + "'");
}

/// A set of K-dimensional reproduction points. Ordered codebooks live in the
/// cone x_1 <= ... <= x_K and are used on sorted inputs.
struct Codebook {
  unsigned K = 1;
  std::vector<std::vector<double>> points;
  CodebookSpace space = CodebookSpace::unordered;

  Codebook() = default;
  Codebook(unsigned dim, std::vector<std::vector<double>> pts, CodebookSpace sp)
      : K(dim), points(std::move(pts)), space(sp) {
    validate();
  }

  std::size_t size() const noexcept { return points.size(); }

  void validate() const {
    if (K < 1) throw invalid_argument("Codebook: dimension must be >= 1");
    if (points.empty()) throw invalid_argument("Codebook: at least one point required");
    for (const auto& p : points) {
      if (p.size() != K) throw invalid_argument("Codebook: point dimension differs from K");
      for (double v : p)
        if (!std::isfinite(v)) throw invalid_argument("Codebook: non-finite coordinate");
      if (space == CodebookSpace::ordered && !std::is_sorted(p.begin(), p.end()))
        throw invalid_argument("Codebook: ordered codebook point outside the cone");
    }
  }

  /// Index of the nearest point in squared Euclidean distance (lowest index on ties).
  std::size_t nearest(std::span<const double> x) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      double d = 0.0;
      for (unsigned j = 0; j < K; ++j) d += (x[j] - points[i][j]) * (x[j] - points[i][j]);
      if (d < best_d) best_d = d, best = i;
    }
    return best;
  }

  /// Squared distance to the nearest point.
  double min_sq_distance(std::span<const double> x) const {
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
      double d = 0.0;
      for (unsigned j = 0; j < K; ++j) d += (x[j] - p[j]) * (x[j] - p[j]);
      best_d = std::min(best_d, d);
    }
    return best_d;
  }

  /// Maps a K-vector to its reproduction; ordered codebooks sort the input first.
  std::vector<double> quantize(std::span<const double> x) const {
    if (x.size() != K) throw invalid_argument("Codebook::quantize: input dimension differs from K");
    if (space == CodebookSpace::ordered) {
      std::vector<double> s(x.begin(), x.end());
      std::sort(s.begin(), s.end());
      return points[nearest(s)];
    }
    return points[nearest(x)];
  }
};

/// Cartesian product of a scalar codebook with itself K times.
inline Codebook product_codebook(std::span<const double> scalar_points, unsigned K) {
  if (scalar_points.empty()) throw invalid_argument("product_codebook: empty scalar codebook");
  std::vector<std::vector<double>> pts{{}};
  for (unsigned d = 0; d < K; ++d) {
    std::vector<std::vector<double>> next;
    for (const auto& p : pts)
      for (double v : scalar_points) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return Codebook(K, std::move(pts), CodebookSpace::unordered);
}

// ---------------------------------------------------------------------------
// Lloyd-Max

struct ScalarQuantizer {
  Codebook codebook;                // K = 1
  std::vector<double> thresholds;   // size - 1 interior cell boundaries
  double distortion = 0.0;          // E[(X - q(X))^2]
  std::vector<double> history;      // distortion after each iteration
  unsigned iterations = 0;

  std::vector<double> levels() const {
    std::vector<double> v;
    for (const auto& p : codebook.points) v.push_back(p[0]);
    return v;
  }
};

struct LloydOptions {
  double rel_tol = 1e-10;    // on the distortion decrease
  double level_tol = 1e-10;  // on level movement, relative to max(1, |level|)
  unsigned max_iterations = 20000;
};

/// Lloyd-Max iteration for a density on [lower, upper] (either end may be
/// infinite) from the given sorted initial levels.
inline ScalarQuantizer lloyd_max_1d(const std::function<double(double)>& density, double lower,
                                    double upper, std::vector<double> levels,
                                    const LloydOptions& opts = {}) {
  if (levels.empty()) throw invalid_argument("lloyd_max_1d: need at least one level");
  std::sort(levels.begin(), levels.end());
  const std::size_t M = levels.size();
  quad::Options qopts;
  qopts.rel_tol = 1e-12;
  qopts.abs_tol = 1e-15;

  auto moment = [&](int k, double a, double b) {
    if (a >= b) return 0.0;
    auto g = [&](double x) { return std::pow(x, k) * density(x); };
    return quad::integrate_any(g, a, b, qopts).value;
  };
  auto cell_edges = [&](const std::vector<double>& t, std::size_t i) {
    return std::pair{i == 0 ? lower : t[i - 1], i + 1 == M ? upper : t[i]};
  };
  auto thresholds_of = [&](const std::vector<double>& lv) {
    std::vector<double> t(M - 1);
    for (std::size_t i = 0; i + 1 < M; ++i) t[i] = 0.5 * (lv[i] + lv[i + 1]);
    return t;
  };
  auto distortion_of = [&](const std::vector<double>& lv, const std::vector<double>& t) {
    double d = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      const auto [a, b] = cell_edges(t, i);
      if (a >= b) continue;
      const double c = lv[i];
      auto g = [&](double x) { return (x - c) * (x - c) * density(x); };
      d += quad::integrate_any(g, a, b, qopts).value;
    }
    return d;
  };

  ScalarQuantizer q;
  auto t = thresholds_of(levels);
  double prev = distortion_of(levels, t);
  q.history.push_back(prev);
  for (unsigned it = 1; it <= opts.max_iterations; ++it) {
    const auto old = levels;
    for (std::size_t i = 0; i < M; ++i) {
      const auto [a, b] = cell_edges(t, i);
      const double mass = moment(0, a, b);
      if (mass > 0.0) levels[i] = moment(1, a, b) / mass;
    }
    std::sort(levels.begin(), levels.end());
    double move = 0.0;
    for (std::size_t i = 0; i < M; ++i)
      move = std::max(move, std::abs(levels[i] - old[i]) / std::max(1.0, std::abs(levels[i])));
    t = thresholds_of(levels);
    const double d = distortion_of(levels, t);
    q.history.push_back(d);
    q.iterations = it;
    const bool done = std::abs(prev - d) <= opts.rel_tol * std::max(d, 1e-300) && move <= opts.level_tol;
    prev = d;
    if (done) {
      std::vector<std::vector<double>> pts;
      for (double v : levels) pts.push_back({v});
      q.codebook = Codebook(1, std::move(pts), CodebookSpace::unordered);
      q.thresholds = t;
      q.distortion = d;
      return q;
    }
  }
  throw convergence_error("lloyd_max_1d: no convergence within the iteration cap", prev,
                          std::abs(q.history.back() - q.history[q.history.size() - 2]));
}

/// Lloyd-Max design with 2^rate_bits levels for a parent, initialized at the
/// midpoint quantiles (i + 1/2) / M.
inline ScalarQuantizer lloyd_max_1d(const ContinuousParent& parent, unsigned rate_bits,
                                    const LloydOptions& opts = {}) {
  if (rate_bits > 12) throw invalid_argument("lloyd_max_1d: rate_bits must be <= 12");
  const std::size_t M = std::size_t{1} << rate_bits;
  std::vector<double> init(M);
  for (std::size_t i = 0; i < M; ++i) init[i] = parent.quantile((i + 0.5) / M);
  if (M == 1) init[0] = parent.mean();
  return lloyd_max_1d([&](double x) { return parent.pdf(x); }, parent.lower(), parent.upper(),
                      std::move(init), opts);
}

// ---------------------------------------------------------------------------
// Order-statistic quantizer for sorted Gaussian pairs

struct OSQuantizer2D {
  Codebook codebook;              // ordered, K = 2
  double total_distortion = 0.0;  // E ||X_sorted - q||^2, by deterministic quadrature
  double per_letter_distortion = 0.0;
  double sample_distortion = 0.0;  // total, on the design samples
  std::vector<double> history;     // per-iteration total distortion on samples
  unsigned iterations = 0;
};

struct OSQuantizerOptions {
  std::size_t samples = 1000000;
  SeedSpec seed{20240601, 0};
  double rel_tol = 1e-10;
  unsigned max_iterations = 2000;
  int panels = 512;        // uniform probability-space panels per axis
  int points_per_panel = 8;
};

namespace detail {

/// Probability-space panel edges: uniform panels with the two end panels
/// refined geometrically toward 0 and 1.
inline std::vector<double> tail_refined_edges(int panels, int levels = 24) {
  const double h = 1.0 / panels;
  std::vector<double> edges{0.0};
  for (int l = levels; l >= 1; --l) edges.push_back(h * std::ldexp(1.0, -l));
  for (int i = 1; i < panels; ++i) edges.push_back(i * h);
  for (int l = 1; l <= levels; ++l) edges.push_back(1.0 - h * std::ldexp(1.0, -l));
  edges.push_back(1.0);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace detail

/// E || sort(X_1, X_2) - q ||^2 over i.i.d. standard normal pairs, integrated on
/// a composite Gauss-Legendre grid in probability space.
inline double os_gaussian_pair_distortion(const Codebook& cb, int panels = 512,
                                          int points_per_panel = 8) {
  if (cb.K != 2) throw invalid_argument("os_gaussian_pair_distortion: codebook must have K = 2");
  const auto rule = quad::composite_rule(detail::tail_refined_edges(panels), points_per_panel);
  std::vector<double> z(rule.nodes.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = detail::standard_normal_quantile(rule.nodes[i]);
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      const std::array<double, 2> x{std::min(z[i], z[j]), std::max(z[i], z[j])};
      row += rule.weights[j] * cb.min_sq_distance(x);
    }
    total += rule.weights[i] * row;
  }
  return total;
}

/// Lloyd design with 2^rate_bits points on sorted standard-normal pairs, grown
/// by splitting each point along the principal axis of its cell.
inline OSQuantizer2D os_quantizer_2d_gaussian(unsigned rate_bits, const OSQuantizerOptions& opts = {}) {
  if (rate_bits > 3) throw invalid_argument("os_quantizer_2d_gaussian: rate must be in {0,1,2,3}");
  const std::size_t N = opts.samples;
  if (N < 16) throw invalid_argument("os_quantizer_2d_gaussian: too few samples");
  const auto raw = sample(ContinuousParent::gaussian(0.0, 1.0), 2 * N, opts.seed);
  std::vector<std::array<double, 2>> xs(N);
  for (std::size_t i = 0; i < N; ++i)
    xs[i] = {std::min(raw[2 * i], raw[2 * i + 1]), std::max(raw[2 * i], raw[2 * i + 1])};

  using Point = std::array<double, 2>;
  std::vector<Point> pts;
  std::vector<std::size_t> assign(N, 0);
  OSQuantizer2D out;

  auto assign_all = [&]() {
    double d = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < pts.size(); ++c) {
        const double a = xs[i][0] - pts[c][0], b = xs[i][1] - pts[c][1];
        const double dd = a * a + b * b;
        if (dd < best_d) best_d = dd, best = c;
      }
      assign[i] = best;
      d += best_d;
    }
    return d / N;
  };
  struct CellStats {
    double n = 0, s0 = 0, s1 = 0, s00 = 0, s01 = 0, s11 = 0;
  };
  auto cell_stats = [&]() {
    std::vector<CellStats> st(pts.size());
    for (std::size_t i = 0; i < N; ++i) {
      auto& c = st[assign[i]];
      c.n += 1;
      c.s0 += xs[i][0];
      c.s1 += xs[i][1];
      c.s00 += xs[i][0] * xs[i][0];
      c.s01 += xs[i][0] * xs[i][1];
      c.s11 += xs[i][1] * xs[i][1];
    }
    return st;
  };
  auto lloyd = [&]() {
    double prev = assign_all();
    out.history.push_back(prev);
    for (unsigned it = 0; it < opts.max_iterations; ++it) {
      const auto st = cell_stats();
      for (std::size_t c = 0; c < pts.size(); ++c)
        if (st[c].n > 0) {
          // Centroids of cone points stay in the cone; sorting only absorbs rounding.
          pts[c] = {st[c].s0 / st[c].n, st[c].s1 / st[c].n};
          if (pts[c][0] > pts[c][1]) std::swap(pts[c][0], pts[c][1]);
        }
      const double d = assign_all();
      out.history.push_back(d);
      ++out.iterations;
      if (prev - d <= opts.rel_tol * d) return d;
      prev = d;
    }
    throw convergence_error("os_quantizer_2d_gaussian: Lloyd iterations did not converge",
                            out.history.back(), prev - out.history.back());
  };

  pts.push_back({0.0, 0.0});
  std::fill(assign.begin(), assign.end(), 0);
  {
    const auto st = cell_stats();
    pts[0] = {st[0].s0 / st[0].n, st[0].s1 / st[0].n};
  }
  double d = assign_all();
  out.history.push_back(d);
  for (unsigned level = 0; level < rate_bits; ++level) {
    const auto st = cell_stats();
    std::vector<Point> next;
    for (std::size_t c = 0; c < pts.size(); ++c) {
      const auto& s = st[c];
      const double m0 = s.s0 / s.n, m1 = s.s1 / s.n;
      const double a = s.s00 / s.n - m0 * m0, b = s.s01 / s.n - m0 * m1, e = s.s11 / s.n - m1 * m1;
      // Principal eigenvector of [[a, b], [b, e]].
      const double lambda = 0.5 * (a + e) + std::sqrt(0.25 * (a - e) * (a - e) + b * b);
      double v0 = b, v1 = lambda - a;
      if (std::abs(v0) + std::abs(v1) < 1e-12) v0 = 1.0, v1 = 0.0;
      const double norm = std::hypot(v0, v1);
      const double step = 0.05 * std::sqrt(std::max(lambda, 1e-12));
      for (double sgn : {-1.0, 1.0}) {
        Point p{m0 + sgn * step * v0 / norm, m1 + sgn * step * v1 / norm};
        if (p[0] > p[1]) std::swap(p[0], p[1]);
        next.push_back(p);
      }
    }
    pts = std::move(next);
    d = lloyd();
  }
  std::sort(pts.begin(), pts.end());
  std::vector<std::vector<double>> cbpts;
  for (const auto& p : pts) cbpts.push_back({p[0], p[1]});
  out.codebook = Codebook(2, std::move(cbpts), CodebookSpace::ordered);
  out.sample_distortion = d;
  out.total_distortion = os_gaussian_pair_distortion(out.codebook, opts.panels, opts.points_per_panel);
  out.per_letter_distortion = 0.5 * out.total_distortion;
  return out;
}

// ---------------------------------------------------------------------------
// Sort/quantize interchange

struct InterchangeCertificate {
  bool symmetric = false;
  /// Orbits of point indices under coordinate permutations (when symmetric).
  std::vector<std::vector<std::size_t>> orbits;
  /// A coordinate permutation that maps some point outside the codebook.
  std::vector<unsigned> violating_permutation;
  std::size_t violating_point = 0;
};

/// True iff the codebook is invariant under every permutation of its K
/// coordinates, matching points within `tol` in max-norm.
inline InterchangeCertificate interchange_check(const Codebook& cb, double tol = 1e-9) {
  if (cb.K > 8) throw invalid_argument("interchange_check: K must be <= 8");
  auto find = [&](const std::vector<double>& x) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < cb.points.size(); ++i) {
      double dev = 0.0;
      for (unsigned j = 0; j < cb.K; ++j) dev = std::max(dev, std::abs(x[j] - cb.points[i][j]));
      if (dev <= tol) return i;
    }
    return std::nullopt;
  };
  std::vector<unsigned> perm(cb.K);
  for (unsigned j = 0; j < cb.K; ++j) perm[j] = j;
  std::vector<std::size_t> orbit_of(cb.points.size());
  for (std::size_t i = 0; i < orbit_of.size(); ++i) orbit_of[i] = i;
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return orbit_of[i] == i ? i : orbit_of[i] = root(orbit_of[i]);
  };
  InterchangeCertificate cert;
  do {
    for (std::size_t i = 0; i < cb.points.size(); ++i) {
      std::vector<double> y(cb.K);
      for (unsigned j = 0; j < cb.K; ++j) y[j] = cb.points[i][perm[j]];
      const auto hit = find(y);
      if (!hit) {
        cert.violating_permutation = perm;
        cert.violating_point = i;
        return cert;
      }
      orbit_of[root(*hit)] = root(i);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  cert.symmetric = true;
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < cb.points.size(); ++i) groups[root(i)].push_back(i);
  for (auto& [r, g] : groups) cert.orbits.push_back(std::move(g));
  return cert;
}

// ---------------------------------------------------------------------------
// High-rate scheme ledger

/// Normalized second moment advantage G(K) of the best known K-dimensional
/// cell over the cube; available for K = 1 and K = 2 (regular hexagon).
inline std::optional<double> space_filling_gain(unsigned K) {
  if (K == 1) return 1.0;
  if (K == 2) return (1.0 / 12.0) / (5.0 / (36.0 * std::sqrt(3.0)));
  return std::nullopt;
}

struct SchemeRow {
  int scheme = 1;
  std::string description;
  double rate_reduction_bits = 0.0;        // per letter, relative to scheme 1
  std::optional<double> distortion_factor;  // D / D_1
};

struct SchemeLedger {
  unsigned K = 1;
  std::vector<SchemeRow> rows;
  bool g_available = true;
};

/// Scheme 2 reduction: log2 K + (1/K) sum_i log2 C(K-1, i-1) - (K-1)/2 nats.
inline double scheme2_rate_reduction(unsigned K) {
  double s = 0.0;
  for (unsigned i = 1; i <= K; ++i) s += detail::log_choose(K - 1, i - 1);
  return std::log2(static_cast<double>(K)) + s * log2e / K - 0.5 * (K - 1.0) * log2e;
}

/// Scheme 3 reduction: (log2 K!) / K.
inline double scheme3_rate_reduction(unsigned K) {
  return std::lgamma(K + 1.0) * log2e / K;
}

inline SchemeLedger scheme_ledger(unsigned K) {
  if (K < 1) throw invalid_argument("scheme_ledger: K >= 1 required");
  SchemeLedger L;
  L.K = K;
  const auto g = space_filling_gain(K);
  L.g_available = g.has_value();
  L.rows.push_back({1, "independent scalar quantization of letters", 0.0, 1.0});
  L.rows.push_back({2, "scalar quantization of order-statistic marginals", scheme2_rate_reduction(K), 1.0});
  L.rows.push_back({3, "sequential conditional coding of order statistics", scheme3_rate_reduction(K), 1.0});
  std::optional<double> f4;
  if (g) f4 = 1.0 / *g;
  L.rows.push_back({4, "vector quantization of the sorted block", scheme3_rate_reduction(K), f4});
  return L;
}

// ---------------------------------------------------------------------------
// High-rate Monte Carlo validation

struct HighRateScheme {
  int scheme = 1;
  double rate_bits = 0.0;       // measured ideal codelength per letter
  double mse = 0.0;             // per letter
  double predicted_rate = 0.0;  // h(X) - log2 eps - ledger reduction
};

struct HighRateResult {
  double step = 0.0;
  unsigned K = 1;
  std::size_t letters = 0;
  double predicted_mse = 0.0;  // eps^2 / 12
  std::array<HighRateScheme, 3> schemes;
};

namespace detail {

/// P(a < Y <= b) from a cdf/sf pair, choosing the tail that avoids cancellation.
template <class Cdf, class Sf>
double interval_probability(double a, double b, Cdf cdf, Sf sf) {
  const double ca = cdf(a);
  if (ca < 0.5) return cdf(b) - ca;
  return sf(a) - sf(b);
}

}  // namespace detail

/// Uniform scalar quantization with step eps of K-blocks drawn from `parent`,
/// coded three ways: (1) letters with the parent distribution, (2) sorted
/// letters with their order-statistic marginals, (3) sorted letters coded
/// sequentially given the exact previous order statistic. Rates are ideal
/// codelengths -log2 P(cell) averaged per letter; reproduction is the cell
/// midpoint in every scheme.
inline HighRateResult high_rate_validate(const ContinuousParent& parent, unsigned K, double eps,
                                         std::size_t letters, SeedSpec seed) {
  if (K < 1) throw invalid_argument("high_rate_validate: K >= 1 required");
  if (!(eps > 0.0)) throw invalid_argument("high_rate_validate: step must be positive");
  const std::size_t blocks = letters / K;
  if (blocks < 1) throw invalid_argument("high_rate_validate: fewer letters than K");
  const auto xs = sample(parent, blocks * K, seed);

  auto cell_lo = [eps](double x) { return std::floor(x / eps) * eps; };
  auto pcdf = [&](double y) { return parent.cdf(y); };
  auto psf = [&](double y) { return parent.sf(y); };

  std::array<double, 3> bits{0.0, 0.0, 0.0};
  double sq = 0.0;
  std::vector<double> block(K);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (unsigned j = 0; j < K; ++j) {
      const double x = xs[b * K + j];
      const double lo = cell_lo(x);
      const double q = lo + 0.5 * eps;
      sq += (x - q) * (x - q);
      bits[0] -= std::log2(detail::interval_probability(lo, lo + eps, pcdf, psf));
      block[j] = x;
    }
    std::sort(block.begin(), block.end());
    for (unsigned r = 1; r <= K; ++r) {
      const double x = block[r - 1];
      const double lo = cell_lo(x), hi = lo + eps;
      // Scheme 2: marginal of X_(r:K).
      auto mcdf = [&](double y) {
        const double F = parent.cdf(y);
        if (F <= 0.0) return 0.0;
        if (F >= 1.0) return 1.0;
        return boost::math::ibeta(static_cast<double>(r), K - r + 1.0, F);
      };
      auto msf = [&](double y) {
        const double F = parent.cdf(y);
        if (F <= 0.0) return 1.0;
        if (F >= 1.0) return 0.0;
        return boost::math::ibetac(static_cast<double>(r), K - r + 1.0, F);
      };
      bits[1] -= std::log2(detail::interval_probability(lo, hi, mcdf, msf));
      // Scheme 3: first statistic by its marginal, the rest given the previous value.
      if (r == 1) {
        bits[2] -= std::log2(detail::interval_probability(lo, hi, mcdf, msf));
      } else {
        const double prev = block[r - 2];
        const double sp = parent.sf(prev);
        const double m = K - r + 1.0;  // remaining draws above prev
        // Conditional survival P(Y > y | prev) = (sf(y) / sf(prev))^m for y >= prev.
        auto csf = [&](double y) { return y <= prev ? 1.0 : std::pow(parent.sf(y) / sp, m); };
        auto ccdf = [&](double y) { return 1.0 - csf(y); };
        const double a = std::max(lo, prev);
        double p = csf(a) < 0.5 ? csf(a) - csf(hi) : ccdf(hi) - ccdf(a);
        if (!(p > 0.0)) p = std::numeric_limits<double>::min();
        bits[2] -= std::log2(p);
      }
    }
  }
  const double n = static_cast<double>(blocks * K);
  HighRateResult res;
  res.step = eps;
  res.K = K;
  res.letters = blocks * K;
  res.predicted_mse = eps * eps / 12.0;
  const double base = parent.differential_entropy() - std::log2(eps);
  const auto ledger = scheme_ledger(K);
  for (int s = 0; s < 3; ++s) {
    res.schemes[s].scheme = s + 1;
    res.schemes[s].rate_bits = bits[s] / n;
    res.schemes[s].mse = sq / n;
    res.schemes[s].predicted_rate = base - ledger.rows[s].rate_reduction_bits;
  }
  return res;
}

}  // namespace mslab
