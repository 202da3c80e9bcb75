#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "mslab/error.hpp"

namespace mslab {

/// Exact nonnegative integer used for type counts, ranks and bounds.
using BigCount = boost::multiprecision::cpp_int;

/// Exact binomial coefficient C(n, k); zero when k > n.
inline BigCount binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigCount result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

inline BigCount pow_big(const BigCount& base, std::uint64_t exponent) {
  BigCount result = 1;
  BigCount b = base;
  while (exponent > 0) {
    if (exponent & 1u) result *= b;
    exponent >>= 1u;
    if (exponent > 0) b *= b;
  }
  return result;
}

/// Smallest L with 2^L >= x (0 for x <= 1).
inline std::uint64_t ceil_log2(const BigCount& x) {
  if (x <= 1) return 0;
  BigCount y = x - 1;
  return boost::multiprecision::msb(y) + 1;
}

/// log2(x) for x >= 1, accurate to double precision even past 2^1024.
inline double log2_big(const BigCount& x) {
  if (x <= 0) throw invalid_argument("log2_big: argument must be positive");
  const std::uint64_t top = boost::multiprecision::msb(x);
  if (top < 53) return std::log2(x.convert_to<double>());
  const std::uint64_t shift = top - 52;
  const BigCount mantissa = x >> shift;
  return std::log2(mantissa.convert_to<double>()) + static_cast<double>(shift);
}

inline std::string to_string(const BigCount& x) { return x.str(); }

}  // namespace mslab
