#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

// Log-space combinatorics. Everything is reported in bits (base-2 logs);
// intermediate work uses natural logs via lgamma so factorials never overflow.

namespace netspect {

inline constexpr double kLn2 = 0.6931471805599453094172321214581766;

// Thread-safe lgamma (std::lgamma writes the global signgam on glibc).
inline double lgamma_safe(double x) {
#ifdef __GLIBC__
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

namespace detail {
double log2_factorial_large(std::int64_t n);
}

/// log2(n!), exact small-n table, lgamma beyond.
inline double log2_factorial(std::int64_t n) {
  return detail::log2_factorial_large(n);
}

/// log2 C(n, k); -inf when the binomial is zero (k < 0 or k > n).
inline double log2_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n || n < 0) return -std::numeric_limits<double>::infinity();
  if (k == 0 || k == n) return 0.0;
  return log2_factorial(n) - log2_factorial(k) - log2_factorial(n - k);
}

/// log2 of the falling factorial n (n-1) ... (n-k+1); -inf when k > n.
inline double log2_falling_factorial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return -std::numeric_limits<double>::infinity();
  if (k == 0) return 0.0;
  return log2_factorial(n) - log2_factorial(n - k);
}

/// Neumaier compensated summation; keeps long reductions reproducible and tight.
struct NeumaierSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      compensation += (sum - t) + x;
    } else {
      compensation += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + compensation; }
};

}  // namespace netspect
