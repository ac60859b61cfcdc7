#include "netspect/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "netspect/math.hpp"

namespace netspect {

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(gen_());  // full 64-bit range
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t r;
  do {
    r = gen_();
  } while (r >= limit);
  return lo + static_cast<std::int64_t>(r % span);
}

double Rng::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // Box-Muller on (0,1] uniforms.
  double u1;
  do {
    u1 = 1.0 - uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * 3.14159265358979323846 * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_normal_ = true;
  return r * std::cos(theta);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost by one and scale back: X ~ Gamma(a+1), X * U^(1/a) ~ Gamma(a).
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze method.
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::int64_t Rng::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
  if (mean == 0.0) return 0;
  // Knuth's product method, chunked so exp(-mean) never underflows.
  std::int64_t count = 0;
  double remaining = mean;
  while (remaining > 0.0) {
    double chunk = std::min(remaining, 30.0);
    remaining -= chunk;
    double limit = std::exp(-chunk);
    double prod = uniform();
    while (prod > limit) {
      ++count;
      prod *= uniform();
    }
  }
  return count;
}

std::int64_t Rng::hypergeometric(std::int64_t total, std::int64_t marked, std::int64_t draws) {
  if (total < 0 || marked < 0 || marked > total || draws < 0 || draws > total)
    throw std::invalid_argument("hypergeometric: invalid parameters");
  std::int64_t lo = std::max<std::int64_t>(0, draws + marked - total);
  std::int64_t hi = std::min(marked, draws);
  if (lo == hi) return lo;

  auto log_pmf = [&](std::int64_t x) {
    return (log2_binomial(marked, x) + log2_binomial(total - marked, draws - x) -
            log2_binomial(total, draws)) *
           kLn2;
  };
  // Inverse transform expanding outward from the mode.
  std::int64_t mode = static_cast<std::int64_t>(
      (static_cast<double>(draws) + 1.0) * (static_cast<double>(marked) + 1.0) /
      (static_cast<double>(total) + 2.0));
  mode = std::clamp(mode, lo, hi);

  double u = uniform();
  double p_mode = std::exp(log_pmf(mode));
  double acc = p_mode;
  if (u < acc) return mode;

  double p_right = p_mode;
  double p_left = p_mode;
  std::int64_t right = mode;
  std::int64_t left = mode;
  while (left > lo || right < hi) {
    if (right < hi) {
      // p(x+1)/p(x) = (marked-x)(draws-x) / ((x+1)(total-marked-draws+x+1))
      double ratio = static_cast<double>(marked - right) * static_cast<double>(draws - right) /
                     (static_cast<double>(right + 1) *
                      static_cast<double>(total - marked - draws + right + 1));
      p_right *= ratio;
      ++right;
      acc += p_right;
      if (u < acc) return right;
    }
    if (left > lo) {
      // p(x-1)/p(x) = x(total-marked-draws+x) / ((marked-x+1)(draws-x+1))
      double ratio = static_cast<double>(left) * static_cast<double>(total - marked - draws + left) /
                     (static_cast<double>(marked - left + 1) * static_cast<double>(draws - left + 1));
      p_left *= ratio;
      --left;
      acc += p_left;
      if (u < acc) return left;
    }
  }
  // Floating-point slack put u past the accumulated mass; return the mode.
  return mode;
}

std::vector<double> Rng::dirichlet(double concentration, int n) {
  if (n <= 0) throw std::invalid_argument("dirichlet: need at least one component");
  std::vector<double> w(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (auto& x : w) {
    x = gamma(concentration);
    sum += x;
  }
  if (sum <= 0.0) {
    // All gamma draws underflowed (tiny concentration): fall back to a one-hot.
    w.assign(w.size(), 0.0);
    w[static_cast<std::size_t>(uniform_int(0, n - 1))] = 1.0;
    return w;
  }
  for (auto& x : w) x /= sum;
  return w;
}

std::vector<std::int64_t> Rng::sample_distinct_sorted(std::int64_t k, std::int64_t upper) {
  if (k < 0 || k > upper) throw std::invalid_argument("sample_distinct_sorted: k out of range");
  // Floyd's algorithm.
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  for (std::int64_t j = upper - k; j < upper; ++j) {
    std::int64_t t = uniform_int(0, j);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::int64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace netspect
