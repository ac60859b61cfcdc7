#pragma once

#include <cstdint>
#include <random>
#include <vector>

// Deterministic random source. All non-uniform draws (gamma, Poisson,
// hypergeometric, ...) are implemented here instead of through
// std::*_distribution so that a given seed produces the same stream on every
// platform and standard library.

namespace netspect {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// splitmix64-based mixing for deriving independent stream seeds.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi] inclusive; unbiased via rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  double normal();
  double gamma(double shape);
  std::int64_t poisson(double mean);

  /// Number of marked items in `draws` draws without replacement from a
  /// population of `total` items of which `marked` are marked.
  std::int64_t hypergeometric(std::int64_t total, std::int64_t marked, std::int64_t draws);

  /// Symmetric Dirichlet weights of length n.
  std::vector<double> dirichlet(double concentration, int n);

  /// k distinct integers drawn uniformly from [0, upper), ascending.
  std::vector<std::int64_t> sample_distinct_sorted(std::int64_t k, std::int64_t upper);

 private:
  std::mt19937_64 gen_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace netspect
