#include "netspect/math.hpp"

#include <array>

namespace netspect::detail {

namespace {

constexpr int kTableSize = 4096;

std::array<double, kTableSize> build_table() {
  std::array<double, kTableSize> table{};
  table[0] = 0.0;
  long double acc = 0.0L;
  for (int n = 1; n < kTableSize; ++n) {
    acc += std::log2(static_cast<long double>(n));
    table[n] = static_cast<double>(acc);
  }
  return table;
}

const std::array<double, kTableSize>& table() {
  static const std::array<double, kTableSize> t = build_table();
  return t;
}

}  // namespace

double log2_factorial_large(std::int64_t n) {
  if (n < 0) return -std::numeric_limits<double>::infinity();
  if (n < kTableSize) return table()[static_cast<int>(n)];
  return lgamma_safe(static_cast<double>(n) + 1.0) / kLn2;
}

}  // namespace netspect::detail
