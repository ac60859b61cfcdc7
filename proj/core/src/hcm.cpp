#include "netspect/hcm.hpp"

#include <limits>
#include <stdexcept>

#include "netspect/math.hpp"

namespace netspect {

CountMatrix::CountMatrix(std::int32_t n) : n_(n) {
  if (n < 1) throw std::invalid_argument("CountMatrix: need at least one node");
  counts_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

std::int64_t CountMatrix::total() const {
  std::int64_t sum = 0;
  for (auto c : counts_) sum += c;
  return sum;
}

double hcm_log_prob(const CountMatrix& counts, const ActivityVectors& act) {
  const std::int32_t n = counts.size();
  if (static_cast<std::size_t>(n) != act.out_activity.size() ||
      static_cast<std::size_t>(n) != act.in_activity.size())
    throw std::invalid_argument("hcm_log_prob: activity length does not match matrix size");
  if (counts.total() != act.edge_count)
    throw std::invalid_argument("hcm_log_prob: counts do not sum to the activity edge count");

  NeumaierSum bits;
  std::int64_t urn_total = 0;
  for (std::int32_t v = 0; v < n; ++v) {
    const std::int64_t xo = act.out_activity[static_cast<std::size_t>(v)];
    for (std::int32_t w = 0; w < n; ++w) {
      const std::int64_t xi = xo * act.in_activity[static_cast<std::size_t>(w)];
      urn_total += xi;
      const std::int64_t a = counts(v, w);
      if (a == 0) continue;
      if (a > xi) return -std::numeric_limits<double>::infinity();
      bits.add(log2_binomial(xi, a));
    }
  }
  bits.add(-log2_binomial(urn_total, act.edge_count));
  return bits.value();
}

ActivityVectors mle_activities(const CountMatrix& counts) {
  const std::int32_t n = counts.size();
  ActivityVectors act;
  act.out_activity.assign(static_cast<std::size_t>(n), 0);
  act.in_activity.assign(static_cast<std::size_t>(n), 0);
  for (std::int32_t v = 0; v < n; ++v) {
    for (std::int32_t w = 0; w < n; ++w) {
      const std::int64_t a = counts(v, w);
      act.out_activity[static_cast<std::size_t>(v)] += a;
      act.in_activity[static_cast<std::size_t>(w)] += a;
      act.edge_count += a;
    }
  }
  return act;
}

std::pair<double, double> expected_degrees(const ActivityVectors& act, std::int32_t v) {
  std::int64_t q_out = 0, q_in = 0;
  for (auto x : act.out_activity) q_out += x;
  for (auto x : act.in_activity) q_in += x;
  if (q_out == 0 || q_in == 0) return {0.0, 0.0};
  const double m = static_cast<double>(act.edge_count);
  // E(k+_v) = xi+_v * m / Q; equals xi+_v when Q = m.
  double out = static_cast<double>(act.out_activity[static_cast<std::size_t>(v)]) * m /
               static_cast<double>(q_out);
  double in = static_cast<double>(act.in_activity[static_cast<std::size_t>(v)]) * m /
              static_cast<double>(q_in);
  return {out, in};
}

}  // namespace netspect
