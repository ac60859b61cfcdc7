#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Static Hypergeometric Configuration Model kernel. A realisation with m
// edges is drawn without replacement from an urn holding xi_out[v] * xi_in[w]
// candidate edges per ordered node pair (v, w).

namespace netspect {

/// Dense multi-edge count matrix, row-major. Sized for kernel work and
/// synthetic sampling, not for huge node sets.
class CountMatrix {
 public:
  explicit CountMatrix(std::int32_t n);

  std::int32_t size() const { return n_; }
  std::int64_t& operator()(std::int32_t v, std::int32_t w) {
    return counts_[static_cast<std::size_t>(v) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(w)];
  }
  std::int64_t operator()(std::int32_t v, std::int32_t w) const {
    return counts_[static_cast<std::size_t>(v) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(w)];
  }
  std::int64_t total() const;

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

 private:
  std::int32_t n_;
  std::vector<std::int64_t> counts_;
};

/// Node activity (xi+) and attractiveness (xi-), both summing to the edge
/// count m, so the urn holds exactly m^2 candidate edges.
struct ActivityVectors {
  std::vector<std::int64_t> out_activity;
  std::vector<std::int64_t> in_activity;
  std::int64_t edge_count = 0;  // m
};

/// log2 Pr(A | xi): C(sum Xi, m)^-1 * prod_vw C(Xi_vw, A_vw) with
/// Xi_vw = xi_out[v] * xi_in[w]. Returns -inf for impossible configurations
/// (some A_vw exceeds Xi_vw); throws if the edge sums disagree.
double hcm_log_prob(const CountMatrix& counts, const ActivityVectors& act);

/// Maximum likelihood activities under the sum-m constraint: the degree
/// sequences of the observed counts.
ActivityVectors mle_activities(const CountMatrix& counts);

/// (expected out-degree, expected in-degree) of node v; reduces to
/// (xi_out[v], xi_in[v]) under the sum-m constraint.
std::pair<double, double> expected_degrees(const ActivityVectors& act, std::int32_t v);

}  // namespace netspect
