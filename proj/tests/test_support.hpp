#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "netspect/hcm.hpp"
#include "netspect/rng.hpp"
#include "netspect/temporal_graph.hpp"

// Shared test-only oracles. Everything here is written independently of the
// library's computation paths: exact rational arithmetic for probabilities,
// exhaustive enumeration for combinatorial sums, threshold search for
// prominence.

namespace netspect::testing {

/// All ordered compositions of total (2^(total-1) of them).
std::vector<std::vector<std::int32_t>> all_compositions(std::int32_t total);

/// All NxN count matrices with entries summing to m (optionally bounded per
/// cell by the urn Xi implied by `act`).
std::vector<CountMatrix> all_count_matrices(std::int32_t n, std::int64_t m,
                                            const ActivityVectors* act = nullptr);

/// All length-n vectors of non-negative integers summing to m.
std::vector<std::vector<std::int64_t>> all_weak_compositions(std::int32_t n, std::int64_t m);

/// Exact log2 of the HCM probability of `counts` given `act`, via rational
/// arithmetic (no floating point until the final log).
double exact_hcm_log_prob(const CountMatrix& counts, const ActivityVectors& act);

/// Exact log2 of one window's HTCM likelihood: the urn term with MLE
/// activities, the per-step data factorials, and the Delta^-m scatter term.
double exact_window_log_likelihood(const TemporalGraph& g, const WindowPartition& p,
                                   std::int32_t tau);

/// Exact absolute description length of (g, p) under the general prior, by
/// multiplying every §-factor as one big rational.
double exact_description_length(const TemporalGraph& g, const WindowPartition& p);

/// Brute-force topographic prominence of `peak_index` on curve y (peaks =
/// maxima): scan thresholds; the prominence is the height above the highest
/// level whose superlevel component around the peak reaches strictly higher
/// ground. Integer curves only.
std::int64_t brute_force_prominence(const std::vector<std::int64_t>& y, std::size_t peak_index);

/// Random small temporal graph for property tests.
TemporalGraph random_graph(std::int32_t num_nodes, std::int32_t num_steps, std::int64_t num_events,
                           Rng& rng);

/// Random partition of total into at least one window.
std::vector<std::int32_t> random_widths(std::int32_t total, Rng& rng);

}  // namespace netspect::testing
