#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "netspect/hcm.hpp"
#include "netspect/rng.hpp"
#include "netspect/temporal_graph.hpp"

// Generative sampler for the temporal model: edge counts from the multinomial
// prior, activities from the composition prior (optionally skewed to hit a
// target degree coefficient of variation), window structure from the urn, and
// a uniform scatter of multi-edges over the steps of each window.

namespace netspect {

struct SynthConfig {
  std::int32_t num_nodes = 0;
  WindowPartition partition;
  std::optional<std::int64_t> total_edges;       // exact M, multinomial split
  std::optional<double> edges_per_window;        // expected m_tau, Poisson per window
  std::optional<double> degree_cv;               // target coefficient of variation in [0, 1]
  std::uint64_t seed = 0;
};

void validate(const SynthConfig& cfg);

/// Multinomial split of `total` edges over windows with probabilities
/// width/T.
std::vector<std::int64_t> sample_edge_counts(std::int64_t total, const WindowPartition& p, Rng& rng);

/// Out- and in-activity vectors summing to m, drawn independently. Without a
/// CV target: a uniform weak composition of m into N parts. With one: a
/// symmetric-Dirichlet-weighted multinomial calibrated to the target.
ActivityVectors sample_activities(std::int32_t num_nodes, std::int64_t m,
                                  std::optional<double> degree_cv, Rng& rng);

/// One window's multi-edge counts: a multivariate hypergeometric draw of m
/// edges from the urn holding xi_out[v] * xi_in[w] copies per cell, realised
/// as sequential conditional hypergeometric draws in row-major cell order.
CountMatrix sample_window(const ActivityVectors& act, Rng& rng);

TemporalGraph sample_temporal(const SynthConfig& cfg, Rng& rng);

/// Multiset union of two event sets on the same node/time axes.
TemporalGraph overlay(const TemporalGraph& a, const TemporalGraph& b);

/// Population standard deviation over mean; 0 for an all-zero vector.
double coefficient_of_variation(std::span<const std::int64_t> values);

/// Achievable CV interval for the Dirichlet-multinomial sampler (targets of
/// exactly 0 use a deterministic equal split instead).
std::pair<double, double> feasible_cv_range(std::int32_t num_nodes, std::int64_t m);

}  // namespace netspect
