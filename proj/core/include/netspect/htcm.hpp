#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "netspect/temporal_graph.hpp"

// Temporal Hypergeometric Configuration Model: per-window likelihoods, the
// priors over partitions / activities / edge counts, and absolute description
// lengths in bits. Activities are always the in-window MLE degrees.

namespace netspect {

enum class PriorMode { general, fixed_window };

struct WindowTerms {
  double likelihood_bits = 0.0;      // window structure cost, excluding per-step data bits
  double activity_prior_bits = 0.0;  // 2 log2 C(N+m-1, m)
};

/// Absolute description length, decomposed so the parts sum to total_bits.
/// data_constant_bits carries everything that depends only on the graph
/// (the M!, T^-M and per-step A_vwt! factors); edge_count_prior_bits here is
/// therefore the partition-dependent remainder of the multinomial prior,
/// while the edge_count_prior_bits() function below returns the full prior.
struct DLReport {
  double total_bits = 0.0;
  std::vector<WindowTerms> per_window;
  double partition_prior_bits = 0.0;
  double edge_count_prior_bits = 0.0;
  double data_constant_bits = 0.0;
  PriorMode prior_mode = PriorMode::general;
};

/// log2 Pr of one aggregated window under the HTCM with MLE activities:
/// log2[ C(m^2, m)^-1 * prod_vw Xi!/(Xi-A)! * Delta^-m ] - log_data_term_bits.
/// An empty window contributes 0.
double window_log_likelihood(const WindowAggregate& w);

/// -log2[ C(T-1, z-1)^-1 * 1/T ].
double partition_prior_bits(std::int64_t z, std::int64_t T);

/// log2(T(T-1)/2), the flat prior cost of any fixed-size window partition.
double fixed_window_prior_bits(std::int64_t T);

/// Throws unless p has the (alpha, Delta, ..., Delta, omega) shape: all
/// interior widths equal, first and last no wider than the interior width.
void validate_fixed_window_partition(const WindowPartition& p);

/// 2 log2 C(N+m-1, m): flat priors over the out- and in-activity compositions.
double activity_prior_bits(std::int64_t num_nodes, std::int64_t m);

/// -log2[ M!/prod m_tau! * prod (Delta_tau/T)^m_tau ], the multinomial prior
/// for the per-window edge counts.
double edge_count_prior_bits(std::span<const std::int64_t> window_edges, const WindowPartition& p,
                             std::int64_t total_edges);

DLReport description_length(const TemporalGraph& g, const WindowPartition& p,
                            PriorMode mode = PriorMode::general);

struct PartitionEdit {
  enum class Kind { split, join, move };
  Kind kind = Kind::split;
  std::int32_t window = 0;  // split/move: window index tau; join: left window of the pair
  std::int32_t point = 0;   // split: new left width in [1, Delta-1]; move: new left width in [1, W-1]
};

/// The edited partition; throws on out-of-range windows or points.
WindowPartition apply_edit(const WindowPartition& p, const PartitionEdit& e);

/// DL(p') - DL(p) in bits, touching only the affected windows plus the
/// z-dependent prior terms. Exact agreement with full recomputation.
double dl_delta(const TemporalGraph& g, const WindowPartition& p, const PartitionEdit& e);

/// Fast description-length evaluation over step ranges, memoised by range.
/// One window's partition-dependent cost depends only on its aggregated
/// contents, so spectrum scans and MCMC edits reuse overlapping windows.
/// Not thread-safe; use one evaluator per thread.
class DLEvaluator {
 public:
  explicit DLEvaluator(const TemporalGraph& g);
  ~DLEvaluator();
  DLEvaluator(const DLEvaluator&) = delete;
  DLEvaluator& operator=(const DLEvaluator&) = delete;

  std::int32_t num_steps() const;
  std::int32_t num_nodes() const;
  std::int64_t num_events() const;

  /// Partition-dependent cost of a window covering steps [begin, end):
  /// likelihood + activity prior + its share of the multinomial prior.
  double window_bits(std::int32_t begin, std::int32_t end) const;

  /// Bits that depend only on the graph (per-step data term, M!, T^-M).
  double data_constant_bits() const;

  /// Absolute description length of a whole partition.
  double partition_bits(std::span<const std::int32_t> widths, PriorMode mode) const;

  /// DL difference of an edit applied to `widths` (general prior mode).
  double delta_bits(std::span<const std::int32_t> widths, const PartitionEdit& e) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace netspect
