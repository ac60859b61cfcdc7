#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "netspect/htcm.hpp"
#include "netspect/rng.hpp"
#include "netspect/temporal_graph.hpp"

// Markov-chain Monte Carlo over time-window partitions. Proposals are the
// three partition edits (split / join / move), each drawn with probability
// 1/3; a draw that has no valid target (splitting a width-1 window, joining
// when z = 1) is resampled, and the acceptance ratio accounts for the
// state-dependent resampling mass so the beta = 1 chain samples the exact
// description-length posterior.

namespace netspect {

struct Proposal {
  PartitionEdit edit;
  double log_forward = 0.0;   // raw proposal log-probability (1/3 * ...)
  double log_backward = 0.0;  // raw log-probability of the reverting edit
};

/// Draw a valid edit for p; degenerate draws are resampled. Requires a
/// partition with at least one valid edit (i.e. T >= 2).
Proposal propose(const WindowPartition& p, Rng& rng);

/// min(1, 2^(-deltaBits/beta) * exp(logBackward - logForward)).
double accept_probability(double delta_bits, double log_forward, double log_backward, double beta);

struct ChainConfig {
  double beta = 1.0;
  std::int64_t sweeps = 1000;  // one sweep = T proposal attempts
  std::uint64_t seed = 0;
  enum class Init { single_window, singletons, given } init = Init::single_window;
  WindowPartition init_partition;                          // used when init == given
  std::vector<std::pair<std::int64_t, double>> anneal_schedule;  // (sweep, beta), step function
  std::int32_t chains = 1;
  std::int32_t jobs = 1;             // threads used to run chains concurrently
  std::int64_t sample_every = 0;     // attempts between stored samples; 0 = off
  std::int64_t plateau_sweeps = 0;   // stop after this many sweeps without improvement; 0 = off
  // Test hook: called after every attempt with the current state (forces
  // sequential chain execution).
  std::function<void(std::span<const std::int32_t>, double)> on_state;
};

struct MoveStats {
  std::int64_t proposed = 0;
  std::int64_t accepted = 0;
  double rate() const { return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed); }
};

struct ChainResult {
  WindowPartition best_partition;
  double best_bits = 0.0;
  MoveStats split_stats, join_stats, move_stats;
  std::vector<double> trace;  // current description length at the end of each sweep
  std::vector<std::pair<WindowPartition, double>> samples;
  std::int32_t chain_index = 0;
};

/// Run cfg.chains independent chains and return the best result (ties broken
/// by lowest chain index). Deterministic given (graph, config).
ChainResult run_chains(const TemporalGraph& g, const ChainConfig& cfg);

/// Exhaustive best-improvement local search over single edits; returns the
/// refined partition and its absolute description length.
std::pair<WindowPartition, double> greedy_refine(const TemporalGraph& g, const WindowPartition& p);

/// Per-sweep geometric interpolation from beta_start to beta_end.
std::vector<std::pair<std::int64_t, double>> geometric_schedule(std::int64_t sweeps,
                                                                double beta_start, double beta_end);

}  // namespace netspect
