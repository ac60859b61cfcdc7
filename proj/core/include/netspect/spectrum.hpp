#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "netspect/temporal_graph.hpp"

// Fixed-window description-length scan and the timescale spectrum: local DL
// minima over window sizes, ranked by topographic prominence.

namespace netspect {

struct SpectrumPoint {
  std::int32_t delta = 0;  // window size
  std::int32_t alpha = 0;  // padding that minimises the DL for this delta
  double bits = 0.0;       // minimal DL over paddings
  double norm_bits = 0.0;  // bits minus the scan minimum
};

struct SpectralLine {
  std::int32_t delta = 0;
  double prominence = 0.0;
};

struct Spectrum {
  std::vector<SpectrumPoint> points;   // one per delta in [1, delta_max]
  std::vector<SpectralLine> minima;    // sorted by prominence descending
  std::int32_t mdl_delta = 0;          // argmin of bits (smallest delta on ties)
};

/// Widths (alpha, delta, ..., delta, omega) with alpha dropped when 0 and the
/// trailing omega the remainder in (0, delta].
WindowPartition build_fixed_partition(std::int32_t total, std::int32_t delta, std::int32_t alpha);

/// DL-vs-delta curve: for each delta in [1, delta_max], the minimum over all
/// paddings alpha in [0, delta-1] of the fixed-window description length.
/// Fills points (including norm_bits and mdl_delta) but not minima.
Spectrum scan_spectrum(const TemporalGraph& g, std::int32_t delta_max, std::int32_t jobs = 1);

/// Candidate deltas: bits(d) < bits(d-1) and bits(d) <= bits(d+1); plateaus
/// keep their smallest delta; endpoints qualify when below their only
/// neighbour. Returned ascending.
std::vector<std::int32_t> local_minima(std::span<const SpectrumPoint> points);

/// Topographic prominence of each candidate on the negated curve (DL minima
/// become peaks), sorted by prominence descending (ties: smaller delta first).
std::vector<SpectralLine> peak_prominences(std::span<const SpectrumPoint> points,
                                           std::span<const std::int32_t> candidates);

/// scan -> local_minima -> prominence.
Spectrum spectrogram(const TemporalGraph& g, std::int32_t delta_max, std::int32_t jobs = 1);

enum class DominantMode { mdl, top_prominence };

struct RollingPoint {
  std::int32_t window_start = 0;
  std::int32_t dominant_delta = 0;
};

/// Slide a window of window_len steps by `step`, computing each slice's
/// spectrum over delta in [1, window_len] and reporting the dominant
/// timescale per `mode`.
std::vector<RollingPoint> rolling_dominant(const TemporalGraph& g, std::int32_t window_len,
                                           std::int32_t step, DominantMode mode,
                                           std::int32_t jobs = 1);

enum class ShockPhase { pre, during, post };

/// Windows are classified against a shock step: pre when the window ends
/// before the shock, during when it contains it, post when it starts after.
ShockPhase classify_window(std::int32_t window_start, std::int32_t window_len,
                           std::int32_t shock_step);

/// Fig.-6-style renormalisation: centre the series on the mean over
/// shock-overlapping windows and divide by its standard deviation over the
/// whole series. Throws if no window overlaps the shock.
std::vector<double> renormalize_by_shock(std::span<const RollingPoint> series,
                                         std::int32_t window_len, std::int32_t shock_step);

}  // namespace netspect
