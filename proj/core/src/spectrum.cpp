#include "netspect/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "netspect/htcm.hpp"

namespace netspect {

WindowPartition build_fixed_partition(std::int32_t total, std::int32_t delta, std::int32_t alpha) {
  if (total < 1) throw std::invalid_argument("build_fixed_partition: need T >= 1");
  if (delta < 1 || delta > total)
    throw std::invalid_argument("build_fixed_partition: need 1 <= delta <= T");
  if (alpha < 0 || alpha >= delta)
    throw std::invalid_argument("build_fixed_partition: need 0 <= alpha < delta");

  std::vector<std::int32_t> widths;
  if (alpha > 0) widths.push_back(alpha);
  std::int32_t remaining = total - alpha;
  const std::int32_t full = remaining / delta;
  const std::int32_t omega = remaining % delta;
  for (std::int32_t i = 0; i < full; ++i) widths.push_back(delta);
  if (omega > 0) widths.push_back(omega);
  return WindowPartition(std::move(widths));
}

namespace {

void scan_range(const TemporalGraph& g, std::int32_t lo, std::int32_t hi,
                std::vector<SpectrumPoint>& out) {
  DLEvaluator eval(g);
  const std::int32_t total = g.num_steps();
  for (std::int32_t delta = lo; delta < hi; ++delta) {
    SpectrumPoint point;
    point.delta = delta;
    point.bits = std::numeric_limits<double>::infinity();
    for (std::int32_t alpha = 0; alpha < delta; ++alpha) {
      const WindowPartition p = build_fixed_partition(total, delta, alpha);
      const double bits = eval.partition_bits(p.widths(), PriorMode::fixed_window);
      if (bits < point.bits) {
        point.bits = bits;
        point.alpha = alpha;
      }
    }
    out[static_cast<std::size_t>(delta - 1)] = point;
  }
}

}  // namespace

Spectrum scan_spectrum(const TemporalGraph& g, std::int32_t delta_max, std::int32_t jobs) {
  if (delta_max < 1 || delta_max > g.num_steps())
    throw std::invalid_argument("scan_spectrum: need 1 <= delta_max <= T");
  if (g.num_steps() < 2)
    throw std::invalid_argument("scan_spectrum: need at least two time steps");

  Spectrum spectrum;
  spectrum.points.assign(static_cast<std::size_t>(delta_max), SpectrumPoint{});

  jobs = std::max<std::int32_t>(1, std::min(jobs, delta_max));
  if (jobs == 1) {
    scan_range(g, 1, delta_max + 1, spectrum.points);
  } else {
    // Interleave deltas across threads for even load: cost grows with delta.
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (std::int32_t j = 0; j < jobs; ++j) {
      pool.emplace_back([&, j]() {
        DLEvaluator eval(g);
        const std::int32_t total = g.num_steps();
        for (std::int32_t delta = 1 + j; delta <= delta_max; delta += jobs) {
          SpectrumPoint point;
          point.delta = delta;
          point.bits = std::numeric_limits<double>::infinity();
          for (std::int32_t alpha = 0; alpha < delta; ++alpha) {
            const WindowPartition p = build_fixed_partition(total, delta, alpha);
            const double bits = eval.partition_bits(p.widths(), PriorMode::fixed_window);
            if (bits < point.bits) {
              point.bits = bits;
              point.alpha = alpha;
            }
          }
          spectrum.points[static_cast<std::size_t>(delta - 1)] = point;
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  double min_bits = std::numeric_limits<double>::infinity();
  std::int32_t mdl = 1;
  for (const auto& p : spectrum.points) {
    if (p.bits < min_bits) {
      min_bits = p.bits;
      mdl = p.delta;
    }
  }
  spectrum.mdl_delta = mdl;
  for (auto& p : spectrum.points) p.norm_bits = p.bits - min_bits;
  return spectrum;
}

std::vector<std::int32_t> local_minima(std::span<const SpectrumPoint> points) {
  std::vector<std::int32_t> out;
  const std::size_t n = points.size();
  if (n == 0) return out;
  if (n == 1) {
    out.push_back(points[0].delta);  // sole point is trivially the minimum
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double b = points[i].bits;
    if (i == 0) {
      if (b < points[1].bits) out.push_back(points[i].delta);
    } else if (i + 1 == n) {
      if (b < points[i - 1].bits) out.push_back(points[i].delta);
    } else {
      if (b < points[i - 1].bits && b <= points[i + 1].bits) out.push_back(points[i].delta);
    }
  }
  return out;
}

std::vector<SpectralLine> peak_prominences(std::span<const SpectrumPoint> points,
                                           std::span<const std::int32_t> candidates) {
  const std::size_t n = points.size();
  std::vector<double> height(n);  // negated curve: DL minima become peaks
  double global_min_height = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    height[i] = -points[i].bits;
    global_min_height = std::min(global_min_height, height[i]);
  }

  std::vector<SpectralLine> lines;
  lines.reserve(candidates.size());
  for (std::int32_t delta : candidates) {
    const std::int64_t idx = delta - points[0].delta;
    if (idx < 0 || idx >= static_cast<std::int64_t>(n))
      throw std::invalid_argument("peak_prominences: candidate outside the scanned range");
    const double h = height[static_cast<std::size_t>(idx)];

    // Key saddle on each side: the lowest point on the walk towards the
    // nearest strictly higher ground; no higher ground means that side is open.
    double key_saddle = -std::numeric_limits<double>::infinity();
    bool bounded = false;
    for (int dir : {-1, +1}) {
      double lowest = h;
      for (std::int64_t i = idx + dir; i >= 0 && i < static_cast<std::int64_t>(n); i += dir) {
        const double hi = height[static_cast<std::size_t>(i)];
        if (hi > h) {
          key_saddle = std::max(key_saddle, lowest);
          bounded = true;
          break;
        }
        lowest = std::min(lowest, hi);
      }
    }

    SpectralLine line;
    line.delta = delta;
    line.prominence = bounded ? h - key_saddle : h - global_min_height;
    lines.push_back(line);
  }

  std::sort(lines.begin(), lines.end(), [](const SpectralLine& a, const SpectralLine& b) {
    if (a.prominence != b.prominence) return a.prominence > b.prominence;
    return a.delta < b.delta;
  });
  return lines;
}

Spectrum spectrogram(const TemporalGraph& g, std::int32_t delta_max, std::int32_t jobs) {
  Spectrum spectrum = scan_spectrum(g, delta_max, jobs);
  const auto candidates = local_minima(spectrum.points);
  spectrum.minima = peak_prominences(spectrum.points, candidates);
  return spectrum;
}

std::vector<RollingPoint> rolling_dominant(const TemporalGraph& g, std::int32_t window_len,
                                           std::int32_t step, DominantMode mode, std::int32_t jobs) {
  if (window_len < 2 || window_len > g.num_steps())
    throw std::invalid_argument("rolling_dominant: need 2 <= window_len <= T");
  if (step < 1) throw std::invalid_argument("rolling_dominant: need step >= 1");

  std::vector<RollingPoint> series;
  for (std::int32_t start = 0; start + window_len <= g.num_steps(); start += step) {
    const TemporalGraph window = slice(g, start, start + window_len);
    const Spectrum spectrum = spectrogram(window, window_len, jobs);
    RollingPoint point;
    point.window_start = start;
    if (mode == DominantMode::top_prominence && !spectrum.minima.empty()) {
      point.dominant_delta = spectrum.minima.front().delta;
    } else {
      point.dominant_delta = spectrum.mdl_delta;
    }
    series.push_back(point);
  }
  return series;
}

ShockPhase classify_window(std::int32_t window_start, std::int32_t window_len,
                           std::int32_t shock_step) {
  if (window_start + window_len <= shock_step) return ShockPhase::pre;
  if (window_start > shock_step) return ShockPhase::post;
  return ShockPhase::during;
}

std::vector<double> renormalize_by_shock(std::span<const RollingPoint> series,
                                         std::int32_t window_len, std::int32_t shock_step) {
  double overlap_sum = 0.0;
  std::int64_t overlap_count = 0;
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& p : series) {
    const double v = p.dominant_delta;
    sum += v;
    sum_sq += v * v;
    if (classify_window(p.window_start, window_len, shock_step) == ShockPhase::during) {
      overlap_sum += v;
      ++overlap_count;
    }
  }
  if (series.empty()) throw std::invalid_argument("renormalize_by_shock: empty series");
  if (overlap_count == 0)
    throw std::invalid_argument("renormalize_by_shock: no window overlaps the shock step");

  const double n = static_cast<double>(series.size());
  const double mean = sum / n;
  const double variance = std::max(0.0, sum_sq / n - mean * mean);
  const double sd = std::sqrt(variance);
  const double reference = overlap_sum / static_cast<double>(overlap_count);
  const double scale = sd > 0.0 ? sd : 1.0;  // constant series stays centred at zero

  std::vector<double> out;
  out.reserve(series.size());
  for (const auto& p : series) out.push_back((p.dominant_delta - reference) / scale);
  return out;
}

}  // namespace netspect
