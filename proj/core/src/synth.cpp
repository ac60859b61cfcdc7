#include "netspect/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace netspect {

void validate(const SynthConfig& cfg) {
  if (cfg.num_nodes < 1) throw std::invalid_argument("synth config: nodes must be >= 1");
  if (cfg.total_edges.has_value() == cfg.edges_per_window.has_value())
    throw std::invalid_argument("synth config: specify exactly one of total edges / edges per window");
  if (cfg.total_edges && *cfg.total_edges < 0)
    throw std::invalid_argument("synth config: total edges must be >= 0");
  if (cfg.edges_per_window && !(*cfg.edges_per_window >= 0.0))
    throw std::invalid_argument("synth config: edges per window must be >= 0");
  if (cfg.degree_cv && (*cfg.degree_cv < 0.0 || *cfg.degree_cv > 1.0))
    throw std::invalid_argument("synth config: degreeCV must lie in [0, 1]");
}

std::vector<std::int64_t> sample_edge_counts(std::int64_t total, const WindowPartition& p, Rng& rng) {
  if (total < 0) throw std::invalid_argument("sample_edge_counts: negative edge total");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(p.window_count()), 0);
  const auto boundaries = p.boundaries();
  const double T = p.total();
  for (std::int64_t e = 0; e < total; ++e) {
    // One multinomial trial: pick the window whose step range contains u*T.
    const double u = rng.uniform() * T;
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), u);
    std::size_t tau = static_cast<std::size_t>(it - boundaries.begin());
    if (tau >= counts.size()) tau = counts.size() - 1;
    ++counts[tau];
  }
  return counts;
}

namespace {

std::vector<std::int64_t> equal_composition(std::int32_t parts, std::int64_t m, Rng& rng) {
  std::vector<std::int64_t> xi(static_cast<std::size_t>(parts), m / parts);
  const auto remainder = static_cast<std::int64_t>(m % parts);
  if (remainder > 0) {
    // Spread the leftover units over distinct random positions.
    for (auto idx : rng.sample_distinct_sorted(remainder, parts)) ++xi[static_cast<std::size_t>(idx)];
  }
  return xi;
}

std::vector<std::int64_t> uniform_weak_composition(std::int32_t parts, std::int64_t m, Rng& rng) {
  // Stars and bars: choose the bar positions among m + parts - 1 slots.
  std::vector<std::int64_t> xi(static_cast<std::size_t>(parts), 0);
  if (parts == 1) {
    xi[0] = m;
    return xi;
  }
  const auto bars = rng.sample_distinct_sorted(parts - 1, m + parts - 1);
  std::int64_t prev = -1;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    xi[i] = bars[i] - prev - 1;
    prev = bars[i];
  }
  xi[static_cast<std::size_t>(parts) - 1] = (m + parts - 1) - prev - 1;
  return xi;
}

std::vector<std::int64_t> multinomial_from_weights(const std::vector<double>& weights,
                                                   std::int64_t m, Rng& rng) {
  std::vector<double> cumulative(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cumulative[i] = acc;
  }
  std::vector<std::int64_t> xi(weights.size(), 0);
  for (std::int64_t e = 0; e < m; ++e) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
    if (idx >= xi.size()) idx = xi.size() - 1;
    ++xi[idx];
  }
  return xi;
}

std::vector<std::int64_t> cv_composition(std::int32_t parts, std::int64_t m, double target_cv,
                                         Rng& rng) {
  const auto [cv_lo, cv_hi] = feasible_cv_range(parts, m);
  if (target_cv > cv_hi || m * target_cv * target_cv <= static_cast<double>(parts - 1)) {
    std::ostringstream msg;
    msg << "degreeCV target " << target_cv << " unreachable for N=" << parts << ", m=" << m
        << "; feasible range is about [" << cv_lo << ", " << cv_hi << "] (0 uses an equal split)";
    throw std::invalid_argument(msg.str());
  }
  // Symmetric Dirichlet calibrated so the realised CV of the multinomial
  // counts matches the target: E[CV^2] ~ (N-1)(m-1)/(m(Na+1)) + (N-1)/m.
  const double n = parts;
  const double md = static_cast<double>(m);
  double concentration =
      (n - 1.0) * (md - 1.0) / (n * (md * target_cv * target_cv - (n - 1.0))) - 1.0 / n;
  concentration = std::clamp(concentration, 1e-3, 1e9);
  const auto weights = rng.dirichlet(concentration, parts);
  return multinomial_from_weights(weights, m, rng);
}

}  // namespace

double coefficient_of_variation(std::span<const std::int64_t> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0, sum_sq = 0.0;
  for (auto v : values) {
    sum += static_cast<double>(v);
    sum_sq += static_cast<double>(v) * static_cast<double>(v);
  }
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  if (mean == 0.0) return 0.0;
  const double variance = std::max(0.0, sum_sq / n - mean * mean);
  return std::sqrt(variance) / mean;
}

std::pair<double, double> feasible_cv_range(std::int32_t num_nodes, std::int64_t m) {
  if (num_nodes < 1 || m < 1) return {0.0, 0.0};
  const double n = num_nodes;
  // The multinomial floor ~ sqrt((N-1)/m); the one-hot ceiling is sqrt(N-1).
  return {std::sqrt((n - 1.0) / static_cast<double>(m)), std::sqrt(n - 1.0)};
}

ActivityVectors sample_activities(std::int32_t num_nodes, std::int64_t m,
                                  std::optional<double> degree_cv, Rng& rng) {
  if (num_nodes < 1) throw std::invalid_argument("sample_activities: need at least one node");
  if (m < 0) throw std::invalid_argument("sample_activities: negative edge count");

  ActivityVectors act;
  act.edge_count = m;
  if (m == 0) {
    act.out_activity.assign(static_cast<std::size_t>(num_nodes), 0);
    act.in_activity.assign(static_cast<std::size_t>(num_nodes), 0);
    return act;
  }
  auto draw = [&]() {
    if (!degree_cv) return uniform_weak_composition(num_nodes, m, rng);
    if (*degree_cv == 0.0) return equal_composition(num_nodes, m, rng);
    return cv_composition(num_nodes, m, *degree_cv, rng);
  };
  act.out_activity = draw();
  act.in_activity = draw();
  return act;
}

CountMatrix sample_window(const ActivityVectors& act, Rng& rng) {
  const auto n = static_cast<std::int32_t>(act.out_activity.size());
  if (act.in_activity.size() != act.out_activity.size())
    throw std::invalid_argument("sample_window: activity vectors differ in length");
  CountMatrix counts(n);

  std::int64_t urn_remaining = 0;
  for (std::int32_t v = 0; v < n; ++v)
    for (std::int32_t w = 0; w < n; ++w)
      urn_remaining += act.out_activity[static_cast<std::size_t>(v)] *
                       act.in_activity[static_cast<std::size_t>(w)];

  std::int64_t draws_remaining = act.edge_count;
  for (std::int32_t v = 0; v < n && draws_remaining > 0; ++v) {
    const std::int64_t xo = act.out_activity[static_cast<std::size_t>(v)];
    if (xo == 0) {
      continue;
    }
    for (std::int32_t w = 0; w < n && draws_remaining > 0; ++w) {
      const std::int64_t cell = xo * act.in_activity[static_cast<std::size_t>(w)];
      if (cell == 0) continue;
      std::int64_t taken;
      if (urn_remaining == cell) {
        taken = draws_remaining;  // last non-empty cell takes the rest
      } else {
        taken = rng.hypergeometric(urn_remaining, cell, draws_remaining);
      }
      counts(v, w) = taken;
      draws_remaining -= taken;
      urn_remaining -= cell;
    }
  }
  return counts;
}

TemporalGraph sample_temporal(const SynthConfig& cfg, Rng& rng) {
  validate(cfg);
  const std::int32_t n = cfg.num_nodes;
  const WindowPartition& p = cfg.partition;

  std::vector<std::int64_t> window_edges;
  if (cfg.total_edges) {
    window_edges = sample_edge_counts(*cfg.total_edges, p, rng);
  } else {
    window_edges.reserve(static_cast<std::size_t>(p.window_count()));
    for (std::int32_t tau = 0; tau < p.window_count(); ++tau)
      window_edges.push_back(rng.poisson(*cfg.edges_per_window));
  }

  std::vector<TemporalEvent> events;
  std::int32_t start = 0;
  for (std::int32_t tau = 0; tau < p.window_count(); ++tau) {
    const std::int32_t width = p.widths()[static_cast<std::size_t>(tau)];
    const std::int64_t m = window_edges[static_cast<std::size_t>(tau)];
    const ActivityVectors act = sample_activities(n, m, cfg.degree_cv, rng);
    const CountMatrix counts = sample_window(act, rng);
    for (std::int32_t v = 0; v < n; ++v) {
      for (std::int32_t w = 0; w < n; ++w) {
        // Scatter the cell's multi-edges uniformly over the window's steps.
        for (std::int64_t k = 0; k < counts(v, w); ++k) {
          const auto offset = static_cast<std::int32_t>(rng.uniform_int(0, width - 1));
          events.push_back(TemporalEvent{v, w, start + offset});
        }
      }
    }
    start += width;
  }
  return TemporalGraph(n, p.total(), std::move(events));
}

TemporalGraph overlay(const TemporalGraph& a, const TemporalGraph& b) {
  if (a.num_nodes() != b.num_nodes() || a.num_steps() != b.num_steps())
    throw std::invalid_argument("overlay: graphs must share node count and time axis");
  std::vector<TemporalEvent> events = a.events();
  events.insert(events.end(), b.events().begin(), b.events().end());
  return TemporalGraph(a.num_nodes(), a.num_steps(), std::move(events));
}

}  // namespace netspect
