#include "netspect/mcmc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "netspect/math.hpp"

namespace netspect {

namespace {

Proposal propose_widths(const std::vector<std::int32_t>& widths, Rng& rng) {
  const auto z = static_cast<std::int64_t>(widths.size());
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const std::int64_t kind = rng.uniform_int(0, 2);
    if (kind == 0) {  // split
      const auto tau = static_cast<std::int32_t>(rng.uniform_int(0, z - 1));
      const std::int32_t width = widths[static_cast<std::size_t>(tau)];
      if (width < 2) continue;  // no interior point; resample
      const auto point = static_cast<std::int32_t>(rng.uniform_int(1, width - 1));
      Proposal prop;
      prop.edit = PartitionEdit{PartitionEdit::Kind::split, tau, point};
      prop.log_forward = -std::log(3.0) - std::log(static_cast<double>(z)) -
                         std::log(static_cast<double>(width - 1));
      // Reverting joins one of the z pairs of the (z+1)-window partition.
      prop.log_backward = -std::log(3.0) - std::log(static_cast<double>(z));
      return prop;
    }
    if (kind == 1) {  // join
      if (z < 2) continue;
      const auto tau = static_cast<std::int32_t>(rng.uniform_int(0, z - 2));
      const std::int32_t merged =
          widths[static_cast<std::size_t>(tau)] + widths[static_cast<std::size_t>(tau) + 1];
      Proposal prop;
      prop.edit = PartitionEdit{PartitionEdit::Kind::join, tau, 0};
      prop.log_forward = -std::log(3.0) - std::log(static_cast<double>(z - 1));
      // Reverting splits the merged window, one of z-1, at one of merged-1 points.
      prop.log_backward = -std::log(3.0) - std::log(static_cast<double>(z - 1)) -
                          std::log(static_cast<double>(merged - 1));
      return prop;
    }
    // move
    if (z < 2) continue;
    const auto tau = static_cast<std::int32_t>(rng.uniform_int(0, z - 2));
    const std::int32_t merged =
        widths[static_cast<std::size_t>(tau)] + widths[static_cast<std::size_t>(tau) + 1];
    const auto point = static_cast<std::int32_t>(rng.uniform_int(1, merged - 1));
    Proposal prop;
    prop.edit = PartitionEdit{PartitionEdit::Kind::move, tau, point};
    const double lp = -std::log(3.0) - std::log(static_cast<double>(z - 1)) -
                      std::log(static_cast<double>(merged - 1));
    prop.log_forward = lp;
    prop.log_backward = lp;
    return prop;
  }
  throw std::logic_error("propose: no valid edit found (is T >= 2?)");
}

// Probability that a single raw draw is degenerate and must be resampled:
// join and move need z >= 2, split needs a window of width >= 2.
double log_valid_mass(std::int64_t z, std::int64_t width_one_count) {
  double q = 0.0;
  if (z == 1) q += 2.0 / 3.0;
  q += (1.0 / 3.0) * static_cast<double>(width_one_count) / static_cast<double>(z);
  if (q >= 1.0) throw std::logic_error("log_valid_mass: no valid proposal exists");
  return std::log1p(-q);
}

struct EditOutcome {
  std::int64_t new_z = 0;
  std::int64_t new_width_one = 0;
};

EditOutcome edit_outcome(const std::vector<std::int32_t>& widths, std::int64_t z,
                         std::int64_t width_one, const PartitionEdit& e) {
  EditOutcome out;
  const auto tau = static_cast<std::size_t>(e.window);
  switch (e.kind) {
    case PartitionEdit::Kind::split: {
      const std::int32_t w = widths[tau];
      out.new_z = z + 1;
      out.new_width_one = width_one + (e.point == 1 ? 1 : 0) + (w - e.point == 1 ? 1 : 0);
      break;
    }
    case PartitionEdit::Kind::join: {
      out.new_z = z - 1;
      out.new_width_one = width_one - (widths[tau] == 1 ? 1 : 0) - (widths[tau + 1] == 1 ? 1 : 0);
      break;
    }
    case PartitionEdit::Kind::move: {
      const std::int32_t merged = widths[tau] + widths[tau + 1];
      out.new_z = z;
      out.new_width_one = width_one - (widths[tau] == 1 ? 1 : 0) - (widths[tau + 1] == 1 ? 1 : 0) +
                          (e.point == 1 ? 1 : 0) + (merged - e.point == 1 ? 1 : 0);
      break;
    }
  }
  return out;
}

void apply_edit_in_place(std::vector<std::int32_t>& widths, const PartitionEdit& e) {
  const auto tau = static_cast<std::size_t>(e.window);
  switch (e.kind) {
    case PartitionEdit::Kind::split: {
      const std::int32_t w = widths[tau];
      widths[tau] = e.point;
      widths.insert(widths.begin() + e.window + 1, w - e.point);
      break;
    }
    case PartitionEdit::Kind::join:
      widths[tau] += widths[tau + 1];
      widths.erase(widths.begin() + e.window + 1);
      break;
    case PartitionEdit::Kind::move: {
      const std::int32_t merged = widths[tau] + widths[tau + 1];
      widths[tau] = e.point;
      widths[tau + 1] = merged - e.point;
      break;
    }
  }
}

std::vector<std::int32_t> initial_widths(const TemporalGraph& g, const ChainConfig& cfg) {
  switch (cfg.init) {
    case ChainConfig::Init::single_window:
      return {g.num_steps()};
    case ChainConfig::Init::singletons:
      return std::vector<std::int32_t>(static_cast<std::size_t>(g.num_steps()), 1);
    case ChainConfig::Init::given:
      if (cfg.init_partition.total() != g.num_steps())
        throw std::invalid_argument("run_chains: init partition does not cover the time axis");
      return cfg.init_partition.widths();
  }
  throw std::logic_error("run_chains: unknown init mode");
}

ChainResult run_one_chain(const TemporalGraph& g, const ChainConfig& cfg, std::int32_t chain_index) {
  DLEvaluator eval(g);
  Rng rng(Rng::mix(cfg.seed, static_cast<std::uint64_t>(chain_index)));

  ChainResult result;
  result.chain_index = chain_index;

  std::vector<std::int32_t> widths = initial_widths(g, cfg);
  std::int64_t width_one = static_cast<std::int64_t>(std::count(widths.begin(), widths.end(), 1));
  double current_bits = eval.partition_bits(widths, PriorMode::general);

  result.best_partition = WindowPartition(widths);
  result.best_bits = current_bits;
  result.trace.reserve(static_cast<std::size_t>(cfg.sweeps));

  const std::int64_t attempts_per_sweep = g.num_steps();
  std::int64_t attempt_counter = 0;
  std::int64_t sweeps_since_improvement = 0;

  auto schedule_it = cfg.anneal_schedule.begin();
  double beta = cfg.beta;

  for (std::int64_t sweep = 0; sweep < cfg.sweeps; ++sweep) {
    while (schedule_it != cfg.anneal_schedule.end() && schedule_it->first <= sweep) {
      beta = schedule_it->second;
      ++schedule_it;
    }
    const double best_before_sweep = result.best_bits;

    for (std::int64_t a = 0; a < attempts_per_sweep; ++a) {
      const auto z = static_cast<std::int64_t>(widths.size());
      Proposal prop = propose_widths(widths, rng);
      const double delta = eval.delta_bits(widths, prop.edit);
      const EditOutcome outcome = edit_outcome(widths, z, width_one, prop.edit);

      // Fold the resampling normalisation into the proposal probabilities so
      // detailed balance holds exactly at beta = 1.
      const double log_fwd = prop.log_forward - log_valid_mass(z, width_one);
      const double log_bwd = prop.log_backward - log_valid_mass(outcome.new_z, outcome.new_width_one);

      MoveStats& stats = prop.edit.kind == PartitionEdit::Kind::split   ? result.split_stats
                         : prop.edit.kind == PartitionEdit::Kind::join ? result.join_stats
                                                                       : result.move_stats;
      ++stats.proposed;

      const double p_accept = accept_probability(delta, log_fwd, log_bwd, beta);
      if (p_accept >= 1.0 || rng.uniform() < p_accept) {
        apply_edit_in_place(widths, prop.edit);
        width_one = outcome.new_width_one;
        current_bits += delta;
        ++stats.accepted;
        if (current_bits < result.best_bits) {
          result.best_bits = current_bits;
          result.best_partition = WindowPartition(widths);
        }
      }

      ++attempt_counter;
      if (cfg.sample_every > 0 && attempt_counter % cfg.sample_every == 0)
        result.samples.emplace_back(WindowPartition(widths), current_bits);
      if (cfg.on_state) cfg.on_state(std::span<const std::int32_t>(widths), current_bits);
    }

    // Re-anchor the running total so accumulated deltas cannot drift.
    current_bits = eval.partition_bits(widths, PriorMode::general);
    result.trace.push_back(current_bits);

    if (cfg.plateau_sweeps > 0) {
      sweeps_since_improvement =
          result.best_bits < best_before_sweep ? 0 : sweeps_since_improvement + 1;
      if (sweeps_since_improvement >= cfg.plateau_sweeps) break;
    }
  }
  return result;
}

}  // namespace

Proposal propose(const WindowPartition& p, Rng& rng) { return propose_widths(p.widths(), rng); }

double accept_probability(double delta_bits, double log_forward, double log_backward, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("accept_probability: beta must be positive");
  const double exponent = -kLn2 * delta_bits / beta + (log_backward - log_forward);
  if (exponent >= 0.0) return 1.0;
  return std::exp(exponent);
}

ChainResult run_chains(const TemporalGraph& g, const ChainConfig& cfg) {
  if (cfg.sweeps < 1) throw std::invalid_argument("run_chains: need at least one sweep");
  if (cfg.chains < 1) throw std::invalid_argument("run_chains: need at least one chain");
  if (!(cfg.beta > 0.0)) throw std::invalid_argument("run_chains: beta must be positive");

  if (g.num_steps() == 1) {
    // Only one partition exists; nothing to explore.
    DLEvaluator eval(g);
    ChainResult result;
    result.best_partition = WindowPartition::single_window(1);
    result.best_bits = eval.partition_bits(result.best_partition.widths(), PriorMode::general);
    result.trace.assign(static_cast<std::size_t>(cfg.sweeps), result.best_bits);
    return result;
  }

  std::vector<ChainResult> results(static_cast<std::size_t>(cfg.chains));
  const std::int32_t jobs = cfg.on_state ? 1 : std::max<std::int32_t>(1, std::min(cfg.jobs, cfg.chains));
  if (jobs == 1) {
    for (std::int32_t c = 0; c < cfg.chains; ++c)
      results[static_cast<std::size_t>(c)] = run_one_chain(g, cfg, c);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::int32_t> next{0};
    for (std::int32_t j = 0; j < jobs; ++j) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::int32_t c = next.fetch_add(1);
          if (c >= cfg.chains) return;
          results[static_cast<std::size_t>(c)] = run_one_chain(g, cfg, c);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::size_t best = 0;
  for (std::size_t c = 1; c < results.size(); ++c) {
    if (results[c].best_bits < results[best].best_bits) best = c;
  }
  return results[best];
}

std::pair<WindowPartition, double> greedy_refine(const TemporalGraph& g, const WindowPartition& p) {
  if (p.total() != g.num_steps())
    throw std::invalid_argument("greedy_refine: partition does not cover the time axis");
  DLEvaluator eval(g);
  std::vector<std::int32_t> widths = p.widths();

  constexpr double kImprovement = -1e-9;
  for (int round = 0; round < 1000; ++round) {
    double best_delta = 0.0;
    PartitionEdit best_edit;
    bool found = false;
    const auto z = static_cast<std::int32_t>(widths.size());

    for (std::int32_t tau = 0; tau < z; ++tau) {
      const std::int32_t width = widths[static_cast<std::size_t>(tau)];
      for (std::int32_t t = 1; t < width; ++t) {
        const PartitionEdit e{PartitionEdit::Kind::split, tau, t};
        const double d = eval.delta_bits(widths, e);
        if (d < best_delta) {
          best_delta = d;
          best_edit = e;
          found = true;
        }
      }
    }
    for (std::int32_t tau = 0; tau + 1 < z; ++tau) {
      const PartitionEdit e{PartitionEdit::Kind::join, tau, 0};
      const double d = eval.delta_bits(widths, e);
      if (d < best_delta) {
        best_delta = d;
        best_edit = e;
        found = true;
      }
      const std::int32_t merged =
          widths[static_cast<std::size_t>(tau)] + widths[static_cast<std::size_t>(tau) + 1];
      for (std::int32_t t = 1; t < merged; ++t) {
        if (t == widths[static_cast<std::size_t>(tau)]) continue;
        const PartitionEdit m{PartitionEdit::Kind::move, tau, t};
        const double d2 = eval.delta_bits(widths, m);
        if (d2 < best_delta) {
          best_delta = d2;
          best_edit = m;
          found = true;
        }
      }
    }

    if (!found || best_delta > kImprovement) break;
    apply_edit_in_place(widths, best_edit);
  }

  const double bits = eval.partition_bits(widths, PriorMode::general);
  return {WindowPartition(std::move(widths)), bits};
}

std::vector<std::pair<std::int64_t, double>> geometric_schedule(std::int64_t sweeps, double beta_start,
                                                                double beta_end) {
  if (sweeps < 1) throw std::invalid_argument("geometric_schedule: need at least one sweep");
  if (!(beta_start > 0.0) || !(beta_end > 0.0))
    throw std::invalid_argument("geometric_schedule: temperatures must be positive");
  std::vector<std::pair<std::int64_t, double>> schedule;
  schedule.reserve(static_cast<std::size_t>(sweeps));
  for (std::int64_t s = 0; s < sweeps; ++s) {
    const double frac = sweeps == 1 ? 1.0 : static_cast<double>(s) / static_cast<double>(sweeps - 1);
    schedule.emplace_back(s, beta_start * std::pow(beta_end / beta_start, frac));
  }
  return schedule;
}

}  // namespace netspect
