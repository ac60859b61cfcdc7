#include "test_support.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace netspect::testing {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_100;

BigInt big_factorial(std::int64_t n) {
  BigInt f = 1;
  for (std::int64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

BigInt big_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  BigInt num = 1, den = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    num *= n - i;
    den *= i + 1;
  }
  return num / den;
}

double rational_log2(const BigRational& r) {
  if (r <= 0) throw std::invalid_argument("rational_log2: non-positive value");
  const BigFloat num(boost::multiprecision::numerator(r));
  const BigFloat den(boost::multiprecision::denominator(r));
  const BigFloat ln2 = boost::multiprecision::log(BigFloat(2));
  return static_cast<double>((boost::multiprecision::log(num) - boost::multiprecision::log(den)) / ln2);
}

/// Exact rational HTCM window likelihood, including the per-step data term.
BigRational window_likelihood_rational(const WindowAggregate& w) {
  if (w.edge_count == 0) return BigRational(1);
  const std::int64_t m = w.edge_count;
  BigRational prob(1);
  prob /= BigRational(big_binomial(m * m, m));
  for (const auto& cell : w.cells) {
    const std::int64_t xi = w.out_degree[static_cast<std::size_t>(cell.source)] *
                            w.in_degree[static_cast<std::size_t>(cell.target)];
    // Falling factorial xi! / (xi - A)!
    BigInt rising = 1;
    for (std::int64_t i = 0; i < cell.count; ++i) rising *= xi - i;
    prob *= BigRational(rising);
  }
  BigInt delta_pow = 1;
  for (std::int64_t i = 0; i < m; ++i) delta_pow *= w.width;
  prob /= BigRational(delta_pow);
  return prob;
}

/// Per-step data factorials of a window, reconstructed from the graph.
BigRational window_data_term_rational(const TemporalGraph& g, std::int32_t begin, std::int32_t end) {
  BigRational inv(1);
  for (std::int32_t t = begin; t < end; ++t) {
    auto [first, last] = g.step_span(t);
    std::int64_t i = first;
    while (i < last) {
      std::int64_t j = i + 1;
      while (j < last &&
             g.events()[static_cast<std::size_t>(j)].source == g.events()[static_cast<std::size_t>(i)].source &&
             g.events()[static_cast<std::size_t>(j)].target == g.events()[static_cast<std::size_t>(i)].target)
        ++j;
      inv /= BigRational(big_factorial(j - i));
      i = j;
    }
  }
  return inv;
}

}  // namespace

std::vector<std::vector<std::int32_t>> all_compositions(std::int32_t total) {
  std::vector<std::vector<std::int32_t>> out;
  std::vector<std::int32_t> current;
  auto recurse = [&](auto&& self, std::int32_t remaining) -> void {
    if (remaining == 0) {
      out.push_back(current);
      return;
    }
    for (std::int32_t w = 1; w <= remaining; ++w) {
      current.push_back(w);
      self(self, remaining - w);
      current.pop_back();
    }
  };
  recurse(recurse, total);
  return out;
}

std::vector<CountMatrix> all_count_matrices(std::int32_t n, std::int64_t m,
                                            const ActivityVectors* act) {
  std::vector<CountMatrix> out;
  CountMatrix current(n);
  const std::int32_t cells = n * n;
  auto recurse = [&](auto&& self, std::int32_t cell, std::int64_t remaining) -> void {
    if (cell == cells) {
      if (remaining == 0) out.push_back(current);
      return;
    }
    const std::int32_t v = cell / n;
    const std::int32_t w = cell % n;
    std::int64_t cap = remaining;
    if (act != nullptr) {
      cap = std::min(cap, act->out_activity[static_cast<std::size_t>(v)] *
                              act->in_activity[static_cast<std::size_t>(w)]);
    }
    for (std::int64_t a = 0; a <= cap; ++a) {
      current(v, w) = a;
      self(self, cell + 1, remaining - a);
    }
    current(v, w) = 0;
  };
  recurse(recurse, 0, m);
  return out;
}

std::vector<std::vector<std::int64_t>> all_weak_compositions(std::int32_t n, std::int64_t m) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> current(static_cast<std::size_t>(n), 0);
  auto recurse = [&](auto&& self, std::int32_t part, std::int64_t remaining) -> void {
    if (part == n - 1) {
      current[static_cast<std::size_t>(part)] = remaining;
      out.push_back(current);
      return;
    }
    for (std::int64_t a = 0; a <= remaining; ++a) {
      current[static_cast<std::size_t>(part)] = a;
      self(self, part + 1, remaining - a);
    }
  };
  if (n == 0) return out;
  recurse(recurse, 0, m);
  return out;
}

double exact_hcm_log_prob(const CountMatrix& counts, const ActivityVectors& act) {
  const std::int32_t n = counts.size();
  BigInt urn_total = 0;
  BigRational prob(1);
  for (std::int32_t v = 0; v < n; ++v) {
    for (std::int32_t w = 0; w < n; ++w) {
      const std::int64_t xi = act.out_activity[static_cast<std::size_t>(v)] *
                              act.in_activity[static_cast<std::size_t>(w)];
      urn_total += xi;
      prob *= BigRational(big_binomial(xi, counts(v, w)));
    }
  }
  BigInt total_choose = 1;
  {
    // C(urn_total, m) with a big n; urn_total fits int64 in our tests.
    const auto total64 = static_cast<std::int64_t>(urn_total);
    total_choose = big_binomial(total64, act.edge_count);
  }
  prob /= BigRational(total_choose);
  if (prob == 0) return -std::numeric_limits<double>::infinity();
  return rational_log2(prob);
}

double exact_window_log_likelihood(const TemporalGraph& g, const WindowPartition& p,
                                   std::int32_t tau) {
  const auto windows = aggregate(g, p);
  const auto& w = windows[static_cast<std::size_t>(tau)];
  std::int32_t start = 0;
  for (std::int32_t i = 0; i < tau; ++i) start += p.widths()[static_cast<std::size_t>(i)];
  BigRational prob = window_likelihood_rational(w);
  prob *= window_data_term_rational(g, start, start + w.width);
  if (prob == 1) return 0.0;
  return rational_log2(prob);
}

double exact_description_length(const TemporalGraph& g, const WindowPartition& p) {
  const auto windows = aggregate(g, p);
  const std::int64_t T = g.num_steps();
  const std::int64_t M = g.num_events();
  const std::int64_t z = p.window_count();

  BigRational joint(1);
  std::int32_t start = 0;
  for (const auto& w : windows) {
    joint *= window_likelihood_rational(w);
    joint *= window_data_term_rational(g, start, start + w.width);
    // Activity priors, out and in.
    const BigInt compositions = big_binomial(g.num_nodes() + w.edge_count - 1, w.edge_count);
    joint /= BigRational(compositions * compositions);
    start += w.width;
  }
  // Edge-count multinomial prior.
  BigRational edge_prior(big_factorial(M));
  for (const auto& w : windows) edge_prior /= BigRational(big_factorial(w.edge_count));
  for (const auto& w : windows) {
    BigInt width_pow = 1, total_pow = 1;
    for (std::int64_t i = 0; i < w.edge_count; ++i) {
      width_pow *= w.width;
      total_pow *= T;
    }
    edge_prior *= BigRational(width_pow, total_pow);
  }
  joint *= edge_prior;
  // Partition prior.
  joint /= BigRational(big_binomial(T - 1, z - 1) * T);
  return -rational_log2(joint);
}

std::int64_t brute_force_prominence(const std::vector<std::int64_t>& y, std::size_t peak_index) {
  const std::int64_t h = y[peak_index];
  std::int64_t global_min = *std::min_element(y.begin(), y.end());
  // Highest threshold whose superlevel component containing the peak reaches
  // strictly higher ground; prominence is the drop to that level.
  std::optional<std::int64_t> key_level;
  for (std::int64_t level = h; level >= global_min; --level) {
    std::size_t lo = peak_index, hi = peak_index;
    while (lo > 0 && y[lo - 1] >= level) --lo;
    while (hi + 1 < y.size() && y[hi + 1] >= level) ++hi;
    bool reaches_higher = false;
    for (std::size_t i = lo; i <= hi; ++i) {
      if (y[i] > h) reaches_higher = true;
    }
    if (reaches_higher) {
      key_level = level;
      break;
    }
  }
  if (key_level) return h - *key_level;
  return h - global_min;
}

TemporalGraph random_graph(std::int32_t num_nodes, std::int32_t num_steps, std::int64_t num_events,
                           Rng& rng) {
  std::vector<TemporalEvent> events;
  events.reserve(static_cast<std::size_t>(num_events));
  for (std::int64_t i = 0; i < num_events; ++i) {
    events.push_back(TemporalEvent{static_cast<std::int32_t>(rng.uniform_int(0, num_nodes - 1)),
                                   static_cast<std::int32_t>(rng.uniform_int(0, num_nodes - 1)),
                                   static_cast<std::int32_t>(rng.uniform_int(0, num_steps - 1))});
  }
  return TemporalGraph(num_nodes, num_steps, std::move(events));
}

std::vector<std::int32_t> random_widths(std::int32_t total, Rng& rng) {
  std::vector<std::int32_t> widths;
  std::int32_t remaining = total;
  while (remaining > 0) {
    const auto w = static_cast<std::int32_t>(rng.uniform_int(1, remaining));
    widths.push_back(w);
    remaining -= w;
  }
  return widths;
}

}  // namespace netspect::testing
