#include "netspect/htcm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "netspect/math.hpp"

namespace netspect {

double window_log_likelihood(const WindowAggregate& w) {
  if (w.edge_count == 0) return 0.0;
  const std::int64_t m = w.edge_count;
  NeumaierSum bits;
  bits.add(-log2_binomial(m * m, m));
  for (const auto& cell : w.cells) {
    const std::int64_t xi = w.out_degree[static_cast<std::size_t>(cell.source)] *
                            w.in_degree[static_cast<std::size_t>(cell.target)];
    bits.add(log2_falling_factorial(xi, cell.count));
  }
  bits.add(-static_cast<double>(m) * std::log2(static_cast<double>(w.width)));
  bits.add(-w.log_data_term_bits);
  return bits.value();
}

double partition_prior_bits(std::int64_t z, std::int64_t T) {
  if (T < 1 || z < 1 || z > T) throw std::invalid_argument("partition_prior_bits: need 1 <= z <= T");
  return log2_binomial(T - 1, z - 1) + std::log2(static_cast<double>(T));
}

double fixed_window_prior_bits(std::int64_t T) {
  if (T < 2) throw std::invalid_argument("fixed_window_prior_bits: need T >= 2");
  return std::log2(static_cast<double>(T) * static_cast<double>(T - 1) / 2.0);
}

void validate_fixed_window_partition(const WindowPartition& p) {
  const auto& w = p.widths();
  const std::int32_t z = p.window_count();
  if (z <= 2) return;  // (T), (alpha, omega): always expressible with some Delta
  const std::int32_t interior = w[1];
  for (std::int32_t i = 1; i + 1 < z; ++i) {
    if (w[static_cast<std::size_t>(i)] != interior)
      throw std::invalid_argument("fixed-window partition: interior widths differ");
  }
  if (w.front() > interior)
    throw std::invalid_argument("fixed-window partition: leading width exceeds the window size");
  if (w.back() > interior)
    throw std::invalid_argument("fixed-window partition: trailing width exceeds the window size");
}

double activity_prior_bits(std::int64_t num_nodes, std::int64_t m) {
  if (num_nodes < 1) throw std::invalid_argument("activity_prior_bits: need N >= 1");
  if (m < 0) throw std::invalid_argument("activity_prior_bits: need m >= 0");
  return 2.0 * log2_binomial(num_nodes + m - 1, m);
}

double edge_count_prior_bits(std::span<const std::int64_t> window_edges, const WindowPartition& p,
                             std::int64_t total_edges) {
  if (window_edges.size() != static_cast<std::size_t>(p.window_count()))
    throw std::invalid_argument("edge_count_prior_bits: length mismatch");
  std::int64_t sum = 0;
  for (auto m : window_edges) {
    if (m < 0) throw std::invalid_argument("edge_count_prior_bits: negative edge count");
    sum += m;
  }
  if (sum != total_edges) throw std::invalid_argument("edge_count_prior_bits: counts do not sum to M");

  const double log2_T = std::log2(static_cast<double>(p.total()));
  NeumaierSum bits;
  bits.add(-log2_factorial(total_edges));
  for (std::size_t tau = 0; tau < window_edges.size(); ++tau) {
    bits.add(log2_factorial(window_edges[tau]));
    bits.add(static_cast<double>(window_edges[tau]) *
             (log2_T - std::log2(static_cast<double>(p.widths()[tau]))));
  }
  return bits.value();
}

DLReport description_length(const TemporalGraph& g, const WindowPartition& p, PriorMode mode) {
  const auto windows = aggregate(g, p);
  const std::int64_t T = g.num_steps();
  const std::int64_t M = g.num_events();

  DLReport report;
  report.prior_mode = mode;
  report.per_window.reserve(windows.size());

  NeumaierSum total;
  NeumaierSum data_constant;
  NeumaierSum edge_prior;

  for (const auto& w : windows) {
    WindowTerms terms;
    // likelihood_bits excludes the per-step data term, which is constant
    // across partitions and accounted for in data_constant_bits.
    terms.likelihood_bits = -window_log_likelihood(w) - w.log_data_term_bits;
    terms.activity_prior_bits = activity_prior_bits(g.num_nodes(), w.edge_count);
    data_constant.add(w.log_data_term_bits);
    // Partition-dependent share of the multinomial prior.
    edge_prior.add(log2_factorial(w.edge_count));
    edge_prior.add(-static_cast<double>(w.edge_count) * std::log2(static_cast<double>(w.width)));
    total.add(terms.likelihood_bits);
    total.add(terms.activity_prior_bits);
    report.per_window.push_back(terms);
  }

  data_constant.add(-log2_factorial(M));
  data_constant.add(static_cast<double>(M) * std::log2(static_cast<double>(T)));
  report.data_constant_bits = data_constant.value();
  report.edge_count_prior_bits = edge_prior.value();

  if (mode == PriorMode::general) {
    report.partition_prior_bits = partition_prior_bits(p.window_count(), T);
  } else {
    validate_fixed_window_partition(p);
    report.partition_prior_bits = fixed_window_prior_bits(T);
  }

  total.add(report.edge_count_prior_bits);
  total.add(report.partition_prior_bits);
  total.add(report.data_constant_bits);
  report.total_bits = total.value();
  return report;
}

WindowPartition apply_edit(const WindowPartition& p, const PartitionEdit& e) {
  std::vector<std::int32_t> widths = p.widths();
  const auto z = static_cast<std::int32_t>(widths.size());
  const std::int32_t tau = e.window;
  switch (e.kind) {
    case PartitionEdit::Kind::split: {
      if (tau < 0 || tau >= z) throw std::invalid_argument("apply_edit: split window out of range");
      const std::int32_t width = widths[static_cast<std::size_t>(tau)];
      if (e.point < 1 || e.point >= width)
        throw std::invalid_argument("apply_edit: split point not interior to the window");
      widths[static_cast<std::size_t>(tau)] = e.point;
      widths.insert(widths.begin() + tau + 1, width - e.point);
      break;
    }
    case PartitionEdit::Kind::join: {
      if (tau < 0 || tau + 1 >= z) throw std::invalid_argument("apply_edit: join pair out of range");
      widths[static_cast<std::size_t>(tau)] += widths[static_cast<std::size_t>(tau) + 1];
      widths.erase(widths.begin() + tau + 1);
      break;
    }
    case PartitionEdit::Kind::move: {
      if (tau < 0 || tau + 1 >= z) throw std::invalid_argument("apply_edit: move pair out of range");
      const std::int32_t merged =
          widths[static_cast<std::size_t>(tau)] + widths[static_cast<std::size_t>(tau) + 1];
      if (e.point < 1 || e.point >= merged)
        throw std::invalid_argument("apply_edit: move point not interior to the merged window");
      widths[static_cast<std::size_t>(tau)] = e.point;
      widths[static_cast<std::size_t>(tau) + 1] = merged - e.point;
      break;
    }
  }
  return WindowPartition(std::move(widths));
}

// ---------------------------------------------------------------------------
// DLEvaluator

struct DLEvaluator::Impl {
  std::int32_t num_nodes = 0;
  std::int32_t num_steps = 0;
  std::int64_t num_events = 0;

  // Per-step aggregated cells, CSR layout.
  std::vector<std::int64_t> cell_offsets;  // num_steps + 1
  std::vector<std::int64_t> cell_key;      // source * N + target
  std::vector<std::int64_t> cell_count;

  // Prefix over steps of sum_vw log2(A_vwt!).
  std::vector<double> log_data_prefix;

  double data_constant = 0.0;

  // Scratch for one window evaluation (dense when N^2 is small).
  bool dense_scratch = false;
  mutable std::vector<std::int64_t> acc_cells;
  mutable std::vector<std::int64_t> touched_cells;
  mutable std::unordered_map<std::int64_t, std::int64_t> acc_cells_sparse;
  mutable std::vector<std::int64_t> out_degree, in_degree;
  mutable std::vector<std::int32_t> touched_out, touched_in;

  mutable std::unordered_map<std::uint64_t, double> memo;

  double compute_window_bits(std::int32_t begin, std::int32_t end) const;
};

DLEvaluator::DLEvaluator(const TemporalGraph& g) : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  s.num_nodes = g.num_nodes();
  s.num_steps = g.num_steps();
  s.num_events = g.num_events();

  const auto& events = g.events();
  s.cell_offsets.assign(static_cast<std::size_t>(s.num_steps) + 1, 0);
  s.log_data_prefix.assign(static_cast<std::size_t>(s.num_steps) + 1, 0.0);

  NeumaierSum data_bits;
  for (std::int32_t t = 0; t < s.num_steps; ++t) {
    auto [first, last] = g.step_span(t);
    std::size_t j = static_cast<std::size_t>(first);
    while (j < static_cast<std::size_t>(last)) {
      const TemporalEvent& e = events[j];
      std::size_t k = j + 1;
      while (k < static_cast<std::size_t>(last) && events[k].source == e.source &&
             events[k].target == e.target)
        ++k;
      const auto count = static_cast<std::int64_t>(k - j);
      s.cell_key.push_back(static_cast<std::int64_t>(e.source) * s.num_nodes + e.target);
      s.cell_count.push_back(count);
      data_bits.add(log2_factorial(count));
      j = k;
    }
    s.cell_offsets[static_cast<std::size_t>(t) + 1] = static_cast<std::int64_t>(s.cell_key.size());
    s.log_data_prefix[static_cast<std::size_t>(t) + 1] = data_bits.value();
  }

  NeumaierSum constant;
  constant.add(data_bits.value());
  constant.add(-log2_factorial(s.num_events));
  constant.add(static_cast<double>(s.num_events) * std::log2(static_cast<double>(s.num_steps)));
  s.data_constant = constant.value();

  const std::int64_t n2 = static_cast<std::int64_t>(s.num_nodes) * s.num_nodes;
  s.dense_scratch = n2 <= (1 << 22);
  if (s.dense_scratch) s.acc_cells.assign(static_cast<std::size_t>(n2), 0);
  s.out_degree.assign(static_cast<std::size_t>(s.num_nodes), 0);
  s.in_degree.assign(static_cast<std::size_t>(s.num_nodes), 0);
}

DLEvaluator::~DLEvaluator() = default;

std::int32_t DLEvaluator::num_steps() const { return impl_->num_steps; }
std::int32_t DLEvaluator::num_nodes() const { return impl_->num_nodes; }
std::int64_t DLEvaluator::num_events() const { return impl_->num_events; }
double DLEvaluator::data_constant_bits() const { return impl_->data_constant; }

double DLEvaluator::Impl::compute_window_bits(std::int32_t begin, std::int32_t end) const {
  // Accumulate the window's cells and degrees.
  std::int64_t m = 0;
  const std::int64_t first = cell_offsets[static_cast<std::size_t>(begin)];
  const std::int64_t last = cell_offsets[static_cast<std::size_t>(end)];

  touched_out.clear();
  touched_in.clear();
  touched_cells.clear();
  if (!dense_scratch) acc_cells_sparse.clear();

  for (std::int64_t i = first; i < last; ++i) {
    const std::int64_t key = cell_key[static_cast<std::size_t>(i)];
    const std::int64_t c = cell_count[static_cast<std::size_t>(i)];
    const auto v = static_cast<std::int32_t>(key / num_nodes);
    const auto w = static_cast<std::int32_t>(key % num_nodes);
    if (dense_scratch) {
      if (acc_cells[static_cast<std::size_t>(key)] == 0) touched_cells.push_back(key);
      acc_cells[static_cast<std::size_t>(key)] += c;
    } else {
      acc_cells_sparse[key] += c;
    }
    if (out_degree[static_cast<std::size_t>(v)] == 0) touched_out.push_back(v);
    out_degree[static_cast<std::size_t>(v)] += c;
    if (in_degree[static_cast<std::size_t>(w)] == 0) touched_in.push_back(w);
    in_degree[static_cast<std::size_t>(w)] += c;
    m += c;
  }

  double bits = 0.0;
  if (m > 0) {
    NeumaierSum sum;
    // C(m^2, m) + m! + 2 C(N+m-1, m); the Delta-dependent factors of the
    // likelihood and the multinomial prior cancel against each other.
    sum.add(log2_binomial(m * m, m));
    sum.add(log2_factorial(m));
    sum.add(2.0 * log2_binomial(static_cast<std::int64_t>(num_nodes) + m - 1, m));
    auto add_cell = [&](std::int64_t key, std::int64_t count) {
      const auto v = static_cast<std::int32_t>(key / num_nodes);
      const auto w = static_cast<std::int32_t>(key % num_nodes);
      const std::int64_t xi =
          out_degree[static_cast<std::size_t>(v)] * in_degree[static_cast<std::size_t>(w)];
      sum.add(-log2_falling_factorial(xi, count));
    };
    if (dense_scratch) {
      for (std::int64_t key : touched_cells) add_cell(key, acc_cells[static_cast<std::size_t>(key)]);
    } else {
      for (const auto& [key, count] : acc_cells_sparse) add_cell(key, count);
    }
    bits = sum.value();
  }

  // Reset scratch.
  if (dense_scratch) {
    for (std::int64_t key : touched_cells) acc_cells[static_cast<std::size_t>(key)] = 0;
  }
  for (auto v : touched_out) out_degree[static_cast<std::size_t>(v)] = 0;
  for (auto w : touched_in) in_degree[static_cast<std::size_t>(w)] = 0;
  return bits;
}

double DLEvaluator::window_bits(std::int32_t begin, std::int32_t end) const {
  Impl& s = *impl_;
  if (begin < 0 || end > s.num_steps || begin >= end)
    throw std::invalid_argument("window_bits: bad step range");
  const std::uint64_t key =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(begin)) << 32) |
      static_cast<std::uint32_t>(end);
  auto it = s.memo.find(key);
  if (it != s.memo.end()) return it->second;
  const double bits = s.compute_window_bits(begin, end);
  if (s.memo.size() >= (1u << 23)) s.memo.clear();  // keep the cache bounded
  s.memo.emplace(key, bits);
  return bits;
}

double DLEvaluator::partition_bits(std::span<const std::int32_t> widths, PriorMode mode) const {
  const Impl& s = *impl_;
  std::int64_t total = 0;
  for (auto w : widths) total += w;
  if (total != s.num_steps) throw std::invalid_argument("partition_bits: widths do not sum to T");

  NeumaierSum sum;
  std::int32_t start = 0;
  for (auto w : widths) {
    sum.add(window_bits(start, start + w));
    start += w;
  }
  if (mode == PriorMode::general) {
    sum.add(partition_prior_bits(static_cast<std::int64_t>(widths.size()), s.num_steps));
  } else {
    sum.add(fixed_window_prior_bits(s.num_steps));
  }
  sum.add(s.data_constant);
  return sum.value();
}

double DLEvaluator::delta_bits(std::span<const std::int32_t> widths, const PartitionEdit& e) const {
  const Impl& s = *impl_;
  const auto z = static_cast<std::int64_t>(widths.size());
  const std::int32_t tau = e.window;

  std::int32_t start = 0;
  for (std::int32_t i = 0; i < tau; ++i) start += widths[static_cast<std::size_t>(i)];

  switch (e.kind) {
    case PartitionEdit::Kind::split: {
      if (tau < 0 || tau >= z) throw std::invalid_argument("delta_bits: split window out of range");
      const std::int32_t width = widths[static_cast<std::size_t>(tau)];
      if (e.point < 1 || e.point >= width)
        throw std::invalid_argument("delta_bits: split point not interior to the window");
      const double before = window_bits(start, start + width);
      const double after =
          window_bits(start, start + e.point) + window_bits(start + e.point, start + width);
      return after - before + partition_prior_bits(z + 1, s.num_steps) -
             partition_prior_bits(z, s.num_steps);
    }
    case PartitionEdit::Kind::join: {
      if (tau < 0 || tau + 1 >= z) throw std::invalid_argument("delta_bits: join pair out of range");
      const std::int32_t wa = widths[static_cast<std::size_t>(tau)];
      const std::int32_t wb = widths[static_cast<std::size_t>(tau) + 1];
      const double before = window_bits(start, start + wa) + window_bits(start + wa, start + wa + wb);
      const double after = window_bits(start, start + wa + wb);
      return after - before + partition_prior_bits(z - 1, s.num_steps) -
             partition_prior_bits(z, s.num_steps);
    }
    case PartitionEdit::Kind::move: {
      if (tau < 0 || tau + 1 >= z) throw std::invalid_argument("delta_bits: move pair out of range");
      const std::int32_t wa = widths[static_cast<std::size_t>(tau)];
      const std::int32_t wb = widths[static_cast<std::size_t>(tau) + 1];
      const std::int32_t merged = wa + wb;
      if (e.point < 1 || e.point >= merged)
        throw std::invalid_argument("delta_bits: move point not interior to the merged window");
      const double before = window_bits(start, start + wa) + window_bits(start + wa, start + merged);
      const double after =
          window_bits(start, start + e.point) + window_bits(start + e.point, start + merged);
      return after - before;
    }
  }
  throw std::logic_error("delta_bits: unreachable");
}

double dl_delta(const TemporalGraph& g, const WindowPartition& p, const PartitionEdit& e) {
  if (p.total() != g.num_steps())
    throw std::invalid_argument("dl_delta: partition does not cover the graph's time axis");
  DLEvaluator eval(g);
  return eval.delta_bits(p.widths(), e);
}

}  // namespace netspect
