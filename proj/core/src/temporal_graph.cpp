#include "netspect/temporal_graph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <istream>
#include <string_view>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "netspect/math.hpp"

namespace netspect {

TemporalGraph::TemporalGraph(std::int32_t num_nodes, std::int32_t num_steps,
                             std::vector<TemporalEvent> events)
    : num_nodes_(num_nodes), num_steps_(num_steps), events_(std::move(events)) {
  if (num_nodes_ < 1) throw std::invalid_argument("TemporalGraph: need at least one node");
  if (num_steps_ < 1) throw std::invalid_argument("TemporalGraph: need at least one time step");
  for (const auto& e : events_) {
    if (e.source < 0 || e.source >= num_nodes_ || e.target < 0 || e.target >= num_nodes_)
      throw std::invalid_argument("TemporalGraph: event node id out of range");
    if (e.step < 0 || e.step >= num_steps_)
      throw std::invalid_argument("TemporalGraph: event step out of range");
  }
  std::sort(events_.begin(), events_.end(), [](const TemporalEvent& a, const TemporalEvent& b) {
    if (a.step != b.step) return a.step < b.step;
    if (a.source != b.source) return a.source < b.source;
    return a.target < b.target;
  });
  step_offsets_.assign(static_cast<std::size_t>(num_steps_) + 1, 0);
  for (const auto& e : events_) ++step_offsets_[static_cast<std::size_t>(e.step) + 1];
  for (std::size_t t = 1; t < step_offsets_.size(); ++t) step_offsets_[t] += step_offsets_[t - 1];
}

WindowPartition::WindowPartition(std::vector<std::int32_t> widths) : widths_(std::move(widths)) {
  if (widths_.empty()) throw std::invalid_argument("WindowPartition: no windows");
  std::int64_t total = 0;
  for (auto w : widths_) {
    if (w < 1) throw std::invalid_argument("WindowPartition: window widths must be >= 1");
    total += w;
  }
  if (total > std::numeric_limits<std::int32_t>::max())
    throw std::invalid_argument("WindowPartition: total width overflows");
  total_ = static_cast<std::int32_t>(total);
}

WindowPartition WindowPartition::single_window(std::int32_t total) {
  return WindowPartition(std::vector<std::int32_t>{total});
}

WindowPartition WindowPartition::singletons(std::int32_t total) {
  if (total < 1) throw std::invalid_argument("WindowPartition: total must be >= 1");
  return WindowPartition(std::vector<std::int32_t>(static_cast<std::size_t>(total), 1));
}

std::vector<std::int32_t> WindowPartition::boundaries() const {
  std::vector<std::int32_t> b;
  b.reserve(widths_.size());
  std::int32_t acc = 0;
  for (auto w : widths_) {
    acc += w;
    b.push_back(acc);
  }
  return b;
}

std::vector<WindowAggregate> aggregate(const TemporalGraph& g, const WindowPartition& p) {
  if (p.total() != g.num_steps())
    throw std::invalid_argument("aggregate: partition does not cover the graph's time axis");

  const std::int32_t n = g.num_nodes();
  std::vector<WindowAggregate> out;
  out.reserve(static_cast<std::size_t>(p.window_count()));

  std::unordered_map<std::uint64_t, std::int64_t> window_cells;
  std::int32_t start = 0;
  for (std::int32_t tau = 0; tau < p.window_count(); ++tau) {
    const std::int32_t width = p.widths()[static_cast<std::size_t>(tau)];
    const std::int32_t end = start + width;

    WindowAggregate agg;
    agg.tau = tau;
    agg.width = width;
    agg.out_degree.assign(static_cast<std::size_t>(n), 0);
    agg.in_degree.assign(static_cast<std::size_t>(n), 0);
    window_cells.clear();

    NeumaierSum data_term;
    for (std::int32_t t = start; t < end; ++t) {
      auto [first, last] = g.step_span(t);
      std::int64_t i = first;
      while (i < last) {
        const TemporalEvent& e = g.events()[static_cast<std::size_t>(i)];
        std::int64_t j = i + 1;
        while (j < last) {
          const TemporalEvent& f = g.events()[static_cast<std::size_t>(j)];
          if (f.source != e.source || f.target != e.target) break;
          ++j;
        }
        const std::int64_t step_count = j - i;  // A_vwt
        data_term.add(log2_factorial(step_count));
        window_cells[(static_cast<std::uint64_t>(e.source) << 32) |
                     static_cast<std::uint32_t>(e.target)] += step_count;
        agg.out_degree[static_cast<std::size_t>(e.source)] += step_count;
        agg.in_degree[static_cast<std::size_t>(e.target)] += step_count;
        agg.edge_count += step_count;
        i = j;
      }
    }
    agg.log_data_term_bits = data_term.value();

    agg.cells.reserve(window_cells.size());
    for (const auto& [key, count] : window_cells) {
      agg.cells.push_back(CellCount{static_cast<std::int32_t>(key >> 32),
                                    static_cast<std::int32_t>(key & 0xffffffffu), count});
    }
    std::sort(agg.cells.begin(), agg.cells.end(), [](const CellCount& a, const CellCount& b) {
      if (a.source != b.source) return a.source < b.source;
      return a.target < b.target;
    });

    out.push_back(std::move(agg));
    start = end;
  }
  return out;
}

TemporalGraph rebin(const TemporalGraph& g, std::int32_t resolution) {
  if (resolution < 1) throw std::invalid_argument("rebin: resolution must be >= 1");
  if (resolution == 1) return g;
  std::vector<TemporalEvent> events = g.events();
  for (auto& e : events) e.step /= resolution;
  std::int32_t new_steps = (g.num_steps() + resolution - 1) / resolution;
  return TemporalGraph(g.num_nodes(), new_steps, std::move(events));
}

TemporalGraph slice(const TemporalGraph& g, std::int32_t t0, std::int32_t t1) {
  if (t0 < 0 || t1 > g.num_steps() || t0 >= t1)
    throw std::invalid_argument("slice: need 0 <= t0 < t1 <= T");
  std::vector<TemporalEvent> events;
  auto [first, unused_last0] = g.step_span(t0);
  auto [unused_first1, last] = g.step_span(t1 - 1);
  (void)unused_last0;
  (void)unused_first1;
  events.reserve(static_cast<std::size_t>(last - first));
  for (std::int64_t i = first; i < last; ++i) {
    TemporalEvent e = g.events()[static_cast<std::size_t>(i)];
    e.step -= t0;
    events.push_back(e);
  }
  return TemporalGraph(g.num_nodes(), t1 - t0, std::move(events));
}

namespace {

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  // Howard Hinnant's algorithm; valid over the full civil calendar.
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::int64_t parse_iso_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw ParseError("expected YYYY-MM-DD date, got '" + text + "'");
  auto digits = [&](int from, int to) {
    std::int64_t v = 0;
    for (int i = from; i < to; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[static_cast<std::size_t>(i)])))
        throw ParseError("expected YYYY-MM-DD date, got '" + text + "'");
      v = v * 10 + (text[static_cast<std::size_t>(i)] - '0');
    }
    return v;
  };
  std::int64_t y = digits(0, 4);
  std::int64_t m = digits(5, 7);
  std::int64_t d = digits(8, 10);
  if (m < 1 || m > 12 || d < 1 || d > 31) throw ParseError("date out of range: '" + text + "'");
  return days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

IngestResult ingest_csv(std::istream& in, const CsvSchema& schema) {
  struct RawEvent {
    std::int32_t source, target;
    std::int64_t time;
  };
  std::vector<RawEvent> raw;
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::int32_t> label_ids;

  auto intern = [&](std::string_view label, std::int64_t line) {
    if (label.empty()) throw ParseError("csv parse error at line " + std::to_string(line) + ": empty node label");
    auto it = label_ids.find(std::string(label));
    if (it != label_ids.end()) return it->second;
    auto id = static_cast<std::int32_t>(labels.size());
    labels.emplace_back(label);
    label_ids.emplace(labels.back(), id);
    return id;
  };

  std::string line;
  std::int64_t line_no = 0;
  bool skipped_header = false;
  std::int64_t min_time = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_time = std::numeric_limits<std::int64_t>::min();

  while (std::getline(in, line)) {
    ++line_no;
    if (schema.has_header && !skipped_header) {
      skipped_header = true;
      continue;
    }
    std::string_view view = trim(line);
    if (view.empty()) continue;

    std::array<std::string_view, 3> fields;
    std::size_t field_count = 0;
    std::size_t pos = 0;
    while (field_count < 3) {
      std::size_t next = view.find(schema.delimiter, pos);
      std::string_view field = next == std::string_view::npos ? view.substr(pos)
                                                              : view.substr(pos, next - pos);
      fields[field_count++] = trim(field);
      if (next == std::string_view::npos) break;
      pos = next + 1;
      if (field_count == 3)
        throw ParseError("csv parse error at line " + std::to_string(line_no) + ": expected 3 fields");
    }
    if (field_count != 3)
      throw ParseError("csv parse error at line " + std::to_string(line_no) + ": expected 3 fields, got " +
                       std::to_string(field_count));

    std::int64_t time = 0;
    if (schema.time_format == TimeFormat::integer) {
      const std::string_view f = fields[2];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), time);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw ParseError("csv parse error at line " + std::to_string(line_no) + ": bad integer timestamp '" +
                         std::string(f) + "'");
    } else {
      try {
        time = parse_iso_date(std::string(fields[2]));
      } catch (const ParseError& e) {
        throw ParseError("csv parse error at line " + std::to_string(line_no) + ": " + e.what());
      }
    }

    raw.push_back(RawEvent{intern(fields[0], line_no), intern(fields[1], line_no), time});
    min_time = std::min(min_time, time);
    max_time = std::max(max_time, time);
  }

  if (raw.empty()) throw ParseError("csv parse error: no event rows in input");
  if (max_time - min_time >= std::numeric_limits<std::int32_t>::max())
    throw ParseError("csv parse error: timestamp span too large");

  std::vector<TemporalEvent> events;
  events.reserve(raw.size());
  for (const auto& r : raw)
    events.push_back(TemporalEvent{r.source, r.target, static_cast<std::int32_t>(r.time - min_time)});

  auto num_steps = static_cast<std::int32_t>(max_time - min_time + 1);
  IngestResult result{TemporalGraph(static_cast<std::int32_t>(labels.size()), num_steps, std::move(events)),
                      std::move(labels), min_time, schema.time_format};
  return result;
}

void write_edge_csv(std::ostream& out, const TemporalGraph& g, const std::vector<std::string>* labels) {
  for (const auto& e : g.events()) {
    if (labels != nullptr) {
      out << (*labels)[static_cast<std::size_t>(e.source)] << ','
          << (*labels)[static_cast<std::size_t>(e.target)] << ',' << e.step << '\n';
    } else {
      out << e.source << ',' << e.target << ',' << e.step << '\n';
    }
  }
}

}  // namespace netspect
