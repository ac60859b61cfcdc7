#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netspect {

/// Raised when an input file cannot be parsed; maps to the CLI validation exit code.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TemporalEvent {
  std::int32_t source = 0;
  std::int32_t target = 0;
  std::int32_t step = 0;

  friend bool operator==(const TemporalEvent&, const TemporalEvent&) = default;
};

/// Immutable multiset of directed, timestamped events on nodes 0..N-1 over
/// discrete steps 0..T-1. Events are kept sorted by (step, source, target),
/// so everything downstream is independent of input ordering.
class TemporalGraph {
 public:
  TemporalGraph(std::int32_t num_nodes, std::int32_t num_steps, std::vector<TemporalEvent> events);

  std::int32_t num_nodes() const { return num_nodes_; }
  std::int32_t num_steps() const { return num_steps_; }
  std::int64_t num_events() const { return static_cast<std::int64_t>(events_.size()); }

  const std::vector<TemporalEvent>& events() const { return events_; }

  /// Events with step t occupy indices [first, second) of events().
  std::pair<std::int64_t, std::int64_t> step_span(std::int32_t t) const {
    return {step_offsets_[static_cast<std::size_t>(t)], step_offsets_[static_cast<std::size_t>(t) + 1]};
  }

 private:
  std::int32_t num_nodes_;
  std::int32_t num_steps_;
  std::vector<TemporalEvent> events_;
  std::vector<std::int64_t> step_offsets_;  // size num_steps_ + 1
};

/// Ordered window widths summing to the T of the graph they partition.
class WindowPartition {
 public:
  WindowPartition() : widths_{1} {}
  explicit WindowPartition(std::vector<std::int32_t> widths);

  static WindowPartition single_window(std::int32_t total);
  static WindowPartition singletons(std::int32_t total);

  std::int32_t window_count() const { return static_cast<std::int32_t>(widths_.size()); }
  std::int32_t total() const { return total_; }
  const std::vector<std::int32_t>& widths() const { return widths_; }

  /// Cumulative end times, one per window; the last equals total().
  std::vector<std::int32_t> boundaries() const;

  friend bool operator==(const WindowPartition&, const WindowPartition&) = default;

 private:
  std::vector<std::int32_t> widths_;
  std::int32_t total_ = 1;
};

struct CellCount {
  std::int32_t source = 0;
  std::int32_t target = 0;
  std::int64_t count = 0;

  friend bool operator==(const CellCount&, const CellCount&) = default;
};

/// One window of an aggregated temporal graph: multi-edge counts, degree
/// sequences, and the per-step log2(A_vwt!) bits needed for absolute
/// description lengths.
struct WindowAggregate {
  std::int32_t tau = 0;
  std::int32_t width = 0;
  std::int64_t edge_count = 0;                   // m_tau
  std::vector<CellCount> cells;                  // sorted by (source, target), counts > 0
  std::vector<std::int64_t> out_degree;          // length N
  std::vector<std::int64_t> in_degree;           // length N
  double log_data_term_bits = 0.0;               // sum over steps in the window of log2(A_vwt!)
};

std::vector<WindowAggregate> aggregate(const TemporalGraph& g, const WindowPartition& p);

/// Map each event step t to floor(t / resolution); T becomes ceil(T / resolution).
TemporalGraph rebin(const TemporalGraph& g, std::int32_t resolution);

/// Keep events with t0 <= t < t1, shifted by -t0. Node identity is preserved.
TemporalGraph slice(const TemporalGraph& g, std::int32_t t0, std::int32_t t1);

enum class TimeFormat { integer, iso_date };

struct CsvSchema {
  bool has_header = false;
  TimeFormat time_format = TimeFormat::integer;
  char delimiter = ',';
};

struct IngestResult {
  TemporalGraph graph;
  std::vector<std::string> node_labels;  // index = dense node id, first-appearance order
  std::int64_t time_origin = 0;          // raw value that was mapped to step 0
  TimeFormat time_format = TimeFormat::integer;
};

/// Parse `source,target,timestamp` rows into a TemporalGraph. Node labels are
/// densified in first-appearance order and timestamps shifted so the minimum
/// becomes step 0 (ISO dates are resolved to day numbers first).
IngestResult ingest_csv(std::istream& in, const CsvSchema& schema = {});

void write_edge_csv(std::ostream& out, const TemporalGraph& g,
                    const std::vector<std::string>* labels = nullptr);

/// Days since 1970-01-01 for a strict YYYY-MM-DD date.
std::int64_t parse_iso_date(const std::string& text);

}  // namespace netspect
