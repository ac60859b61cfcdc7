#include "netspect/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace netspect {

namespace {

using nlohmann::json;

/// Parse the 9-digit rendering back so json stores the rounded value.
double round_sig9(double x) { return std::stod(format_sig9(x)); }

json move_stats_json(const MoveStats& stats) {
  return json{{"proposed", stats.proposed}, {"accepted", stats.accepted}, {"rate", round_sig9(stats.rate())}};
}

}  // namespace

std::string format_sig9(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::string to_json(const DLReport& report) {
  json windows = json::array();
  for (const auto& w : report.per_window) {
    windows.push_back(json{{"likelihoodBits", round_sig9(w.likelihood_bits)},
                           {"activityPriorBits", round_sig9(w.activity_prior_bits)}});
  }
  json j{{"totalBits", round_sig9(report.total_bits)},
         {"partitionPriorBits", round_sig9(report.partition_prior_bits)},
         {"edgeCountPriorBits", round_sig9(report.edge_count_prior_bits)},
         {"dataConstantBits", round_sig9(report.data_constant_bits)},
         {"priorMode", report.prior_mode == PriorMode::general ? "general" : "fixedWindow"},
         {"perWindow", std::move(windows)}};
  return j.dump(2);
}

std::string to_json(const ChainResult& result, bool include_trace, std::size_t trace_limit) {
  json j{{"bestBits", round_sig9(result.best_bits)},
         {"widths", result.best_partition.widths()},
         {"boundaries", result.best_partition.boundaries()},
         {"chainIndex", result.chain_index},
         {"acceptance",
          json{{"split", move_stats_json(result.split_stats)},
               {"join", move_stats_json(result.join_stats)},
               {"move", move_stats_json(result.move_stats)}}}};
  if (include_trace && !result.trace.empty()) {
    // Down-sample long traces to keep the report compact.
    const std::size_t stride = std::max<std::size_t>(1, result.trace.size() / trace_limit);
    json trace = json::array();
    for (std::size_t i = 0; i < result.trace.size(); i += stride)
      trace.push_back(json{{"sweep", i}, {"bits", round_sig9(result.trace[i])}});
    j["trace"] = std::move(trace);
  }
  if (!result.samples.empty()) {
    json samples = json::array();
    for (const auto& [partition, bits] : result.samples)
      samples.push_back(json{{"boundaries", partition.boundaries()}, {"bits", round_sig9(bits)}});
    j["samples"] = std::move(samples);
  }
  return j.dump(2);
}

std::string to_json(const Spectrum& spectrum) {
  json minima = json::array();
  for (const auto& line : spectrum.minima)
    minima.push_back(json{{"delta", line.delta}, {"prominence", round_sig9(line.prominence)}});
  json j{{"mdlDelta", spectrum.mdl_delta}, {"minima", std::move(minima)}};
  return j.dump(2);
}

std::string mapping_to_json(const IngestResult& ingest) {
  json j{{"labels", ingest.node_labels},
         {"timeOrigin", ingest.time_origin},
         {"timeUnit", ingest.time_format == TimeFormat::integer ? "integer" : "day"},
         {"nodes", ingest.graph.num_nodes()},
         {"steps", ingest.graph.num_steps()},
         {"events", ingest.graph.num_events()}};
  return j.dump(2);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "delta,alpha,bits,normBits\n";
  for (const auto& p : spectrum.points) {
    out << p.delta << ',' << p.alpha << ',' << format_sig9(p.bits) << ',' << format_sig9(p.norm_bits)
        << '\n';
  }
}

void write_trace_csv(std::ostream& out, std::span<const double> trace) {
  out << "sweep,bits\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out << i << ',' << format_sig9(trace[i]) << '\n';
}

void write_rolling_csv(std::ostream& out, std::span<const RollingPoint> series,
                       const std::vector<double>* renormalized) {
  if (renormalized != nullptr && renormalized->size() != series.size())
    throw std::invalid_argument("write_rolling_csv: renormalized column length mismatch");
  out << "windowStart,dominantDelta";
  if (renormalized != nullptr) out << ",renormalizedDelta";
  out << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << series[i].window_start << ',' << series[i].dominant_delta;
    if (renormalized != nullptr) out << ',' << format_sig9((*renormalized)[i]);
    out << '\n';
  }
}

}  // namespace netspect
