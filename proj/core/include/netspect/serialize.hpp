#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "netspect/htcm.hpp"
#include "netspect/mcmc.hpp"
#include "netspect/spectrum.hpp"
#include "netspect/temporal_graph.hpp"

// JSON and CSV emission. All floating-point values are printed with 9
// significant digits so outputs are byte-stable regression anchors.

namespace netspect {

/// Shortest decimal form of x rounded to 9 significant digits.
std::string format_sig9(double x);

std::string to_json(const DLReport& report);
std::string to_json(const ChainResult& result, bool include_trace = false,
                    std::size_t trace_limit = 2000);
std::string to_json(const Spectrum& spectrum);
std::string mapping_to_json(const IngestResult& ingest);

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
void write_trace_csv(std::ostream& out, std::span<const double> trace);
void write_rolling_csv(std::ostream& out, std::span<const RollingPoint> series,
                       const std::vector<double>* renormalized = nullptr);

}  // namespace netspect
