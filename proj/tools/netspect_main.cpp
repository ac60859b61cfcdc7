// netspect: change points and timescale spectra for temporal networks.
//
// Subcommands: synth (sample from the generative model), detect (MCMC
// change-point search), spectrum (fixed-window DL scan + spectrogram),
// rolling (sliding-window dominant timescale).
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "netspect/mcmc.hpp"
#include "netspect/serialize.hpp"
#include "netspect/spectrum.hpp"
#include "netspect/svg.hpp"
#include "netspect/synth.hpp"
#include "netspect/temporal_graph.hpp"
#include "netspect/version.hpp"

namespace {

using namespace netspect;

int default_jobs() {
  if (const char* env = std::getenv("NETSPECT_JOBS")) {
    const int jobs = std::atoi(env);
    if (jobs >= 1) return jobs;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct IngestOptions {
  std::string path;
  bool has_header = false;
  std::string time_format = "int";
  std::int32_t rebin_resolution = 1;
  std::string mapping_path;
};

void add_ingest_options(CLI::App* cmd, IngestOptions& opts) {
  cmd->add_option("input", opts.path, "edge-list CSV (source,target,timestamp)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_flag("--header", opts.has_header, "skip a header line");
  cmd->add_option("--time-format", opts.time_format, "timestamp format: int or date")
      ->check(CLI::IsMember({"int", "date"}));
  cmd->add_option("--rebin", opts.rebin_resolution, "bin timestamps by this resolution")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mapping", opts.mapping_path, "write the node/time mapping JSON here");
}

TemporalGraph load_graph(const IngestOptions& opts, tool::ManifestWriter& manifest) {
  manifest.add_input(opts.path);
  std::ifstream in(opts.path);
  if (!in) throw std::runtime_error("cannot open " + opts.path);
  CsvSchema schema;
  schema.has_header = opts.has_header;
  schema.time_format = opts.time_format == "date" ? TimeFormat::iso_date : TimeFormat::integer;
  IngestResult result = ingest_csv(in, schema);
  if (!opts.mapping_path.empty()) {
    std::ofstream map_out(opts.mapping_path);
    if (!map_out) throw std::runtime_error("cannot write " + opts.mapping_path);
    map_out << mapping_to_json(result) << '\n';
    manifest.add_output(opts.mapping_path);
  }
  return rebin(result.graph, opts.rebin_resolution);
}

void write_text_file(const std::string& path, const std::string& text,
                     tool::ManifestWriter& manifest) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  manifest.add_output(path);
}

// ---------------------------------------------------------------------------
// synth

WindowPartition parse_partition(const nlohmann::json& j) {
  if (j.contains("widths")) {
    return WindowPartition(j.at("widths").get<std::vector<std::int32_t>>());
  }
  if (j.contains("pattern")) {
    const auto pattern = j.at("pattern").get<std::vector<std::int32_t>>();
    const auto total = j.at("total").get<std::int64_t>();
    if (pattern.empty()) throw std::invalid_argument("synth config: partition.pattern is empty");
    std::vector<std::int32_t> widths;
    std::int64_t acc = 0;
    for (std::size_t i = 0; acc < total; ++i) {
      const std::int32_t w =
          static_cast<std::int32_t>(std::min<std::int64_t>(pattern[i % pattern.size()], total - acc));
      widths.push_back(w);
      acc += w;
    }
    return WindowPartition(std::move(widths));
  }
  if (j.contains("delta")) {
    const auto delta = j.at("delta").get<std::int32_t>();
    std::int64_t total;
    if (j.contains("total")) {
      total = j.at("total").get<std::int64_t>();
    } else if (j.contains("count")) {
      total = static_cast<std::int64_t>(delta) * j.at("count").get<std::int64_t>();
    } else {
      throw std::invalid_argument("synth config: partition.delta needs total or count");
    }
    return build_fixed_partition(static_cast<std::int32_t>(total), delta, 0);
  }
  throw std::invalid_argument("synth config: partition needs widths, pattern or delta");
}

int run_synth(const std::string& config_path, const std::string& out_path) {
  std::ifstream config_in(config_path);
  if (!config_in) throw std::runtime_error("cannot open " + config_path);
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(config_in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("synth config: ") + e.what());
  }

  const auto nodes = config.at("nodes").get<std::int32_t>();
  const auto seed = config.value("seed", std::uint64_t{0});
  if (!config.contains("processes") || !config.at("processes").is_array() ||
      config.at("processes").empty())
    throw std::invalid_argument("synth config: processes must be a non-empty array");

  tool::ManifestWriter manifest("synth", seed);
  manifest.add_input(config_path);
  manifest.set_config(config.dump());

  std::optional<TemporalGraph> graph;
  std::uint64_t stream = 0;
  for (const auto& proc : config.at("processes")) {
    SynthConfig cfg;
    cfg.num_nodes = nodes;
    cfg.partition = parse_partition(proc.at("partition"));
    if (proc.contains("edgesTotal")) cfg.total_edges = proc.at("edgesTotal").get<std::int64_t>();
    if (proc.contains("edgesPerWindow"))
      cfg.edges_per_window = proc.at("edgesPerWindow").get<double>();
    if (proc.contains("degreeCV")) cfg.degree_cv = proc.at("degreeCV").get<double>();
    cfg.seed = seed;
    validate(cfg);
    Rng rng(Rng::mix(seed, stream++));
    TemporalGraph sample = sample_temporal(cfg, rng);
    graph = graph ? overlay(*graph, sample) : std::move(sample);
  }

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  write_edge_csv(out, *graph);
  manifest.add_output(out_path);
  manifest.write(out_path + ".manifest.json");
  std::cout << "wrote " << graph->num_events() << " events over " << graph->num_steps()
            << " steps to " << out_path << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// detect

std::vector<std::pair<std::int64_t, double>> parse_beta_schedule(const std::string& text,
                                                                 std::int64_t sweeps) {
  std::istringstream in(text);
  std::string kind;
  std::getline(in, kind, ':');
  if (kind == "constant") {
    std::string value;
    if (!std::getline(in, value)) throw std::invalid_argument("beta schedule: constant:<beta>");
    const double beta = std::stod(value);
    return {{0, beta}};
  }
  if (kind == "geometric") {
    std::string from, to;
    if (!std::getline(in, from, ':') || !std::getline(in, to))
      throw std::invalid_argument("beta schedule: geometric:<start>:<end>");
    return geometric_schedule(sweeps, std::stod(from), std::stod(to));
  }
  throw std::invalid_argument("beta schedule must be constant:<b> or geometric:<b0>:<b1>");
}

int run_detect(const IngestOptions& ingest, const std::string& out_path,
               const std::string& trace_path, std::int64_t sweeps, std::int32_t chains,
               std::uint64_t seed, const std::string& schedule_text, const std::string& init,
               bool polish, int jobs) {
  tool::ManifestWriter manifest("detect", seed);
  manifest.set_config("detect|sweeps=" + std::to_string(sweeps) + "|chains=" +
                      std::to_string(chains) + "|schedule=" + schedule_text + "|init=" + init +
                      "|polish=" + (polish ? "1" : "0") + "|rebin=" +
                      std::to_string(ingest.rebin_resolution));
  const TemporalGraph g = load_graph(ingest, manifest);

  ChainConfig cfg;
  cfg.sweeps = sweeps;
  cfg.chains = chains;
  cfg.seed = seed;
  cfg.jobs = jobs;
  cfg.anneal_schedule = parse_beta_schedule(schedule_text, sweeps);
  cfg.init = init == "singletons" ? ChainConfig::Init::singletons : ChainConfig::Init::single_window;

  ChainResult result = run_chains(g, cfg);
  if (polish) {
    auto [refined, bits] = greedy_refine(g, result.best_partition);
    if (bits < result.best_bits) {
      result.best_partition = refined;
      result.best_bits = bits;
    }
  }

  write_text_file(out_path, to_json(result) + "\n", manifest);
  if (!trace_path.empty()) {
    std::ofstream trace_out(trace_path);
    if (!trace_out) throw std::runtime_error("cannot write " + trace_path);
    write_trace_csv(trace_out, result.trace);
    manifest.add_output(trace_path);
  }
  manifest.write(out_path + ".manifest.json");
  std::cout << "best partition has " << result.best_partition.window_count() << " windows at "
            << format_sig9(result.best_bits) << " bits\n";
  return 0;
}

// ---------------------------------------------------------------------------
// spectrum

int run_spectrum(const IngestOptions& ingest, std::int32_t delta_max, const std::string& csv_path,
                 const std::string& minima_path, const std::string& svg_path,
                 const std::string& mode, int jobs) {
  tool::ManifestWriter manifest("spectrum", 0);
  manifest.set_config("spectrum|delta-max=" + std::to_string(delta_max) + "|mode=" + mode +
                      "|rebin=" + std::to_string(ingest.rebin_resolution));
  const TemporalGraph g = load_graph(ingest, manifest);
  if (delta_max > g.num_steps())
    throw std::invalid_argument("--delta-max exceeds the graph's " +
                                std::to_string(g.num_steps()) + " steps");

  const Spectrum spectrum = spectrogram(g, delta_max, jobs);

  std::ostringstream csv;
  write_spectrum_csv(csv, spectrum);
  write_text_file(csv_path, csv.str(), manifest);

  nlohmann::json minima = nlohmann::json::parse(to_json(spectrum));
  const std::int32_t dominant = mode == "prominence" && !spectrum.minima.empty()
                                    ? spectrum.minima.front().delta
                                    : spectrum.mdl_delta;
  minima["dominantMode"] = mode;
  minima["dominantDelta"] = dominant;
  write_text_file(minima_path, minima.dump(2) + "\n", manifest);

  if (!svg_path.empty()) write_text_file(svg_path, spectrogram_svg(spectrum), manifest);
  manifest.write(minima_path + ".manifest.json");
  std::cout << "mdl window size " << spectrum.mdl_delta << ", " << spectrum.minima.size()
            << " spectral lines\n";
  return 0;
}

// ---------------------------------------------------------------------------
// rolling

int run_rolling(const IngestOptions& ingest, std::int32_t window_len, std::int32_t step,
                const std::string& mode, std::optional<std::int32_t> shock_time,
                const std::string& out_path, int jobs) {
  tool::ManifestWriter manifest("rolling", 0);
  manifest.set_config("rolling|window=" + std::to_string(window_len) + "|step=" +
                      std::to_string(step) + "|mode=" + mode + "|shock=" +
                      (shock_time ? std::to_string(*shock_time) : "none") + "|rebin=" +
                      std::to_string(ingest.rebin_resolution));
  const TemporalGraph g = load_graph(ingest, manifest);
  if (window_len > g.num_steps())
    throw std::invalid_argument("--window exceeds the graph's " + std::to_string(g.num_steps()) +
                                " steps");

  const auto series = rolling_dominant(
      g, window_len, step, mode == "prominence" ? DominantMode::top_prominence : DominantMode::mdl,
      jobs);

  std::optional<std::vector<double>> renorm;
  if (shock_time) renorm = renormalize_by_shock(series, window_len, *shock_time);

  std::ostringstream csv;
  write_rolling_csv(csv, series, renorm ? &*renorm : nullptr);
  write_text_file(out_path, csv.str(), manifest);
  manifest.write(out_path + ".manifest.json");
  std::cout << series.size() << " rolling windows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"change points and timescale spectra for temporal networks"};
  app.set_version_flag("--version", netspect::kVersion);
  app.require_subcommand(1);

  int jobs = default_jobs();
  app.add_option("--jobs", jobs, "worker threads (default: NETSPECT_JOBS or hardware)")
      ->check(CLI::PositiveNumber);

  // synth
  auto* synth = app.add_subcommand("synth", "sample a temporal network from a config file");
  std::string synth_config, synth_out = "synth.csv";
  synth->add_option("config", synth_config, "JSON generation config")->required()->check(CLI::ExistingFile);
  synth->add_option("-o,--out", synth_out, "output edge-list CSV");

  // detect
  auto* detect = app.add_subcommand("detect", "infer change points with annealed MCMC");
  IngestOptions detect_ingest;
  add_ingest_options(detect, detect_ingest);
  std::string detect_out = "detect.json", detect_trace;
  std::int64_t sweeps = 2000;
  std::int32_t chains = 4;
  std::uint64_t seed = 1;
  std::string schedule = "geometric:1:0.05";
  std::string init = "single";
  bool no_polish = false;
  detect->add_option("-o,--out", detect_out, "result JSON path");
  detect->add_option("--trace", detect_trace, "write per-sweep bits CSV here");
  detect->add_option("--sweeps", sweeps, "sweeps per chain (T proposals each)")->check(CLI::PositiveNumber);
  detect->add_option("--chains", chains, "independent chains")->check(CLI::PositiveNumber);
  detect->add_option("--seed", seed, "RNG seed");
  detect->add_option("--beta-schedule", schedule, "constant:<b> or geometric:<b0>:<b1>");
  detect->add_option("--init", init, "initial partition: single or singletons")
      ->check(CLI::IsMember({"single", "singletons"}));
  detect->add_flag("--no-polish", no_polish, "skip the greedy refinement pass");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "fixed-window description-length scan");
  IngestOptions spectrum_ingest;
  add_ingest_options(spectrum, spectrum_ingest);
  std::int32_t delta_max = 0;
  std::string spectrum_csv = "spectrum.csv", spectrum_minima = "minima.json", spectrum_svg;
  std::string spectrum_mode = "mdl";
  spectrum->add_option("--delta-max", delta_max, "largest window size to scan")
      ->required()
      ->check(CLI::PositiveNumber);
  spectrum->add_option("--out-csv", spectrum_csv, "DL curve CSV path");
  spectrum->add_option("--out-minima", spectrum_minima, "spectral lines JSON path");
  spectrum->add_option("--svg", spectrum_svg, "write a two-panel spectrogram SVG here");
  spectrum->add_option("--mode", spectrum_mode, "dominant timescale: mdl or prominence")
      ->check(CLI::IsMember({"mdl", "prominence"}));

  // rolling
  auto* rolling = app.add_subcommand("rolling", "sliding-window dominant timescales");
  IngestOptions rolling_ingest;
  add_ingest_options(rolling, rolling_ingest);
  std::int32_t window_len = 26, step = 1;
  std::string rolling_mode = "mdl", rolling_out = "rolling.csv";
  std::int32_t shock_time_value = -1;
  rolling->add_option("--window", window_len, "window length in steps")->check(CLI::PositiveNumber);
  rolling->add_option("--step", step, "start increment in steps")->check(CLI::PositiveNumber);
  rolling->add_option("--mode", rolling_mode, "dominant timescale: mdl or prominence")
      ->check(CLI::IsMember({"mdl", "prominence"}));
  rolling->add_option("--shock-time", shock_time_value,
                      "shock step for the renormalized column (post-rebin units)");
  rolling->add_option("-o,--out", rolling_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) return run_synth(synth_config, synth_out);
    if (detect->parsed())
      return run_detect(detect_ingest, detect_out, detect_trace, sweeps, chains, seed, schedule,
                        init, !no_polish, jobs);
    if (spectrum->parsed())
      return run_spectrum(spectrum_ingest, delta_max, spectrum_csv, spectrum_minima, spectrum_svg,
                          spectrum_mode, jobs);
    if (rolling->parsed()) {
      std::optional<std::int32_t> shock;
      if (rolling->count("--shock-time") > 0) shock = shock_time_value;
      return run_rolling(rolling_ingest, window_len, step, rolling_mode, shock, rolling_out, jobs);
    }
  } catch (const netspect::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
