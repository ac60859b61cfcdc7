#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netspect/serialize.hpp"
#include "netspect/version.hpp"

// Every CLI run writes exactly one manifest alongside its outputs: what ran,
// on which inputs, with which configuration digest and seed, and what it
// produced.

namespace netspect::tool {

inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

class ManifestWriter {
 public:
  ManifestWriter(std::string command, std::uint64_t seed)
      : command_(std::move(command)), seed_(seed), start_(std::chrono::steady_clock::now()) {}

  void add_input(const std::string& path) { inputs_.push_back(path); }
  void add_output(const std::string& path) { outputs_.push_back(path); }
  void set_config(const std::string& canonical) { digest_ = fnv1a64(canonical); }

  void write(const std::string& path) const {
    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    char digest_hex[32];
    std::snprintf(digest_hex, sizeof(digest_hex), "%016llx",
                  static_cast<unsigned long long>(digest_));
    nlohmann::json j{{"schemaVersion", 1},
                     {"command", command_},
                     {"toolVersion", kVersion},
                     {"seed", seed_},
                     {"configDigest", digest_hex},
                     {"inputs", inputs_},
                     {"outputs", outputs_},
                     {"wallTimeSeconds", std::stod(format_sig9(elapsed))}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
  }

 private:
  std::string command_;
  std::uint64_t seed_;
  std::uint64_t digest_ = 0;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace netspect::tool
