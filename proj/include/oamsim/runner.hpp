// Scenario execution: build the system, integrate, analyze and persist
// results deterministically under an output directory.
#pragma once

#include "oamsim/scenario.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace oamsim::cli {

inline constexpr const char* code_version = "oamsim 0.1.0";

struct RunManifest {
  std::uint64_t digest = 0;
  std::string version;
  std::uint64_t seed = 0;
  std::string wall_clock; // ISO-8601; the one line of a manifest that varies
  std::vector<std::string> outputs;
};

/// Execute the scenario, writing trajectory/spectrum/sweep/summary CSVs and
/// manifest.txt under out_dir. Identical scenario + seed reproduce identical
/// data files byte for byte (the manifest differs only in wall_clock).
RunManifest run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

} // namespace oamsim::cli
