// Command-line scenario runner: parse a configuration, build the system,
// integrate, analyze and persist results deterministically.

#include "oamsim/runner.hpp"
#include "oamsim/scenario.hpp"

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace {

void print_errors(const oamsim::cli::ParseResult& result, const std::string& path) {
  for (const auto& err : result.errors) {
    if (err.line > 0)
      std::fprintf(stderr, "%s:%d: %s\n", path.c_str(), err.line, err.message.c_str());
    else
      std::fprintf(stderr, "%s: %s\n", path.c_str(), err.message.c_str());
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"oamsim: angular-momentum optomechanics simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  bool has_seed = false;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "integrate a scenario and write results");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "override run.seed")->each([&](const std::string&) {
    has_seed = true;
  });
  run->add_option("--override", overrides, "set section.key=value before validation");

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("scenario", scenario_path, "scenario file")->required();
  validate->add_option("--override", overrides, "set section.key=value before validation");

  auto* list = app.add_subcommand("list-examples", "show the bundled example scenarios");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    const std::filesystem::path dir = OAMSIM_SCENARIO_DIR;
    if (!std::filesystem::is_directory(dir)) {
      std::fprintf(stderr, "no bundled scenario directory at %s\n", dir.string().c_str());
      return 1;
    }
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
      if (entry.path().extension() == ".ini") names.push_back(entry.path().string());
    std::sort(names.begin(), names.end());
    for (const auto& name : names) std::printf("%s\n", name.c_str());
    return 0;
  }

  auto result = oamsim::cli::parse_scenario_file(scenario_path, overrides);
  if (!result.ok()) {
    print_errors(result, scenario_path);
    return 1;
  }

  if (validate->parsed()) {
    std::printf("OK digest=%016" PRIx64 "\n",
                static_cast<uint64_t>(oamsim::cli::scenario_digest(*result.scenario)));
    return 0;
  }

  if (has_seed) result.scenario->run.seed = seed;
  try {
    const auto manifest = oamsim::cli::run_scenario(*result.scenario, out_dir);
    std::printf("wrote %zu files to %s (digest %016" PRIx64 ")\n", manifest.outputs.size() + 1,
                out_dir.c_str(), static_cast<uint64_t>(manifest.digest));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run failed: %s\n", e.what());
    return 1;
  }
  return 0;
}
