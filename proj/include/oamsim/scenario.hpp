// Scenario configuration: a sectioned key = value format (grammar documented
// in the README) describing one of the four runnable systems, its physical
// parameter blocks, the integration settings and the requested analyses.
#pragma once

#include "oamsim/beams.hpp"
#include "oamsim/coupling.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace oamsim::cli {

enum class SystemKind { vibrational, torsional, rotational, beams_demo };

std::string to_string(SystemKind kind);

struct GridSettings {
  int n = 256;
  double extent = 0.0;            // 0 selects the default 4 w(z)
  double z = 0.0;                 // render plane
  bool superpose_conjugate = false; // add the mirror (-l) mode
  double phase_plate_steps = 0.0; // plate step height in units of lambda
};

struct RunSettings {
  double dt = 0.0;        // 0 = default_timestep
  double duration = 0.0;  // analyzed record, s
  double settle = 0.0;    // discarded lead-in, s
  std::uint64_t seed = 0;
  long output_stride = 1;
  bool thermal_noise = true;
  bool optical_noise = false;
};

struct AnalysisSettings {
  bool spectrum = false;
  int welch_segments = 8;
  double band_lo = 0.0; // 0 = auto
  double band_hi = 0.0;
  std::vector<double> sweep_powers; // W, ascending; empty = no sweep
  int sweep_seeds = 1;
  double sweep_record = 0.0; // s per sweep run; 0 = use run.duration
  std::vector<double> cooling_detunings; // rad/s; empty = no cooling scan
  int cooling_seeds = 8;
};

struct Scenario {
  SystemKind system = SystemKind::vibrational;
  std::optional<coupling::CavityParams> cavity;
  bool lock_delta_prime = false; // rotational: delta0 chosen so Delta' = 0
  int oam_l = 0;                 // torsional photon OAM
  std::optional<coupling::MechanicalParams> mech;
  std::optional<beams::LGModeSpec> mode;
  std::optional<beams::RingLattice> lattice;
  std::optional<coupling::DielectricBody> body;
  GridSettings grid;
  RunSettings run;
  AnalysisSettings analysis;
};

struct ParseError {
  int line = 0; // 0 when no single line is at fault
  std::string message;
};

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<ParseError> errors;

  bool ok() const { return scenario.has_value() && errors.empty(); }
};

/// Parse and validate a scenario; collects every error with its line number.
/// overrides take the form "section.key=value" and are applied before
/// validation.
ParseResult parse_scenario(const std::string& text,
                           const std::vector<std::string>& overrides = {});
ParseResult parse_scenario_file(const std::filesystem::path& path,
                                const std::vector<std::string>& overrides = {});

/// Canonical text form; parse(serialize(s)) reproduces s exactly.
std::string serialize_scenario(const Scenario& s);

/// Content hash of the canonical form (changes iff any field changes).
std::uint64_t scenario_digest(const Scenario& s);

} // namespace oamsim::cli
