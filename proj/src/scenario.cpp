#include "oamsim/scenario.hpp"
#include "oamsim/constants.hpp"
#include "oamsim/csv_io.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace oamsim::cli {

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::vibrational: return "vibrational";
    case SystemKind::torsional: return "torsional";
    case SystemKind::rotational: return "rotational";
    case SystemKind::beams_demo: return "beams-demo";
  }
  return "?";
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
  mutable bool used = false;
};

struct RawConfig {
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::map<std::string, int> section_lines;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

RawConfig tokenize(const std::string& text, std::vector<ParseError>& errors) {
  RawConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') {
        errors.push_back({lineno, "malformed section header: " + body});
        continue;
      }
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty()) {
        errors.push_back({lineno, "empty section name"});
        continue;
      }
      if (!cfg.section_lines.count(section)) cfg.section_lines[section] = lineno;
      continue;
    }
    const size_t eq = body.find('=');
    if (eq == std::string::npos) {
      errors.push_back({lineno, "expected key = value, got: " + body});
      continue;
    }
    if (section.empty()) {
      errors.push_back({lineno, "key outside any [section]"});
      continue;
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) {
      errors.push_back({lineno, "empty key"});
      continue;
    }
    if (cfg.sections[section].count(key))
      errors.push_back({lineno, "duplicate key " + section + "." + key});
    cfg.sections[section][key] = Entry{value, lineno, false};
  }
  return cfg;
}

class Reader {
public:
  Reader(RawConfig& cfg, std::vector<ParseError>& errors) : cfg_(cfg), errors_(errors) {}

  bool has_section(const std::string& s) const { return cfg_.sections.count(s) > 0; }
  int section_line(const std::string& s) const {
    auto it = cfg_.section_lines.find(s);
    return it == cfg_.section_lines.end() ? 0 : it->second;
  }

  const Entry* find(const std::string& section, const std::string& key) const {
    auto s = cfg_.sections.find(section);
    if (s == cfg_.sections.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  std::optional<double> number(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    try {
      size_t pos = 0;
      double v = std::stod(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      fail(e->line, section + "." + key + ": not a number: " + e->value);
      return std::nullopt;
    }
  }

  /// Frequency-like quantity: <base>_rads in rad/s or <base>_hz converted.
  std::optional<double> frequency(const std::string& section, const std::string& base) {
    const bool has_rads = find_peek(section, base + "_rads");
    const bool has_hz = find_peek(section, base + "_hz");
    if (has_rads && has_hz) {
      fail(section_line(section), section + "." + base + ": give _rads or _hz, not both");
      return std::nullopt;
    }
    if (has_rads) return number(section, base + "_rads");
    if (has_hz) {
      auto v = number(section, base + "_hz");
      if (v) return 2.0 * pi * *v;
      return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<long> integer(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    try {
      size_t pos = 0;
      long v = std::stol(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      fail(e->line, section + "." + key + ": not an integer: " + e->value);
      return std::nullopt;
    }
  }

  std::optional<std::uint64_t> unsigned64(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    try {
      size_t pos = 0;
      unsigned long long v = std::stoull(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      fail(e->line, section + "." + key + ": not an unsigned integer: " + e->value);
      return std::nullopt;
    }
  }

  std::optional<bool> boolean(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::string v = e->value;
    for (auto& c : v) c = static_cast<char>(std::tolower(c));
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(e->line, section + "." + key + ": not a boolean: " + e->value);
    return std::nullopt;
  }

  std::optional<std::vector<double>> number_list(const std::string& section,
                                                 const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    std::istringstream iss(e->value);
    std::string cell;
    while (std::getline(iss, cell, ',')) {
      cell = trim(cell);
      if (cell.empty()) continue;
      try {
        out.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(e->line, section + "." + key + ": not a number: " + cell);
        return std::nullopt;
      }
    }
    return out;
  }

  std::optional<std::string> text(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  int line_of(const std::string& section, const std::string& key) const {
    auto s = cfg_.sections.find(section);
    if (s == cfg_.sections.end()) return 0;
    auto k = s->second.find(key);
    return k == s->second.end() ? 0 : k->second.line;
  }

  void fail(int line, const std::string& message) { errors_.push_back({line, message}); }

  void report_unknown_keys() {
    for (const auto& [section, keys] : cfg_.sections)
      for (const auto& [key, entry] : keys)
        if (!entry.used) fail(entry.line, "unknown key " + section + "." + key);
  }

private:
  bool find_peek(const std::string& section, const std::string& key) const {
    auto s = cfg_.sections.find(section);
    if (s == cfg_.sections.end()) return false;
    return s->second.count(key) > 0;
  }

  RawConfig& cfg_;
  std::vector<ParseError>& errors_;
};

std::optional<SystemKind> parse_system(const std::string& s) {
  if (s == "vibrational") return SystemKind::vibrational;
  if (s == "torsional") return SystemKind::torsional;
  if (s == "rotational") return SystemKind::rotational;
  if (s == "beams-demo") return SystemKind::beams_demo;
  return std::nullopt;
}

void build_cavity(Reader& r, Scenario& out, std::vector<ParseError>& errors) {
  const std::string sec = "cavity";
  if (!r.has_section(sec)) {
    errors.push_back({0, "missing required [cavity] section"});
    return;
  }
  const int secline = r.section_line(sec);
  auto length = r.number(sec, "length_m");
  if (!length || !(*length > 0.0)) {
    r.fail(length ? r.line_of(sec, "length_m") : secline,
           "cavity.length_m: required and must be > 0");
    return;
  }
  auto omega0 = r.frequency(sec, "omega0");
  auto mode_index = r.integer(sec, "mode_index");
  if (omega0 && mode_index)
    r.fail(secline, "cavity: give omega0 or mode_index, not both");
  if (!omega0 && mode_index) {
    if (*mode_index < 1) {
      r.fail(r.line_of(sec, "mode_index"), "cavity.mode_index: must be >= 1");
      return;
    }
    omega0 = *mode_index * pi * speed_of_light / *length;
  }
  if (!omega0 || !(*omega0 > 0.0)) {
    r.fail(secline, "cavity.omega0_rads (or _hz, or mode_index): required and must be > 0");
    return;
  }
  auto gamma0 = r.frequency(sec, "gamma0");
  if (!gamma0 || !(*gamma0 > 0.0)) {
    r.fail(secline, "cavity.gamma0_rads (or _hz): required and must be > 0");
    return;
  }
  double delta0 = r.frequency(sec, "detuning").value_or(0.0);
  out.lock_delta_prime = r.boolean(sec, "lock_delta_prime").value_or(false);

  auto power = r.number(sec, "drive_power_w");
  auto amplitude = r.number(sec, "drive_amplitude");
  if (power && amplitude) {
    r.fail(secline, "cavity: give drive_power_w or drive_amplitude, not both");
    return;
  }
  double drive = 0.0;
  if (power) {
    if (*power < 0.0) {
      r.fail(r.line_of(sec, "drive_power_w"), "cavity.drive_power_w: must be >= 0");
      return;
    }
    drive = coupling::CavityParams::drive_from_power(*power, *gamma0, *omega0);
  } else if (amplitude) {
    if (*amplitude < 0.0) {
      r.fail(r.line_of(sec, "drive_amplitude"), "cavity.drive_amplitude: must be >= 0");
      return;
    }
    drive = *amplitude;
  }
  out.oam_l = static_cast<int>(r.integer(sec, "oam_l").value_or(0));
  try {
    out.cavity = coupling::CavityParams(*length, *omega0, *gamma0, delta0, drive);
  } catch (const std::exception& e) {
    r.fail(secline, std::string("cavity: ") + e.what());
  }
}

void build_mechanical(Reader& r, Scenario& out, std::vector<ParseError>& errors) {
  const std::string sec = "mechanical";
  if (!r.has_section(sec)) {
    errors.push_back({0, "missing required [mechanical] section"});
    return;
  }
  const int secline = r.section_line(sec);
  coupling::MechanicalParams mech;
  switch (out.system) {
    case SystemKind::vibrational: mech.kind = coupling::MechKind::vibrational; break;
    case SystemKind::torsional: mech.kind = coupling::MechKind::torsional; break;
    default: mech.kind = coupling::MechKind::rotational; break;
  }

  auto omega_m = r.frequency(sec, "omega_m");
  if (omega_m) {
    if (*omega_m < 0.0) {
      r.fail(secline, "mechanical.omega_m: must be >= 0");
      return;
    }
    mech.omega_m = *omega_m;
  }
  auto gamma_m = r.frequency(sec, "gamma_m");
  if (gamma_m) {
    if (*gamma_m < 0.0) {
      r.fail(secline, "mechanical.gamma_m: must be >= 0");
      return;
    }
    mech.gamma_m = *gamma_m;
  }
  auto temperature = r.number(sec, "temperature_k");
  if (temperature) {
    if (*temperature < 0.0) {
      r.fail(r.line_of(sec, "temperature_k"), "mechanical.temperature_k: must be >= 0");
      return;
    }
    mech.temperature = *temperature;
  }
  mech.torque = r.number(sec, "torque_nm").value_or(0.0);

  auto mass = r.number(sec, "mass_kg");
  auto inertia = r.number(sec, "moment_of_inertia_kgm2");
  auto ring_radius = r.number(sec, "ring_radius_m");
  auto disk_mass = r.number(sec, "disk_mass_kg");
  auto disk_radius = r.number(sec, "disk_radius_m");

  if (mech.kind == coupling::MechKind::vibrational) {
    if (!mass || !(*mass > 0.0)) {
      r.fail(secline, "mechanical.mass_kg: required and must be > 0 for a vibrational system");
      return;
    }
    mech.mass = *mass;
  } else if (mech.kind == coupling::MechKind::torsional) {
    if (inertia) {
      mech.inertia = *inertia;
    } else if (disk_mass && disk_radius) {
      mech.inertia = 0.5 * *disk_mass * *disk_radius * *disk_radius; // disk about its axis
    } else {
      r.fail(secline,
             "mechanical: torsional system needs moment_of_inertia_kgm2 or disk_mass_kg + "
             "disk_radius_m");
      return;
    }
    if (!(mech.inertia > 0.0)) {
      r.fail(secline, "mechanical.moment_of_inertia_kgm2: must be > 0");
      return;
    }
  } else { // rotational
    if (inertia) {
      mech.inertia = *inertia;
      if (mass) mech.mass = *mass;
    } else if (mass) {
      double radius = ring_radius.value_or(out.lattice ? out.lattice->R : 0.0);
      if (!(radius > 0.0)) {
        r.fail(secline,
               "mechanical: rotational system needs ring_radius_m (or a [lattice] to take the "
               "ring radius from) when given mass_kg");
        return;
      }
      mech.inertia = *mass * radius * radius; // point particle on the ring
      mech.mass = *mass;
    } else {
      r.fail(secline, "mechanical: rotational system needs moment_of_inertia_kgm2 or mass_kg");
      return;
    }
    if (!(mech.inertia > 0.0)) {
      r.fail(secline, "mechanical.moment_of_inertia_kgm2: must be > 0");
      return;
    }
  }
  try {
    mech.validate();
    out.mech = mech;
  } catch (const std::exception& e) {
    r.fail(secline, std::string("mechanical: ") + e.what());
  }
}

void build_mode(Reader& r, Scenario& out, bool required, std::vector<ParseError>& errors) {
  const std::string sec = "mode";
  if (!r.has_section(sec)) {
    if (required) errors.push_back({0, "missing required [mode] section"});
    return;
  }
  const int secline = r.section_line(sec);
  const int l = static_cast<int>(r.integer(sec, "l").value_or(0));
  const int p = static_cast<int>(r.integer(sec, "p").value_or(0));
  auto waist = r.number(sec, "waist_m");
  auto lambda = r.number(sec, "wavelength_m");
  if (!waist || !lambda) {
    r.fail(secline, "mode: waist_m and wavelength_m are required");
    return;
  }
  try {
    out.mode = beams::LGModeSpec(l, p, *waist, *lambda);
  } catch (const std::exception& e) {
    r.fail(secline, std::string("mode: ") + e.what());
  }
}

void build_lattice(Reader& r, Scenario& out, bool required, std::vector<ParseError>& errors) {
  const std::string sec = "lattice";
  if (!r.has_section(sec)) {
    if (required) errors.push_back({0, "missing required [lattice] section"});
    return;
  }
  const int secline = r.section_line(sec);
  auto l = r.integer(sec, "l");
  auto waist = r.number(sec, "waist_m");
  auto lambda = r.number(sec, "probe_wavelength_m");
  auto trap_l = r.integer(sec, "trap_l");
  auto radius = r.number(sec, "radius_m");
  if (!l || !waist || !lambda) {
    r.fail(secline, "lattice: l, waist_m and probe_wavelength_m are required");
    return;
  }
  if (trap_l && radius) {
    r.fail(secline, "lattice: give trap_l or radius_m, not both");
    return;
  }
  try {
    if (radius) {
      out.lattice = beams::RingLattice(static_cast<int>(*l), *radius, *waist, 2.0 * pi / *lambda);
    } else if (trap_l) {
      out.lattice = beams::RingLattice::from_trap(static_cast<int>(*l),
                                                  static_cast<int>(*trap_l), *waist, *lambda);
    } else {
      r.fail(secline, "lattice: needs trap_l (ring radius w0 sqrt(|l_t|/2)) or radius_m");
    }
  } catch (const std::exception& e) {
    r.fail(secline, std::string("lattice: ") + e.what());
  }
}

void build_body(Reader& r, Scenario& out, bool required, std::vector<ParseError>& errors) {
  const std::string sec = "body";
  if (!r.has_section(sec)) {
    if (required) errors.push_back({0, "missing required [body] section"});
    return;
  }
  const int secline = r.section_line(sec);
  auto eps = r.number(sec, "epsilon_r");
  auto vol = r.number(sec, "volume_m3");
  if (!eps || !vol) {
    r.fail(secline, "body: epsilon_r and volume_m3 are required");
    return;
  }
  try {
    out.body = coupling::DielectricBody(*eps, *vol);
  } catch (const std::exception& e) {
    r.fail(secline, std::string("body: ") + e.what());
  }
}

void build_grid(Reader& r, Scenario& out) {
  const std::string sec = "grid";
  if (!r.has_section(sec)) return;
  auto n = r.integer(sec, "n");
  if (n) {
    if (*n < 2)
      r.fail(r.line_of(sec, "n"), "grid.n: must be >= 2");
    else
      out.grid.n = static_cast<int>(*n);
  }
  auto extent = r.number(sec, "extent_m");
  if (extent) {
    if (*extent < 0.0)
      r.fail(r.line_of(sec, "extent_m"), "grid.extent_m: must be >= 0 (0 = auto)");
    else
      out.grid.extent = *extent;
  }
  out.grid.z = r.number(sec, "z_m").value_or(out.grid.z);
  out.grid.superpose_conjugate =
      r.boolean(sec, "superpose_conjugate").value_or(out.grid.superpose_conjugate);
  out.grid.phase_plate_steps =
      r.number(sec, "phase_plate_steps").value_or(out.grid.phase_plate_steps);
}

void build_run(Reader& r, Scenario& out, bool required, std::vector<ParseError>& errors) {
  const std::string sec = "run";
  if (!r.has_section(sec)) {
    if (required) errors.push_back({0, "missing required [run] section"});
    return;
  }
  auto dt = r.number(sec, "dt_s");
  if (dt) {
    if (*dt < 0.0)
      r.fail(r.line_of(sec, "dt_s"), "run.dt_s: must be >= 0 (0 = auto)");
    else
      out.run.dt = *dt;
  }
  auto duration = r.number(sec, "duration_s");
  if (duration) {
    if (*duration < 0.0 || (required && *duration == 0.0))
      r.fail(r.line_of(sec, "duration_s"), "run.duration_s: must be > 0");
    else
      out.run.duration = *duration;
  } else if (required) {
    r.fail(r.section_line(sec), "run.duration_s: required");
  }
  auto settle = r.number(sec, "settle_s");
  if (settle) {
    if (*settle < 0.0)
      r.fail(r.line_of(sec, "settle_s"), "run.settle_s: must be >= 0");
    else
      out.run.settle = *settle;
  }
  out.run.seed = r.unsigned64(sec, "seed").value_or(out.run.seed);
  auto stride = r.integer(sec, "output_stride");
  if (stride) {
    if (*stride < 1)
      r.fail(r.line_of(sec, "output_stride"), "run.output_stride: must be >= 1");
    else
      out.run.output_stride = *stride;
  }
  out.run.thermal_noise = r.boolean(sec, "thermal_noise").value_or(out.run.thermal_noise);
  out.run.optical_noise = r.boolean(sec, "optical_noise").value_or(out.run.optical_noise);
}

void build_analysis(Reader& r, Scenario& out) {
  const std::string sec = "analysis";
  if (!r.has_section(sec)) return;
  out.analysis.spectrum = r.boolean(sec, "spectrum").value_or(out.analysis.spectrum);
  auto segs = r.integer(sec, "welch_segments");
  if (segs) {
    if (*segs < 1)
      r.fail(r.line_of(sec, "welch_segments"), "analysis.welch_segments: must be >= 1");
    else
      out.analysis.welch_segments = static_cast<int>(*segs);
  }
  out.analysis.band_lo = r.frequency(sec, "band_lo").value_or(out.analysis.band_lo);
  out.analysis.band_hi = r.frequency(sec, "band_hi").value_or(out.analysis.band_hi);
  auto powers = r.number_list(sec, "sweep_powers_w");
  if (powers) {
    for (size_t i = 0; i < powers->size(); ++i) {
      if (!((*powers)[i] > 0.0) || (i > 0 && (*powers)[i] <= (*powers)[i - 1])) {
        r.fail(r.line_of(sec, "sweep_powers_w"),
               "analysis.sweep_powers_w: must be positive and ascending");
        powers.reset();
        break;
      }
    }
    if (powers) out.analysis.sweep_powers = *powers;
  }
  auto seeds = r.integer(sec, "sweep_seeds");
  if (seeds) {
    if (*seeds < 1)
      r.fail(r.line_of(sec, "sweep_seeds"), "analysis.sweep_seeds: must be >= 1");
    else
      out.analysis.sweep_seeds = static_cast<int>(*seeds);
  }
  auto record = r.number(sec, "sweep_record_s");
  if (record) {
    if (*record < 0.0)
      r.fail(r.line_of(sec, "sweep_record_s"), "analysis.sweep_record_s: must be >= 0");
    else
      out.analysis.sweep_record = *record;
  }
  auto detunings = r.number_list(sec, "cooling_detunings_rads");
  if (detunings) out.analysis.cooling_detunings = *detunings;
  auto cseeds = r.integer(sec, "cooling_seeds");
  if (cseeds) {
    if (*cseeds < 1)
      r.fail(r.line_of(sec, "cooling_seeds"), "analysis.cooling_seeds: must be >= 1");
    else
      out.analysis.cooling_seeds = static_cast<int>(*cseeds);
  }
}

} // namespace

ParseResult parse_scenario(const std::string& text, const std::vector<std::string>& overrides) {
  ParseResult result;
  RawConfig cfg = tokenize(text, result.errors);

  for (const std::string& ov : overrides) {
    const size_t dot = ov.find('.');
    const size_t eq = ov.find('=');
    if (dot == std::string::npos || eq == std::string::npos || eq < dot) {
      result.errors.push_back({0, "override must be section.key=value, got: " + ov});
      continue;
    }
    const std::string section = trim(ov.substr(0, dot));
    const std::string key = trim(ov.substr(dot + 1, eq - dot - 1));
    const std::string value = trim(ov.substr(eq + 1));
    if (!cfg.section_lines.count(section)) cfg.section_lines[section] = 0;
    cfg.sections[section][key] = Entry{value, 0, false};
  }

  Reader r(cfg, result.errors);
  Scenario out;

  const std::string scn = "scenario";
  if (!r.has_section(scn)) {
    result.errors.push_back({0, "missing required [scenario] section"});
    r.report_unknown_keys();
    return result;
  }
  auto system_text = r.text(scn, "system");
  if (!system_text) {
    r.fail(r.section_line(scn), "scenario.system: required "
                                "(vibrational | torsional | rotational | beams-demo)");
    r.report_unknown_keys();
    return result;
  }
  auto system = parse_system(*system_text);
  if (!system) {
    r.fail(r.line_of(scn, "system"), "scenario.system: unknown system " + *system_text);
    r.report_unknown_keys();
    return result;
  }
  out.system = *system;

  const bool is_beams = out.system == SystemKind::beams_demo;
  // [lattice] first so the rotational mechanics can inherit the ring radius.
  build_lattice(r, out, out.system == SystemKind::rotational, result.errors);
  if (!is_beams) {
    build_cavity(r, out, result.errors);
    build_mechanical(r, out, result.errors);
    build_run(r, out, true, result.errors);
  } else {
    build_run(r, out, false, result.errors);
  }
  build_mode(r, out, is_beams, result.errors);
  build_body(r, out, out.system == SystemKind::rotational, result.errors);
  build_grid(r, out);
  build_analysis(r, out);

  if (out.system == SystemKind::torsional && out.oam_l == 0 && result.errors.empty())
    r.fail(r.section_line("cavity"),
           "cavity.oam_l: required (photon OAM) for a torsional system");

  if (out.system == SystemKind::rotational && out.cavity && out.lattice && out.body &&
      out.lock_delta_prime) {
    const double g_l = coupling::rotational_coupling(out.lattice->l, *out.body, out.lattice->R,
                                                     out.lattice->w0, out.cavity->length,
                                                     out.cavity->omega0);
    out.cavity->delta0 = 0.5 * g_l; // Delta' = g/2 - delta0 = 0
  }

  r.report_unknown_keys();
  if (result.errors.empty()) result.scenario = out;
  return result;
}

ParseResult parse_scenario_file(const std::filesystem::path& path,
                                const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) {
    ParseResult result;
    result.errors.push_back({0, "cannot open " + path.string()});
    return result;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), overrides);
}

namespace {

void emit(std::string& s, const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  s += buf;
}

} // namespace

std::string serialize_scenario(const Scenario& s) {
  std::string out;
  emit(out, "[scenario]\nsystem = %s\n\n", to_string(s.system).c_str());
  if (s.cavity) {
    const auto& c = *s.cavity;
    emit(out, "[cavity]\nlength_m = %.17g\nomega0_rads = %.17g\ngamma0_rads = %.17g\n", c.length,
         c.omega0, c.gamma0);
    emit(out, "detuning_rads = %.17g\ndrive_amplitude = %.17g\n", c.delta0, c.drive);
    if (s.lock_delta_prime) emit(out, "lock_delta_prime = true\n");
    if (s.oam_l != 0) emit(out, "oam_l = %d\n", s.oam_l);
    out += "\n";
  }
  if (s.mech) {
    const auto& m = *s.mech;
    out += "[mechanical]\n";
    if (m.kind == coupling::MechKind::vibrational) {
      emit(out, "mass_kg = %.17g\n", m.mass);
    } else {
      emit(out, "moment_of_inertia_kgm2 = %.17g\n", m.inertia);
      if (m.mass > 0.0) emit(out, "mass_kg = %.17g\n", m.mass);
    }
    emit(out, "omega_m_rads = %.17g\ngamma_m_rads = %.17g\ntemperature_k = %.17g\n", m.omega_m,
         m.gamma_m, m.temperature);
    if (m.kind == coupling::MechKind::rotational) emit(out, "torque_nm = %.17g\n", m.torque);
    out += "\n";
  }
  if (s.mode) {
    emit(out, "[mode]\nl = %d\np = %d\nwaist_m = %.17g\nwavelength_m = %.17g\n\n", s.mode->l,
         s.mode->p, s.mode->w0, s.mode->lambda);
  }
  if (s.lattice) {
    emit(out, "[lattice]\nl = %d\nradius_m = %.17g\nwaist_m = %.17g\nprobe_wavelength_m = %.17g\n\n",
         s.lattice->l, s.lattice->R, s.lattice->w0, 2.0 * pi / s.lattice->k_p);
  }
  if (s.body) {
    emit(out, "[body]\nepsilon_r = %.17g\nvolume_m3 = %.17g\n\n", s.body->epsilon_r,
         s.body->volume);
  }
  if (s.system == SystemKind::beams_demo) {
    emit(out, "[grid]\nn = %d\nextent_m = %.17g\nz_m = %.17g\n", s.grid.n, s.grid.extent,
         s.grid.z);
    emit(out, "superpose_conjugate = %s\nphase_plate_steps = %.17g\n\n",
         s.grid.superpose_conjugate ? "true" : "false", s.grid.phase_plate_steps);
  }
  emit(out, "[run]\ndt_s = %.17g\nduration_s = %.17g\nsettle_s = %.17g\nseed = %" PRIu64 "\n",
       s.run.dt, s.run.duration, s.run.settle, static_cast<uint64_t>(s.run.seed));
  emit(out, "output_stride = %ld\nthermal_noise = %s\noptical_noise = %s\n\n",
       s.run.output_stride, s.run.thermal_noise ? "true" : "false",
       s.run.optical_noise ? "true" : "false");
  emit(out, "[analysis]\nspectrum = %s\nwelch_segments = %d\n",
       s.analysis.spectrum ? "true" : "false", s.analysis.welch_segments);
  emit(out, "band_lo_rads = %.17g\nband_hi_rads = %.17g\n", s.analysis.band_lo,
       s.analysis.band_hi);
  if (!s.analysis.sweep_powers.empty()) {
    out += "sweep_powers_w = ";
    for (size_t i = 0; i < s.analysis.sweep_powers.size(); ++i)
      emit(out, "%.17g%s", s.analysis.sweep_powers[i],
           i + 1 < s.analysis.sweep_powers.size() ? ", " : "\n");
    emit(out, "sweep_seeds = %d\nsweep_record_s = %.17g\n", s.analysis.sweep_seeds,
         s.analysis.sweep_record);
  }
  if (!s.analysis.cooling_detunings.empty()) {
    out += "cooling_detunings_rads = ";
    for (size_t i = 0; i < s.analysis.cooling_detunings.size(); ++i)
      emit(out, "%.17g%s", s.analysis.cooling_detunings[i],
           i + 1 < s.analysis.cooling_detunings.size() ? ", " : "\n");
    emit(out, "cooling_seeds = %d\n", s.analysis.cooling_seeds);
  }
  return out;
}

std::uint64_t scenario_digest(const Scenario& s) { return io::fnv1a64(serialize_scenario(s)); }

} // namespace oamsim::cli
