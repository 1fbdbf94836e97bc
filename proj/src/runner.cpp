#include "oamsim/runner.hpp"
#include "oamsim/analysis.hpp"
#include "oamsim/constants.hpp"
#include "oamsim/csv_io.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace oamsim::cli {

namespace {

using dynamics::NoiseConfig;
using dynamics::Trajectory;

std::string iso_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void append(std::string& s, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  s += buf;
}

struct Outputs {
  std::filesystem::path dir;
  std::vector<std::string> names;

  std::filesystem::path file(const std::string& name) {
    names.push_back(name);
    return dir / name;
  }
};

std::vector<std::complex<double>> post_settle_alpha(const Trajectory& traj, double settle) {
  std::vector<std::complex<double>> out;
  for (size_t i = 0; i < traj.t.size(); ++i)
    if (traj.t[i] >= settle) out.push_back(traj.alpha[i]);
  return out;
}

NoiseConfig noise_from(const RunSettings& run) {
  NoiseConfig cfg;
  cfg.seed = run.seed;
  cfg.include_thermal = run.thermal_noise;
  cfg.include_optical_input = run.optical_noise;
  return cfg;
}

analysis::WelchConfig welch_from(const AnalysisSettings& a) {
  analysis::WelchConfig w;
  w.num_segments = a.welch_segments;
  return w;
}

void write_spectrum_and_detect(const std::vector<std::complex<double>>& alpha, double dt_sample,
                               const Scenario& s, double lo_phase, Outputs& out,
                               std::string& summary) {
  const analysis::Spectrum spec =
      analysis::output_spectrum(alpha, dt_sample, welch_from(s.analysis), lo_phase);
  io::write_spectrum_csv(spec, out.file("spectrum.csv"));
  append(summary, "spectrum_resolution_rads = %.17g\n", spec.resolution);
  const double lo = s.analysis.band_lo > 0.0 ? s.analysis.band_lo : 3.0 * spec.resolution;
  const double hi = s.analysis.band_hi > 0.0 ? s.analysis.band_hi : 0.9 * pi / dt_sample;
  if (hi > lo) {
    const analysis::DetectionResult det = analysis::detect_rotation(spec, lo, hi);
    append(summary, "detected_omega_rads = %.17g\ndetected_snr = %.17g\n", det.omega_d, det.snr);
  }
}

void run_vibrational_scenario(const Scenario& s, Outputs& out, std::string& summary) {
  const auto sys = dynamics::VibrationalSystem::make(*s.cavity, *s.mech);
  append(summary, "coupling_g_rads_per_m = %.17g\n", sys.g);
  if (s.mech->omega_m > 0.0) {
    const auto zp = coupling::zero_point(*s.mech);
    append(summary, "zero_point_q0_m = %.17g\nzero_point_p0 = %.17g\n", zp.q0, zp.p0);
    append(summary, "single_photon_coupling_rads = %.17g\n",
           coupling::single_photon_coupling(sys.g, *s.mech));
  }
  append(summary, "adiabatic_phase_slope_per_m = %.17g\n", sys.g / (0.5 * s.cavity->gamma0));

  const double dt =
      s.run.dt > 0.0 ? s.run.dt : dynamics::default_timestep(dynamics::vibrational_max_rate(sys));
  const long n_steps = static_cast<long>(std::ceil((s.run.settle + s.run.duration) / dt));
  dynamics::VibrationalState init;
  init.alpha = sys.cavity.drive / std::complex<double>(0.5 * sys.cavity.gamma0, sys.cavity.delta0);
  const Trajectory traj =
      dynamics::run_vibrational(sys, init, dt, n_steps, s.run.output_stride, noise_from(s.run));
  io::write_trajectory_csv(traj, "q", "p", out.file("trajectory.csv"));
  append(summary, "dt_s = %.17g\nsamples = %zu\n", dt, traj.t.size());

  if (s.analysis.spectrum)
    write_spectrum_and_detect(post_settle_alpha(traj, s.run.settle), traj.dt_sample, s,
                              std::nan(""), out, summary);

  if (!s.analysis.cooling_detunings.empty()) {
    analysis::CoolingConfig cfg;
    cfg.seeds = s.analysis.cooling_seeds;
    cfg.settle_time = s.run.settle;
    cfg.record_time = s.run.duration;
    cfg.dt = s.run.dt;
    cfg.base_seed = s.run.seed;
    const auto points = analysis::cooling_diagnostic(sys, s.analysis.cooling_detunings, cfg);
    FILE* f = std::fopen(out.file("cooling.csv").string().c_str(), "w");
    if (!f) throw std::runtime_error("cannot open cooling.csv");
    std::fprintf(f, "delta0_rads,mean_energy_j,std_error_j,unstable\n");
    for (const auto& pt : points)
      std::fprintf(f, "%.17g,%.17g,%.17g,%d\n", pt.delta0, pt.mean_energy, pt.std_error,
                   pt.unstable ? 1 : 0);
    std::fclose(f);
  }
}

void run_torsional_scenario(const Scenario& s, Outputs& out, std::string& summary) {
  const auto sys = dynamics::TorsionalSystem::make(*s.cavity, *s.mech, s.oam_l);
  append(summary, "optotorsional_coupling_per_s = %.17g\n", sys.g_phi);

  // Static deflection: fixed point of phi = hbar g |alpha(phi)|^2 / (I w^2).
  if (s.mech->omega_m > 0.0) {
    double phi_eq = 0.0;
    for (int i = 0; i < 64; ++i) {
      const auto alpha = sys.cavity.drive / std::complex<double>(0.5 * sys.cavity.gamma0,
                                                                 sys.cavity.delta0 -
                                                                     sys.g_phi * phi_eq);
      phi_eq = hbar * sys.g_phi * std::norm(alpha) /
               (sys.mech.inertia * sys.mech.omega_m * sys.mech.omega_m);
    }
    append(summary, "static_deflection_rad = %.17g\n", phi_eq);
  }

  const double dt =
      s.run.dt > 0.0 ? s.run.dt : dynamics::default_timestep(dynamics::torsional_max_rate(sys));
  const long n_steps = static_cast<long>(std::ceil((s.run.settle + s.run.duration) / dt));
  dynamics::TorsionalState init;
  init.alpha = sys.cavity.drive / std::complex<double>(0.5 * sys.cavity.gamma0, sys.cavity.delta0);
  const Trajectory traj =
      dynamics::run_torsional(sys, init, dt, n_steps, s.run.output_stride, noise_from(s.run));
  io::write_trajectory_csv(traj, "phi", "Lz", out.file("trajectory.csv"));
  append(summary, "dt_s = %.17g\nsamples = %zu\n", dt, traj.t.size());

  double phi_mean = 0.0;
  long count = 0;
  for (size_t i = 0; i < traj.t.size(); ++i)
    if (traj.t[i] >= s.run.settle) {
      phi_mean += traj.coord[i];
      ++count;
    }
  if (count > 0) append(summary, "mean_deflection_rad = %.17g\n", phi_mean / count);

  if (s.analysis.spectrum)
    write_spectrum_and_detect(post_settle_alpha(traj, s.run.settle), traj.dt_sample, s,
                              std::nan(""), out, summary);
}

void run_rotational_scenario(const Scenario& s, Outputs& out, std::string& summary) {
  const auto& lat = *s.lattice;
  const double g_l = coupling::rotational_coupling(lat.l, *s.body, lat.R, lat.w0,
                                                   s.cavity->length, s.cavity->omega0);
  dynamics::RotationalSystem sys{*s.cavity, *s.mech, g_l, lat.l};
  const auto steady = dynamics::rotational_steady_state(sys.cavity, sys.mech, g_l, lat.l);
  const double omega_s = 2.0 * lat.l * steady.omega_ms;
  append(summary, "lattice_coupling_g_rads = %.17g\n", g_l);
  append(summary, "delta_prime_rads = %.17g\n", sys.delta_prime());
  append(summary, "steady_omega_ms_rads = %.17g\n", steady.omega_ms);
  append(summary, "steady_photon_number = %.17g\n", std::norm(steady.alpha_s));
  append(summary, "expected_sideband_rads = %.17g\n", omega_s);

  const double dt =
      s.run.dt > 0.0 ? s.run.dt : dynamics::default_timestep(dynamics::rotational_max_rate(sys));
  const long n_steps = static_cast<long>(std::ceil((s.run.settle + s.run.duration) / dt));
  dynamics::RotationalState init;
  init.Lz = sys.mech.inertia * (steady.bounded ? steady.omega_ms : 0.0);
  init.alpha = steady.alpha_s;
  const Trajectory traj =
      dynamics::run_rotational(sys, init, dt, n_steps, s.run.output_stride, noise_from(s.run));
  io::write_trajectory_csv(traj, "phi", "Lz", out.file("trajectory.csv"));
  append(summary, "dt_s = %.17g\nsamples = %zu\n", dt, traj.t.size());

  double lz_mean = 0.0;
  long count = 0;
  for (size_t i = 0; i < traj.t.size(); ++i)
    if (traj.t[i] >= s.run.settle) {
      lz_mean += traj.momentum[i];
      ++count;
    }
  if (count > 0)
    append(summary, "mean_rotation_rads = %.17g\n", lz_mean / count / sys.mech.inertia);

  if (s.analysis.spectrum)
    write_spectrum_and_detect(post_settle_alpha(traj, s.run.settle), traj.dt_sample, s,
                              std::arg(steady.alpha_s), out, summary);

  if (!s.analysis.sweep_powers.empty()) {
    analysis::SweepConfig cfg;
    cfg.settle_time = s.run.settle;
    cfg.record_time = s.analysis.sweep_record > 0.0 ? s.analysis.sweep_record : s.run.duration;
    cfg.dt = s.run.dt;
    cfg.seeds_per_point = s.analysis.sweep_seeds;
    cfg.base_seed = s.run.seed;
    cfg.band_lo = s.analysis.band_lo;
    cfg.band_hi = s.analysis.band_hi;
    cfg.welch = welch_from(s.analysis);
    cfg.thermal_noise = s.run.thermal_noise;
    const auto sweep = analysis::power_sweep(sys, s.analysis.sweep_powers, cfg);
    io::write_sweep_csv(sweep, out.file("sweep.csv"));
    append(summary, "sweep_critical_power_w = %.17g\nsweep_resolution_rads = %.17g\n",
           sweep.critical_power, sweep.resolution);
  }
}

void run_beams_scenario(const Scenario& s, Outputs& out, std::string& summary) {
  const auto& mode = *s.mode;
  beams::FieldGrid field = beams::render_mode(mode, s.grid.z, s.grid.extent, s.grid.n);
  if (s.grid.superpose_conjugate) {
    const beams::LGModeSpec mirror(-mode.l, mode.p, mode.w0, mode.lambda);
    const beams::FieldGrid second = beams::render_mode(mirror, s.grid.z, s.grid.extent, s.grid.n);
    const double w = 1.0 / std::sqrt(2.0);
    field = beams::superpose(field, second, w, w);
  }
  if (s.grid.phase_plate_steps != 0.0)
    field = beams::phase_plate_transform(field, s.grid.phase_plate_steps * mode.lambda,
                                         mode.lambda);
  io::write_field_csv(field, out.file("field.csv"), mode.lambda);
  out.names.push_back("field.csv.meta");
  io::write_intensity_csv(field, out.file("intensity.csv"));
  append(summary, "grid_n = %d\ngrid_extent_m = %.17g\n", field.n, field.extent);
  append(summary, "total_intensity = %.17g\n", field.total_intensity());
  append(summary, "oam_expectation = %.17g\n", beams::oam_expectation(field));
  if (s.grid.superpose_conjugate && mode.l != 0) {
    const double ring = mode.waist_at(s.grid.z) * std::sqrt(std::abs(mode.l) / 2.0);
    append(summary, "azimuthal_lobes = %d\n", beams::count_azimuthal_maxima(field, ring));
  }
}

} // namespace

RunManifest run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  Outputs out{out_dir, {}};
  std::string summary;
  append(summary, "system = %s\n", to_string(scenario.system).c_str());

  switch (scenario.system) {
    case SystemKind::vibrational: run_vibrational_scenario(scenario, out, summary); break;
    case SystemKind::torsional: run_torsional_scenario(scenario, out, summary); break;
    case SystemKind::rotational: run_rotational_scenario(scenario, out, summary); break;
    case SystemKind::beams_demo: run_beams_scenario(scenario, out, summary); break;
  }

  {
    FILE* f = std::fopen((out_dir / "summary.txt").string().c_str(), "w");
    if (!f) throw std::runtime_error("cannot open summary.txt");
    std::fputs(summary.c_str(), f);
    std::fclose(f);
    out.names.push_back("summary.txt");
  }

  RunManifest manifest;
  manifest.digest = scenario_digest(scenario);
  manifest.version = code_version;
  manifest.seed = scenario.run.seed;
  manifest.wall_clock = iso_utc_now();
  manifest.outputs = out.names;
  write_manifest(manifest, out_dir / "manifest.txt");
  return manifest;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::fprintf(f, "scenario_digest = %016" PRIx64 "\n", static_cast<uint64_t>(manifest.digest));
  std::fprintf(f, "version = %s\n", manifest.version.c_str());
  std::fprintf(f, "seed = %" PRIu64 "\n", static_cast<uint64_t>(manifest.seed));
  std::fprintf(f, "wall_clock = %s\n", manifest.wall_clock.c_str());
  for (const auto& name : manifest.outputs) std::fprintf(f, "output = %s\n", name.c_str());
  std::fclose(f);
}

} // namespace oamsim::cli
