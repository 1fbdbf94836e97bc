// Spectral and response analysis: homodyne output spectra (Welch), rotation
// detection, closed-form linear response of the rotational system, probe
// power sweeps, displacement sensing and cooling diagnostics.
#pragma once

#include "oamsim/dynamics.hpp"

#include <complex>
#include <string>
#include <vector>

namespace oamsim::analysis {

using cplx = std::complex<double>;

enum class Taper { hann, rectangular };

struct WelchConfig {
  int num_segments = 8;
  double overlap = 0.5;
  Taper taper = Taper::hann;
};

/// One-sided power spectral density. freqs in rad/s (strictly increasing),
/// psd in signal^2 per (rad/s); resolution is the bin width 2 pi / (segment
/// duration). Parseval: sum(psd) * resolution ~= mean square of the signal.
struct Spectrum {
  std::vector<double> freqs;
  std::vector<double> psd;
  double resolution = 0.0;
  std::string window;
};

/// Welch PSD of a real record.
Spectrum welch_psd(const std::vector<double>& signal, double dt_sample, const WelchConfig& cfg);

/// Welch PSD of the homodyne phase quadrature Im(alpha e^{-i lo_phase}).
/// Pass NaN to lock the local oscillator to the record's mean field phase.
/// Throws std::invalid_argument naming the minimum record length when the
/// record cannot fill the requested segments.
Spectrum output_spectrum(const std::vector<cplx>& alpha, double dt_sample, const WelchConfig& cfg,
                         double lo_phase);

struct DetectionResult {
  double omega_d = 0.0; // detected rotation-signature frequency, rad/s
  double snr = 0.0;     // peak / median background
  double p_in = 0.0;    // probe power for this run, W
};

/// Maximum-PSD bin within [band_lo, band_hi], refined by three-point
/// parabolic interpolation on log psd; snr = peak / median(psd in band).
DetectionResult detect_rotation(const Spectrum& spec, double band_lo, double band_hi);

/// Closed-form fluctuations around the rotating steady state, valid on
/// resonance (Delta' = 0) with cavity losses ignored (gamma0 = 0):
///   delta_U(t) = delta_U(0) e^{i omega_s t},  omega_s = 2 l L_zs / I
///   delta_a(t) = delta_a(0)
///              + (g a_s / 4 omega_s) [dU0 (e^{i w_s t}-1) - dU0* (e^{-i w_s t}-1)]
/// whose transform is A delta(w) + B* delta(w - w_s) - B delta(w + w_s) with
/// B = sqrt(2 pi) g a_s dU0* / (4 w_s) and A = sqrt(2 pi) da0 + B - B*.
struct LinearResponse {
  cplx A = 0.0;
  cplx B = 0.0;
  double omega_s = 0.0;
  cplx delta_a0 = 0.0;
  cplx delta_u0 = 0.0;
  double g_l = 0.0;
  double alpha_s = 0.0;

  cplx delta_u(double t) const;
  cplx delta_a(double t) const;
};

/// Throws std::invalid_argument unless delta_prime == 0 and gamma0 == 0
/// (the analytic branch's validity conditions).
LinearResponse linear_response_rotational(double g_l, int l, double alpha_s, double Lz_s,
                                          double inertia, cplx delta_a0, cplx delta_u0,
                                          double delta_prime, double gamma0);

struct SweepPoint {
  DetectionResult detection;
  std::uint64_t seed = 0;
  double mean_Lz = 0.0; // time average over the analysis window
};

struct PowerSweepResult {
  std::vector<SweepPoint> points; // powers-major, seeds-minor order
  double critical_power = 0.0;    // +inf if no departure observed
  double omega_s = 0.0;           // 2 l omega_ms of the base system
  double resolution = 0.0;        // spectral bin width used for the criterion
};

struct SweepConfig {
  double settle_time = 0.0;    // discarded lead-in, s
  double record_time = 0.0;    // analyzed record, s
  double dt = 0.0;             // 0 = default_timestep of the stiffest power
  double sample_dt = 0.0;      // 0 = 64 samples per expected beat
  int seeds_per_point = 1;
  std::uint64_t base_seed = 0;
  double band_lo = 0.0;        // 0 = 3 bins above DC
  double band_hi = 0.0;        // 0 = 0.9 Nyquist
  WelchConfig welch;
  bool thermal_noise = true;
  int threads = 0;             // 0 = hardware concurrency
  double departure_bins = 2.0; // bins of |omega_d - omega_s| defining P_c
};

/// Full nonlinear runs of the rotational system per (power, seed); the
/// empirical critical power is the smallest power whose median departure
/// |omega_d - omega_s| exceeds departure_bins * resolution.
PowerSweepResult power_sweep(const dynamics::RotationalSystem& base,
                             const std::vector<double>& powers, const SweepConfig& cfg);

struct SensitivityCurve {
  std::vector<double> q;
  std::vector<double> phase;     // arg adiabatic_field(q)
  double slope_at_zero = 0.0;    // analytic g / (gamma0 / 2) at delta0 = 0
};

/// Phase-vs-displacement curve of the adiabatically eliminated field.
SensitivityCurve displacement_sensitivity(const coupling::CavityParams& cav, double g,
                                          const std::vector<double>& q_grid);

struct CoolingConfig {
  int seeds = 8;
  double settle_time = 0.0;
  double record_time = 0.0;
  double dt = 0.0; // 0 = default
  std::uint64_t base_seed = 0;
  double unstable_energy_factor = 100.0; // x thermal energy flags instability
};

struct CoolingPoint {
  double delta0 = 0.0;
  double mean_energy = 0.0; // <p^2/2m + m w^2 q^2/2>, J
  double std_error = 0.0;   // over the seed ensemble
  bool unstable = false;
};

/// Steady-state mechanical energy per detuning from full nonlinear runs with
/// thermal noise. Exponential growth is reported as unstable, not an error.
std::vector<CoolingPoint> cooling_diagnostic(const dynamics::VibrationalSystem& base,
                                             const std::vector<double>& detunings,
                                             const CoolingConfig& cfg);

} // namespace oamsim::analysis
