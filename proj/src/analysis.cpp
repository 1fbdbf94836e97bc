#include "oamsim/analysis.hpp"
#include "oamsim/constants.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace oamsim::analysis {

namespace {

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

void parallel_for(int n_tasks, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n_tasks));
  if (threads == 1) {
    for (int i = 0; i < n_tasks; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n_tasks) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

} // namespace

Spectrum welch_psd(const std::vector<double>& signal, double dt_sample, const WelchConfig& cfg) {
  if (!(dt_sample > 0.0)) throw std::invalid_argument("welch_psd: dt_sample must be > 0");
  if (cfg.num_segments < 1) throw std::invalid_argument("welch_psd: num_segments must be >= 1");
  if (!(cfg.overlap >= 0.0 && cfg.overlap < 1.0))
    throw std::invalid_argument("welch_psd: overlap must be in [0, 1)");
  const long n = static_cast<long>(signal.size());
  // Segment length from the requested count at the given overlap.
  const double denom = 1.0 + (cfg.num_segments - 1) * (1.0 - cfg.overlap);
  long seg = static_cast<long>(std::floor(n / denom));
  seg &= ~1L; // even length keeps the Nyquist bin well-defined
  const long min_seg = 16;
  if (seg < min_seg) {
    const long min_record = static_cast<long>(std::ceil(min_seg * denom)) + 1;
    throw std::invalid_argument("welch_psd: record too short, need at least " +
                                std::to_string(min_record) + " samples for " +
                                std::to_string(cfg.num_segments) + " segments (got " +
                                std::to_string(n) + ")");
  }
  const long hop = std::max(1L, static_cast<long>(std::lround(seg * (1.0 - cfg.overlap))));
  const long n_segments = 1 + (n - seg) / hop;

  double mean = 0.0;
  for (double v : signal) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> window(seg);
  double u = 0.0; // mean square of the window
  for (long j = 0; j < seg; ++j) {
    window[j] = cfg.taper == Taper::hann
                    ? 0.5 * (1.0 - std::cos(2.0 * pi * j / static_cast<double>(seg)))
                    : 1.0;
    u += window[j] * window[j];
  }
  u /= static_cast<double>(seg);

  const long n_bins = seg / 2 + 1;
  std::vector<double> accum(n_bins, 0.0);
  {
    double* in;
    fftw_complex* out;
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      in = fftw_alloc_real(seg);
      out = fftw_alloc_complex(n_bins);
      plan = fftw_plan_dft_r2c_1d(static_cast<int>(seg), in, out, FFTW_ESTIMATE);
    }
    for (long s = 0; s < n_segments; ++s) {
      const long start = s * hop;
      for (long j = 0; j < seg; ++j) in[j] = (signal[start + j] - mean) * window[j];
      fftw_execute(plan);
      for (long j = 0; j < n_bins; ++j)
        accum[j] += out[j][0] * out[j][0] + out[j][1] * out[j][1];
    }
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }

  Spectrum spec;
  spec.resolution = 2.0 * pi / (seg * dt_sample);
  spec.window = cfg.taper == Taper::hann ? "hann" : "rectangular";
  spec.freqs.resize(n_bins);
  spec.psd.resize(n_bins);
  // One-sided PSD in rad/s: interior bins carry the folded negative
  // frequencies; sum(psd) * resolution recovers the signal variance.
  const double scale = dt_sample / (2.0 * pi * seg * u) / n_segments;
  for (long j = 0; j < n_bins; ++j) {
    spec.freqs[j] = j * spec.resolution;
    const double one_sided = (j == 0 || j == n_bins - 1) ? 1.0 : 2.0;
    spec.psd[j] = accum[j] * scale * one_sided;
  }
  return spec;
}

Spectrum output_spectrum(const std::vector<cplx>& alpha, double dt_sample, const WelchConfig& cfg,
                         double lo_phase) {
  if (std::isnan(lo_phase)) {
    cplx mean = 0.0;
    double peak = 0.0;
    for (const auto& a : alpha) {
      mean += a;
      peak = std::max(peak, std::abs(a));
    }
    mean /= static_cast<double>(alpha.size());
    lo_phase = (std::abs(mean) > 1e-12 * peak) ? std::arg(mean) : 0.0;
  }
  std::vector<double> quadrature(alpha.size());
  const cplx rot = std::polar(1.0, -lo_phase);
  for (size_t i = 0; i < alpha.size(); ++i) quadrature[i] = (alpha[i] * rot).imag();
  return welch_psd(quadrature, dt_sample, cfg);
}

DetectionResult detect_rotation(const Spectrum& spec, double band_lo, double band_hi) {
  if (spec.freqs.empty()) throw std::invalid_argument("detect_rotation: empty spectrum");
  long lo = -1, hi = -1;
  for (long j = 0; j < static_cast<long>(spec.freqs.size()); ++j) {
    if (spec.freqs[j] >= band_lo && lo < 0) lo = j;
    if (spec.freqs[j] <= band_hi) hi = j;
  }
  if (lo < 0 || hi < lo) throw std::invalid_argument("detect_rotation: empty search band");

  long peak = lo;
  for (long j = lo; j <= hi; ++j)
    if (spec.psd[j] > spec.psd[peak]) peak = j;

  double omega = spec.freqs[peak];
  const long last = static_cast<long>(spec.freqs.size()) - 1;
  if (peak > 0 && peak < last && spec.psd[peak] > 0.0 && spec.psd[peak - 1] > 0.0 &&
      spec.psd[peak + 1] > 0.0) {
    const double a = std::log(spec.psd[peak - 1]);
    const double b = std::log(spec.psd[peak]);
    const double c = std::log(spec.psd[peak + 1]);
    const double curve = a - 2.0 * b + c;
    if (curve < 0.0) {
      double shift = 0.5 * (a - c) / curve;
      shift = std::clamp(shift, -0.5, 0.5);
      omega += shift * spec.resolution;
    }
  }

  std::vector<double> band(spec.psd.begin() + lo, spec.psd.begin() + hi + 1);
  const size_t mid = band.size() / 2;
  std::nth_element(band.begin(), band.begin() + mid, band.end());
  const double background = band[mid];
  DetectionResult det;
  det.omega_d = omega;
  det.snr = background > 0.0 ? spec.psd[peak] / background
                             : std::numeric_limits<double>::infinity();
  return det;
}

cplx LinearResponse::delta_u(double t) const { return delta_u0 * std::polar(1.0, omega_s * t); }

cplx LinearResponse::delta_a(double t) const {
  const cplx eplus = std::polar(1.0, omega_s * t);
  const cplx eminus = std::conj(eplus);
  return delta_a0 + g_l * alpha_s / (4.0 * omega_s) *
                        (delta_u0 * (eplus - 1.0) - std::conj(delta_u0) * (eminus - 1.0));
}

LinearResponse linear_response_rotational(double g_l, int l, double alpha_s, double Lz_s,
                                          double inertia, cplx delta_a0, cplx delta_u0,
                                          double delta_prime, double gamma0) {
  if (delta_prime != 0.0)
    throw std::invalid_argument(
        "linear_response_rotational: analytic branch requires Delta' = 0");
  if (gamma0 != 0.0)
    throw std::invalid_argument(
        "linear_response_rotational: analytic branch requires gamma0 = 0");
  const double omega_s = 2.0 * l * Lz_s / inertia;
  if (omega_s == 0.0)
    throw std::invalid_argument("linear_response_rotational: requires a rotating steady state");
  LinearResponse lr;
  lr.omega_s = omega_s;
  lr.delta_a0 = delta_a0;
  lr.delta_u0 = delta_u0;
  lr.g_l = g_l;
  lr.alpha_s = alpha_s;
  const double sq2pi = std::sqrt(2.0 * pi);
  lr.B = sq2pi * g_l * alpha_s * std::conj(delta_u0) / (4.0 * omega_s);
  lr.A = sq2pi * delta_a0 + lr.B - std::conj(lr.B);
  return lr;
}

namespace {

struct SweepTask {
  int power_index;
  int seed_index;
};

} // namespace

PowerSweepResult power_sweep(const dynamics::RotationalSystem& base,
                             const std::vector<double>& powers, const SweepConfig& cfg) {
  using namespace dynamics;
  if (powers.empty()) throw std::invalid_argument("power_sweep: empty power list");
  for (size_t i = 0; i < powers.size(); ++i) {
    if (!(powers[i] > 0.0)) throw std::invalid_argument("power_sweep: powers must be positive");
    if (i > 0 && powers[i] <= powers[i - 1])
      throw std::invalid_argument("power_sweep: powers must be ascending");
  }
  if (cfg.seeds_per_point < 1)
    throw std::invalid_argument("power_sweep: seeds_per_point must be >= 1");

  const auto steady = rotational_steady_state(base.cavity, base.mech, base.g_l, base.l);
  const double omega_s = 2.0 * base.l * steady.omega_ms;
  if (!(omega_s > 0.0))
    throw std::invalid_argument("power_sweep: base system must have a rotating steady state");

  // Systems per power: the drive scales as sqrt(P).
  std::vector<RotationalSystem> systems;
  systems.reserve(powers.size());
  for (double p : powers) {
    RotationalSystem sys = base;
    sys.cavity.drive =
        coupling::CavityParams::drive_from_power(p, sys.cavity.gamma0, sys.cavity.omega0);
    systems.push_back(sys);
  }

  double dt = cfg.dt;
  if (dt <= 0.0) {
    double fastest = 0.0;
    for (const auto& sys : systems) fastest = std::max(fastest, rotational_max_rate(sys));
    dt = default_timestep(fastest);
  }
  double sample_dt = cfg.sample_dt;
  if (sample_dt <= 0.0) sample_dt = (2.0 * pi / omega_s) / 64.0;
  const long stride = std::max(1L, static_cast<long>(std::lround(sample_dt / dt)));
  sample_dt = stride * dt;

  const double record_time =
      cfg.record_time > 0.0 ? cfg.record_time : 64.0 * 2.0 * pi / omega_s;
  const long settle_steps = static_cast<long>(std::ceil(cfg.settle_time / dt));
  const long record_steps = static_cast<long>(std::ceil(record_time / dt));

  const double nyquist = pi / sample_dt;
  PowerSweepResult result;
  result.omega_s = omega_s;
  result.points.resize(powers.size() * cfg.seeds_per_point);

  std::atomic<double> resolution_out{0.0};
  std::mutex failure_mutex;
  std::string failure;

  const int n_tasks = static_cast<int>(result.points.size());
  parallel_for(n_tasks, cfg.threads, [&](int task) {
    const int pi_idx = task / cfg.seeds_per_point;
    const int seed_idx = task % cfg.seeds_per_point;
    const RotationalSystem& sys = systems[pi_idx];
    NoiseConfig noise;
    noise.seed = NoiseStream::derive(cfg.base_seed, static_cast<std::uint64_t>(task));
    noise.include_thermal = cfg.thermal_noise;

    RotationalState state;
    state.phi = 0.0;
    state.Lz = sys.mech.inertia * steady.omega_ms;
    state.alpha = rotational_steady_state(sys.cavity, sys.mech, sys.g_l, sys.l).alpha_s;

    NoiseStream rng(noise.seed);
    try {
      for (long k = 0; k < settle_steps; ++k) state = step_rotational(state, sys, dt, rng, noise);
      std::vector<cplx> alpha;
      alpha.reserve(static_cast<size_t>(record_steps / stride) + 1);
      double lz_sum = 0.0;
      long lz_count = 0;
      for (long k = 0; k < record_steps; ++k) {
        state = step_rotational(state, sys, dt, rng, noise);
        if (!std::isfinite(state.phi) || !std::isfinite(state.Lz))
          throw std::runtime_error("diverged at step " + std::to_string(k));
        if (k % stride == 0) {
          alpha.push_back(state.alpha);
          lz_sum += state.Lz;
          ++lz_count;
        }
      }
      const double lo_phase = std::arg(state.alpha == cplx(0.0) ? cplx(1.0) : state.alpha);
      Spectrum spec = output_spectrum(alpha, sample_dt, cfg.welch, lo_phase);
      resolution_out.store(spec.resolution);
      const double lo = cfg.band_lo > 0.0 ? cfg.band_lo : 3.0 * spec.resolution;
      const double hi = cfg.band_hi > 0.0 ? cfg.band_hi : 0.9 * nyquist;
      DetectionResult det = detect_rotation(spec, lo, hi);
      det.p_in = powers[pi_idx];
      SweepPoint& out = result.points[task];
      out.detection = det;
      out.seed = noise.seed;
      out.mean_Lz = lz_count > 0 ? lz_sum / lz_count : 0.0;
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (failure.empty())
        failure = "power_sweep: simulation failed at P_in = " + std::to_string(powers[pi_idx]) +
                  " W (seed index " + std::to_string(seed_idx) + "): " + e.what();
    }
  });
  if (!failure.empty()) throw std::runtime_error(failure);

  result.resolution = resolution_out.load();
  result.critical_power = std::numeric_limits<double>::infinity();
  for (size_t p = 0; p < powers.size(); ++p) {
    std::vector<double> departures;
    departures.reserve(cfg.seeds_per_point);
    for (int s = 0; s < cfg.seeds_per_point; ++s)
      departures.push_back(
          std::abs(result.points[p * cfg.seeds_per_point + s].detection.omega_d - omega_s));
    const size_t mid = departures.size() / 2;
    std::nth_element(departures.begin(), departures.begin() + mid, departures.end());
    if (departures[mid] > cfg.departure_bins * result.resolution) {
      result.critical_power = powers[p];
      break;
    }
  }
  return result;
}

SensitivityCurve displacement_sensitivity(const coupling::CavityParams& cav, double g,
                                          const std::vector<double>& q_grid) {
  SensitivityCurve curve;
  curve.q = q_grid;
  curve.phase.reserve(q_grid.size());
  for (double q : q_grid) curve.phase.push_back(std::arg(dynamics::adiabatic_field(q, cav, g)));
  curve.slope_at_zero = g / (0.5 * cav.gamma0);
  return curve;
}

std::vector<CoolingPoint> cooling_diagnostic(const dynamics::VibrationalSystem& base,
                                             const std::vector<double>& detunings,
                                             const CoolingConfig& cfg) {
  using namespace dynamics;
  if (cfg.seeds < 1) throw std::invalid_argument("cooling_diagnostic: seeds must be >= 1");
  const double thermal = k_boltzmann * base.mech.temperature;
  std::vector<CoolingPoint> points(detunings.size());
  std::vector<std::vector<double>> energies(detunings.size(),
                                            std::vector<double>(cfg.seeds, 0.0));
  std::vector<std::vector<char>> unstable(detunings.size(), std::vector<char>(cfg.seeds, 0));

  const int n_tasks = static_cast<int>(detunings.size()) * cfg.seeds;
  parallel_for(n_tasks, 0, [&](int task) {
    const int d_idx = task / cfg.seeds;
    const int seed_idx = task % cfg.seeds;
    VibrationalSystem sys = base;
    sys.cavity.delta0 = detunings[d_idx];

    double dt = cfg.dt > 0.0 ? cfg.dt : default_timestep(vibrational_max_rate(sys));
    const long settle_steps = static_cast<long>(std::ceil(cfg.settle_time / dt));
    const long record_steps = static_cast<long>(std::ceil(cfg.record_time / dt));

    NoiseConfig noise;
    noise.seed = NoiseStream::derive(cfg.base_seed, static_cast<std::uint64_t>(task));
    NoiseStream rng(noise.seed);
    VibrationalState state;
    state.alpha = sys.cavity.drive / cplx(0.5 * sys.cavity.gamma0, sys.cavity.delta0);

    const double energy_cap = cfg.unstable_energy_factor * std::max(thermal, 1e-300);
    double sum = 0.0;
    long count = 0;
    bool blew_up = false;
    try {
      for (long k = 0; k < settle_steps; ++k) state = step_vibrational(state, sys, dt, rng, noise);
      for (long k = 0; k < record_steps; ++k) {
        state = step_vibrational(state, sys, dt, rng, noise);
        if (!std::isfinite(state.q) || !std::isfinite(state.p)) {
          blew_up = true;
          break;
        }
        const double e = 0.5 * state.p * state.p / sys.mech.mass +
                         0.5 * sys.mech.mass * sys.mech.omega_m * sys.mech.omega_m * state.q *
                             state.q;
        sum += e;
        ++count;
        if (e > energy_cap && base.mech.temperature > 0.0) {
          blew_up = true;
          break;
        }
      }
    } catch (const std::exception&) {
      blew_up = true;
    }
    energies[d_idx][seed_idx] = count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
    unstable[d_idx][seed_idx] = blew_up ? 1 : 0;
  });

  for (size_t d = 0; d < detunings.size(); ++d) {
    CoolingPoint& pt = points[d];
    pt.delta0 = detunings[d];
    double sum = 0.0, sum2 = 0.0;
    int n = 0;
    for (int s = 0; s < cfg.seeds; ++s) {
      pt.unstable = pt.unstable || unstable[d][s];
      if (std::isfinite(energies[d][s])) {
        sum += energies[d][s];
        sum2 += energies[d][s] * energies[d][s];
        ++n;
      }
    }
    if (n > 0) {
      pt.mean_energy = sum / n;
      if (n > 1) {
        const double var = (sum2 - sum * sum / n) / (n - 1);
        pt.std_error = std::sqrt(std::max(0.0, var) / n);
      }
    } else {
      pt.mean_energy = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return points;
}

} // namespace oamsim::analysis
