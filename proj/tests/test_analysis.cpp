#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oamsim/analysis.hpp"
#include "oamsim/constants.hpp"
#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace oamsim;
using namespace oamsim::analysis;

namespace {

std::vector<double> sine_record(double omega, double dt, long n, double phase = 0.0) {
  std::vector<double> out(n);
  for (long i = 0; i < n; ++i) out[i] = std::sin(omega * i * dt + phase);
  return out;
}

} // namespace

TEST_CASE("welch psd of a pure tone peaks at the tone within one bin") {
  const double dt = 1e-3, omega = 2.0 * pi * 37.3;
  const auto spec = welch_psd(sine_record(omega, dt, 16384), dt, WelchConfig{});
  CHECK(spec.window == "hann");
  CHECK(spec.freqs.front() == 0.0);
  for (size_t i = 1; i < spec.freqs.size(); ++i)
    CHECK(spec.freqs[i] - spec.freqs[i - 1] == doctest::Approx(spec.resolution));
  const auto det = detect_rotation(spec, 10.0, 0.9 * pi / dt);
  CHECK(std::abs(det.omega_d - omega) < spec.resolution);
  CHECK(det.snr > 100.0);
}

TEST_CASE("welch psd is Parseval-consistent and flat for white noise") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal(0.0, 1.0);
  const long n = 65536;
  const double dt = 1e-3;
  std::vector<double> noise(n);
  double var = 0.0, mean = 0.0;
  for (auto& x : noise) {
    x = normal(rng);
    mean += x;
  }
  mean /= n;
  for (auto x : noise) var += (x - mean) * (x - mean);
  var /= n;

  const auto spec = welch_psd(noise, dt, WelchConfig{});
  double total = 0.0;
  for (double p : spec.psd) total += p;
  total *= spec.resolution;
  CHECK(total == doctest::Approx(var).epsilon(0.05));

  // flat within statistical bounds once smoothed over 64-bin blocks
  const double level = var * dt / pi; // one-sided density in rad/s
  const size_t n_bins = spec.psd.size();
  for (size_t start = n_bins / 8; start + 64 < 7 * n_bins / 8; start += 64) {
    double block = 0.0;
    for (size_t j = start; j < start + 64; ++j) block += spec.psd[j];
    block /= 64.0;
    CHECK(block / level > 0.6);
    CHECK(block / level < 1.6);
  }
}

TEST_CASE("welch psd rejects too-short records by naming the minimum") {
  const std::vector<double> tiny(50, 1.0);
  try {
    welch_psd(tiny, 1e-3, WelchConfig{});
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("need at least") != std::string::npos);
  }
}

TEST_CASE("output_spectrum homodynes the phase quadrature") {
  // alpha(t) = carrier + small phase modulation at Omega
  const double dt = 1e-3, omega = 2.0 * pi * 41.0;
  const long n = 16384;
  std::vector<std::complex<double>> alpha(n);
  for (long i = 0; i < n; ++i)
    alpha[i] = 10.0 * std::polar(1.0, 0.9 + 0.01 * std::sin(omega * i * dt));
  const auto spec = output_spectrum(alpha, dt, WelchConfig{}, std::nan(""));
  const auto det = detect_rotation(spec, 10.0, 0.9 * pi / dt);
  CHECK(std::abs(det.omega_d - omega) < spec.resolution);

  // a pure rotating tone also lands on its frequency
  for (long i = 0; i < n; ++i) alpha[i] = std::polar(1.0, omega * i * dt);
  const auto spec2 = output_spectrum(alpha, dt, WelchConfig{}, 0.0);
  const auto det2 = detect_rotation(spec2, 10.0, 0.9 * pi / dt);
  CHECK(std::abs(det2.omega_d - omega) < spec2.resolution);
}

TEST_CASE("detect_rotation is unbiased on random tones and rejects empty bands") {
  const double dt = 1e-3;
  const long n = 16384;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.15, 0.42);
  double bias = 0.0, worst = 0.0, resolution = 0.0;
  const int draws = 100;
  for (int k = 0; k < draws; ++k) {
    const double omega = uni(rng) * 2.0 * pi / dt;
    const auto spec = welch_psd(sine_record(omega, dt, n, 0.3 * k), dt, WelchConfig{});
    const auto det = detect_rotation(spec, 20.0, 0.95 * pi / dt);
    bias += det.omega_d - omega;
    worst = std::max(worst, std::abs(det.omega_d - omega));
    resolution = spec.resolution;
  }
  bias /= draws;
  CHECK(std::abs(bias) < 0.1 * resolution);
  CHECK(worst < 0.5 * resolution);

  const auto spec = welch_psd(sine_record(1.0, dt, n), dt, WelchConfig{});
  CHECK_THROWS_AS(detect_rotation(spec, 1e9, 2e9), std::invalid_argument);
  CHECK_THROWS_AS(detect_rotation(Spectrum{}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("linear response: structure, carrier weight and numeric agreement") {
  const double g = 5.0, a_s = 2.0, inertia = 1.0, Lz = 10.0;
  const int l = 2;
  const std::complex<double> da0(0.3, 0.1);
  const std::complex<double> du0 = std::polar(1.0, 0.7);

  CHECK_THROWS_AS(linear_response_rotational(g, l, a_s, Lz, inertia, da0, du0, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(linear_response_rotational(g, l, a_s, Lz, inertia, da0, du0, 0.0, 10.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(linear_response_rotational(g, l, a_s, 0.0, inertia, da0, du0, 0.0, 0.0),
                  std::invalid_argument);

  const auto lr = linear_response_rotational(g, l, a_s, Lz, inertia, da0, du0, 0.0, 0.0);
  CHECK(lr.omega_s == doctest::Approx(2.0 * l * Lz / inertia)); // 40 rad/s
  CHECK(lr.A == std::sqrt(2.0 * pi) * da0 + lr.B - std::conj(lr.B));

  // delta_U stays on the unit circle scaled by its start, at frequency omega_s
  CHECK(std::abs(lr.delta_u(0.37)) == doctest::Approx(std::abs(du0)).epsilon(1e-12));

  // no initial angular perturbation -> no sidebands, constant delta_a
  const auto flat = linear_response_rotational(g, l, a_s, Lz, inertia, da0, {0.0, 0.0}, 0.0, 0.0);
  CHECK(flat.B == std::complex<double>(0.0, 0.0));
  CHECK(std::abs(flat.delta_a(0.8) - da0) < 1e-15);

  // independent RK4 integration of the linearized equations
  using oracles::CVec;
  auto rhs = [&](double, const CVec& y) {
    CVec d(2);
    d[0] = std::complex<double>(0.0, lr.omega_s) * y[0];
    d[1] = std::complex<double>(0.0, 0.25 * g * a_s) * (y[0] + std::conj(y[0]));
    return d;
  };
  const double t_end = 10.0 * 2.0 * pi / lr.omega_s;
  const int n_steps = 4000;
  const double dt = t_end / n_steps;
  CVec y{du0, da0};
  double err2 = 0.0, ref2 = 0.0;
  std::complex<double> mean_numeric = 0.0;
  for (int i = 0; i < n_steps; ++i) {
    y = oracles::rk4_step(rhs, i * dt, y, dt);
    const auto analytic = lr.delta_a((i + 1) * dt);
    err2 += std::norm(y[1] - analytic);
    ref2 += std::norm(analytic);
    mean_numeric += y[1];
  }
  CHECK(std::sqrt(err2 / ref2) < 1e-3);

  // carrier weight: the time average of delta_a over whole beats is A/sqrt(2pi)
  mean_numeric /= static_cast<double>(n_steps);
  CHECK(std::abs(mean_numeric - lr.A / std::sqrt(2.0 * pi)) < 1e-3 * std::abs(lr.A));
}

TEST_CASE("displacement sensitivity: slope, doubling, finite differences") {
  const double gamma0 = 1e6, g = 1e12, F = 1e4;
  const coupling::CavityParams cav(0.01, 2.0 * pi * 3e14, gamma0, 0.0, F);
  std::vector<double> grid;
  for (int i = -50; i <= 50; ++i) grid.push_back(i * 1e-9);
  const auto curve = displacement_sensitivity(cav, g, grid);
  CHECK(curve.phase[50] == doctest::Approx(0.0)); // q = 0 at Delta0 = 0
  CHECK(curve.slope_at_zero == doctest::Approx(g / (0.5 * gamma0)));

  const coupling::CavityParams half_loss(0.01, 2.0 * pi * 3e14, 0.5 * gamma0, 0.0, F);
  CHECK(displacement_sensitivity(half_loss, g, grid).slope_at_zero ==
        doctest::Approx(2.0 * curve.slope_at_zero));

  const double fd = oracles::central_difference(
      [&](double q) { return std::arg(dynamics::adiabatic_field(q, cav, g)); }, 0.0, 1e-12);
  CHECK(fd == doctest::Approx(curve.slope_at_zero).epsilon(1e-6));
}

namespace {

dynamics::RotationalSystem sweep_system() {
  const double w0 = 2e-4, lambda_p = 2e-3, L = 1e-3;
  const double omega_c = 2.0 * pi * speed_of_light / lambda_p;
  const beams::RingLattice lat = beams::RingLattice::from_trap(2, 2, w0, lambda_p);
  const coupling::DielectricBody body(2.0, 1e-17);
  const double g_l = coupling::rotational_coupling(lat.l, body, lat.R, w0, L, omega_c);
  auto mech = coupling::MechanicalParams::rotational_ring(2e-14, lat.R, 200.0, 300.0, 0.0);
  mech.torque = mech.inertia * mech.gamma_m * 1000.0; // omega_ms = 1000 rad/s
  coupling::CavityParams cav(L, omega_c, 1e5, 0.0, 0.0);
  dynamics::RotationalSystem sys{cav, mech, g_l, lat.l};
  sys.cavity.delta0 = 0.5 * g_l; // Delta' = 0
  return sys;
}

} // namespace

TEST_CASE("mini power sweep: plateau at low power and bitwise reproducibility") {
  const auto sys = sweep_system();
  SweepConfig cfg;
  cfg.settle_time = 0.01;
  cfg.record_time = 0.022;
  cfg.seeds_per_point = 2;
  cfg.base_seed = 11;
  cfg.welch.num_segments = 4;
  const std::vector<double> powers{1e-9, 1e-8};

  const auto sweep = power_sweep(sys, powers, cfg);
  REQUIRE(sweep.points.size() == 4);
  CHECK(sweep.omega_s == doctest::Approx(4000.0));
  for (const auto& pt : sweep.points) {
    CHECK(std::abs(pt.detection.omega_d - sweep.omega_s) <= sweep.resolution);
    CHECK(pt.mean_Lz / sys.mech.inertia == doctest::Approx(1000.0).epsilon(0.02));
  }
  CHECK(std::isinf(sweep.critical_power));

  const auto again = power_sweep(sys, powers, cfg);
  for (size_t i = 0; i < sweep.points.size(); ++i) {
    CHECK(again.points[i].detection.omega_d == sweep.points[i].detection.omega_d);
    CHECK(again.points[i].detection.snr == sweep.points[i].detection.snr);
    CHECK(again.points[i].mean_Lz == sweep.points[i].mean_Lz);
  }

  CHECK_THROWS_AS(power_sweep(sys, {1e-8, 1e-9}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(power_sweep(sys, {}, cfg), std::invalid_argument);
}

TEST_CASE("cooling diagnostic: dark cavity stays thermal at every detuning") {
  const double omega_m = 6.28e5, gamma_m = 6283.0, T = 300.0;
  const coupling::CavityParams cav(0.01, 2.0 * pi * 3e14, 6.28e5, 0.0, 0.0);
  const auto mech = coupling::MechanicalParams::vibrational(1e-8, omega_m, gamma_m, T);
  const auto sys = dynamics::VibrationalSystem::make(cav, mech);
  CoolingConfig cfg;
  cfg.seeds = 4;
  cfg.settle_time = 1e-3;
  cfg.record_time = 2e-3;
  cfg.base_seed = 3;
  const auto points = cooling_diagnostic(sys, {0.0, omega_m}, cfg);
  REQUIRE(points.size() == 2);
  for (const auto& pt : points) {
    CHECK_FALSE(pt.unstable);
    CHECK(pt.mean_energy == doctest::Approx(k_boltzmann * T).epsilon(0.3));
  }
}
