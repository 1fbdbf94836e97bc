#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oamsim/constants.hpp"
#include "oamsim/coupling.hpp"
#include "oracles.hpp"

#include <cmath>
#include <complex>

using namespace oamsim;
using namespace oamsim::coupling;

TEST_CASE("cavity params and resonant construction") {
  CHECK_THROWS_AS(CavityParams(-1.0, 1e15, 1e6, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CavityParams(0.01, 1e15, 1e6, 0.0, -1.0), std::invalid_argument);
  const CavityParams cav = CavityParams::resonant(100, 0.01, 1e6, 0.0, 0.0);
  CHECK(cav.omega0 == doctest::Approx(100.0 * pi * speed_of_light / 0.01));
  CHECK(cav.mode_index() == 100);
  CHECK(cav.wavenumber() == doctest::Approx(cav.omega0 / speed_of_light));
  // F = sqrt(P gamma0 / hbar omega0)
  const double F = CavityParams::drive_from_power(1e-6, 1e6, cav.omega0);
  CHECK(F == doctest::Approx(std::sqrt(1e-6 * 1e6 / (hbar * cav.omega0))));
  // field per photon accessors against their defining expressions
  const double V = 1e-12;
  CHECK(cav.e0_per_photon(V) == doctest::Approx(std::sqrt(hbar * cav.omega0 / (epsilon0 * V))));
  CHECK(cav.b0_per_photon(V) ==
        doctest::Approx(mu0 / cav.wavenumber() * std::sqrt(epsilon0 * std::pow(cav.omega0, 3) / V)));
}

TEST_CASE("vibrational coupling g = omega0/L = ck/L") {
  const CavityParams cav(0.01, 2.0 * pi * 3e14, 1e6, 0.0, 0.0);
  const double g = vibrational_coupling(cav);
  CHECK(g == doctest::Approx(1.8849556e17).epsilon(1e-6));
  CHECK(vibrational_coupling_from_wavenumber(cav.wavenumber(), cav.length) ==
        doctest::Approx(g).epsilon(1e-14));
  const CavityParams doubled(0.02, cav.omega0, cav.gamma0, 0.0, 0.0);
  CHECK(vibrational_coupling(doubled) == doctest::Approx(0.5 * g));
}

TEST_CASE("zero point length and momentum") {
  const auto mech = MechanicalParams::vibrational(1e-12, 2.0 * pi * 1e5, 10.0, 0.0);
  const auto zp = zero_point(mech);
  CHECK(zp.q0 == doctest::Approx(9.16e-15).epsilon(1e-3));
  CHECK(zp.q0 * zp.p0 == doctest::Approx(0.5 * hbar).epsilon(1e-14));
  const auto heavier = MechanicalParams::vibrational(4e-12, 2.0 * pi * 1e5, 10.0, 0.0);
  CHECK(zero_point(heavier).q0 == doctest::Approx(0.5 * zp.q0).epsilon(1e-14));

  const auto rotor = MechanicalParams::rotational_ring(1e-15, 1e-6, 10.0, 0.0, 0.0);
  CHECK_THROWS_AS(zero_point(rotor), std::invalid_argument); // free rotor
}

TEST_CASE("single photon coupling g' = g q0") {
  const auto mech = MechanicalParams::vibrational(1e-12, 2.0 * pi * 1e5, 10.0, 0.0);
  const double g = 1.8849556e17;
  const double gp = single_photon_coupling(g, mech);
  CHECK(gp == doctest::Approx(1.73e3).epsilon(1e-2));
  CHECK(single_photon_coupling(0.0, mech) == 0.0);
  CHECK(single_photon_coupling(2.0 * g, mech) == doctest::Approx(2.0 * gp).epsilon(1e-14));
}

TEST_CASE("optotorsional coupling c l / L") {
  CHECK(torsional_coupling(2, 0.01) == doctest::Approx(2.0 * speed_of_light / 0.01));
  CHECK(torsional_coupling(2, 0.01) == doctest::Approx(6e10).epsilon(2e-3));
  CHECK(torsional_coupling(0, 0.01) == 0.0);
  // l = 300 stays finite and follows the formula (large-OAM experiments)
  CHECK(torsional_coupling(300, 0.01) == doctest::Approx(300.0 * speed_of_light / 0.01));
  CHECK(torsional_coupling(300, 0.01) == doctest::Approx(9e12).epsilon(2e-3));
}

TEST_CASE("disk and ring moments of inertia") {
  const auto disk = MechanicalParams::torsional_disk(2e-9, 1e-4, 1e3, 1.0, 0.0);
  CHECK(disk.inertia == doctest::Approx(0.5 * 2e-9 * 1e-8));
  const auto ring = MechanicalParams::rotational_ring(1e-15, 2e-6, 1.0, 0.0, 0.0);
  CHECK(ring.inertia == doctest::Approx(1e-15 * 4e-12));
  CHECK_THROWS_AS(MechanicalParams::vibrational(-1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("rotational coupling closed form and proportionalities") {
  const double w0 = 5e-6, L = 5e-5;
  const DielectricBody vacuum(1.0, 1e-20);
  CHECK(rotational_coupling(2, vacuum, w0, w0, L, 1e15) == 0.0);
  CHECK_THROWS_AS(rotational_coupling(0, vacuum, w0, w0, L, 1e15), std::invalid_argument);

  // dimensionless lattice factor at l = 2, R = w0: 2^4/2! e^{-2} = 8 e^{-2}
  CHECK(rotational_coupling_factor(2, w0, w0) ==
        doctest::Approx(8.0 * std::exp(-2.0)).epsilon(1e-12));
  // l = 1, R = w0/sqrt(2): 2^3/1! (1/2) e^{-1} = 4 e^{-1}
  CHECK(rotational_coupling_factor(1, w0 / std::sqrt(2.0), w0) ==
        doctest::Approx(4.0 * std::exp(-1.0)).epsilon(1e-12));

  const DielectricBody body(2.0, 1e-20);
  const DielectricBody body2(3.0, 1e-20);
  const DielectricBody bigger(2.0, 3e-20);
  const double base = rotational_coupling(2, body, w0, w0, L, 1e15);
  CHECK(rotational_coupling(2, body2, w0, w0, L, 1e15) == doctest::Approx(2.0 * base));
  CHECK(rotational_coupling(2, bigger, w0, w0, L, 1e15) == doctest::Approx(3.0 * base));
  CHECK(rotational_coupling(2, body, w0, w0, 2.0 * L, 1e15) == doctest::Approx(0.5 * base));
  CHECK(rotational_coupling(2, body, w0, w0, L, 2e15) == doctest::Approx(2.0 * base));
}

TEST_CASE("frequency shift quadrature agrees with the closed form") {
  const double w0 = 5e-6, lambda_p = 2.0 * w0;
  const double L = 8.0 * lambda_p; // integer number of half-wavelengths
  const beams::RingLattice lat = beams::RingLattice::from_trap(1, 2, w0, lambda_p);

  // vacuum body shifts nothing
  CHECK(bethe_schwinger_shift(DielectricBody(1.0, 1e-21), lat, L, 0.0) == 0.0);

  const double side = w0 / 30.0;
  const DielectricBody body(2.0, side * side * side);
  // at a lattice node cos^2(l phi) = 0 the local intensity vanishes
  const double at_node = bethe_schwinger_shift(body, lat, L, pi / 2.0);
  const double at_antinode = bethe_schwinger_shift(body, lat, L, 0.0);
  CHECK(std::abs(at_node) < 1e-4 * std::abs(at_antinode));
  CHECK(at_antinode < 0.0); // dielectric pulls the resonance down

  const double omega_c = 2.0 * pi * speed_of_light / lambda_p;
  const double g_closed = rotational_coupling(lat.l, body, lat.R, w0, L, omega_c);
  CHECK(-omega_c * at_antinode == doctest::Approx(g_closed).epsilon(0.01));
}

TEST_CASE("overlap coupling equals the analytic phi-derivative of the shift") {
  const double w0 = 5e-6, lambda_p = 2.0 * w0;
  const double L = 8.0 * lambda_p;
  const beams::RingLattice lat = beams::RingLattice::from_trap(2, 2, w0, lambda_p);
  const DielectricBody body(2.0, std::pow(w0 / 25.0, 3));
  const double omega_c = 2.0 * pi * speed_of_light / lambda_p;
  const double inertia = 1e-20, omega_phi = 1e3;
  const double phi0 = pi / (4.0 * lat.l); // where sin(2 l phi) = 1

  const double g_l0 = torsional_overlap_coupling(body, lat, L, omega_c, inertia, omega_phi, phi0);
  // oracle: omega_c(phi) = omega_c (1 - A cos^2(l phi)) with A from the closed
  // form, so |d omega_c/d phi| = omega_c A l sin(2 l phi0)
  const double A = rotational_coupling(lat.l, body, lat.R, w0, L, omega_c) / omega_c;
  const double expected = std::sqrt(hbar / (inertia * omega_phi)) * omega_c * A * lat.l;
  CHECK(g_l0 == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("azimuthal overlap selection rule") {
  using std::abs;
  CHECK(saw_azimuthal_overlap(1, 2).real() == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(abs(saw_azimuthal_overlap(1, 2).imag()) < 1e-12);
  CHECK(abs(saw_azimuthal_overlap(1, 1)) < 1e-12);
  CHECK(saw_azimuthal_overlap(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(saw_azimuthal_overlap(3, 0).real() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(saw_azimuthal_overlap(4, -8).real() == doctest::Approx(0.25).epsilon(1e-10));

  // brute-force Simpson oracle on a grid incommensurate with the FFT-free path
  for (int l : {1, 3, 7}) {
    for (int lp : {0, 1, 2 * l, -2 * l, 2 * l + 1}) {
      const auto mine = saw_azimuthal_overlap(l, lp);
      const auto brute = oracles::simpson_complex(
          [&](double phi) {
            const double c = std::cos(l * phi);
            return c * c * std::polar(1.0, lp * phi);
          },
          0.0, 2.0 * pi, 4096);
      CHECK(std::abs(mine - brute / (2.0 * pi)) < 1e-10);
    }
  }
}

TEST_CASE("radial acoustic overlap is a normalized inner product") {
  auto gaussian = [](double r) { return std::exp(-r * r); };
  CHECK(saw_radial_overlap(gaussian, gaussian, 8.0) == doctest::Approx(1.0).epsilon(1e-12));
  auto ring = [](double r) { return r * std::exp(-r * r); };
  const double overlap = saw_radial_overlap(gaussian, ring, 8.0);
  CHECK(overlap > 0.0);
  CHECK(overlap < 1.0);
  // Cauchy-Schwarz equality only for proportional profiles
  auto scaled = [](double r) { return 3.7 * std::exp(-r * r); };
  CHECK(saw_radial_overlap(gaussian, scaled, 8.0) == doctest::Approx(1.0).epsilon(1e-12));
}
