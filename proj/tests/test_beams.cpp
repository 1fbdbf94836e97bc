#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oamsim/beams.hpp"
#include "oamsim/constants.hpp"
#include "oracles.hpp"

#include <cmath>
#include <complex>

using namespace oamsim;
using namespace oamsim::beams;

namespace {

const double w0 = 5e-6;
const double lambda = 1.064e-6;

double mode_norm_2d(const LGModeSpec& mode, double z) {
  // Independent oracle: Simpson quadrature of |u|^2 rho, azimuthal integral
  // exact by symmetry. The ring sits near w sqrt(|l|/2), so the range has to
  // scale with the indices.
  const double w = mode.waist_at(z);
  const double reach = w * (2.0 * std::sqrt(0.5 * std::abs(mode.l) + mode.p + 1.0) + 6.0);
  const double integral = oracles::simpson(
      [&](double rho) {
        const double u = lg_radial_amplitude(mode, rho, z);
        return u * u * rho;
      },
      0.0, reach, 8000);
  return 2.0 * pi * integral;
}

} // namespace

TEST_CASE("LGModeSpec validates its invariants") {
  CHECK_THROWS_AS(LGModeSpec(2, -1, w0, lambda), std::invalid_argument);
  CHECK_THROWS_AS(LGModeSpec(2, 0, -w0, lambda), std::invalid_argument);
  CHECK_THROWS_AS(LGModeSpec(2, 0, w0, 0.0), std::invalid_argument);
  const LGModeSpec mode(2, 0, w0, lambda);
  CHECK(mode.rayleigh_range() == doctest::Approx(pi * w0 * w0 / lambda));
}

TEST_CASE("vortex node on axis and peak radius at w0 sqrt(l/2)") {
  const LGModeSpec mode(2, 0, w0, lambda);
  CHECK(std::abs(lg_amplitude(mode, 0.0, 0.3, 0.0)) == 0.0);
  const double peak = oracles::maximize(
      [&](double rho) { return std::abs(lg_amplitude(mode, rho, 0.0, 0.0)); }, 1e-9, 4.0 * w0);
  CHECK(peak == doctest::Approx(w0 * std::sqrt(2.0 / 2.0)).epsilon(1e-6));

  const LGModeSpec l3(3, 0, w0, lambda);
  const double peak3 = oracles::maximize(
      [&](double rho) { return std::abs(lg_amplitude(l3, rho, 0.0, 0.0)); }, 1e-9, 4.0 * w0);
  CHECK(peak3 == doctest::Approx(w0 * std::sqrt(1.5)).epsilon(1e-6));
}

TEST_CASE("azimuthal phase factor e^{il dphi}") {
  const LGModeSpec mode(-3, 1, w0, lambda);
  const double rho = 0.7 * w0, z = 0.4 * mode.rayleigh_range();
  const auto base = lg_amplitude(mode, rho, 0.3, z);
  for (double dphi : {0.13, 1.2, 4.0}) {
    const auto shifted = lg_amplitude(mode, rho, 0.3 + dphi, z);
    const auto expected = base * std::polar(1.0, mode.l * dphi);
    CHECK(std::abs(shifted - expected) < 1e-12 * std::abs(base));
  }
}

TEST_CASE("unit norm at the focus and downstream") {
  for (int l : {0, 1, 4, -6}) {
    for (int p : {0, 2}) {
      const LGModeSpec mode(l, p, w0, lambda);
      CHECK(mode_norm_2d(mode, 0.0) == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(mode_norm_2d(mode, 0.7 * mode.rayleigh_range()) ==
            doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("norm survives the large-l log-space path") {
  const LGModeSpec mode(120, 0, w0, lambda);
  CHECK(mode_norm_2d(mode, 0.0) == doctest::Approx(1.0).epsilon(1e-8));
  const LGModeSpec huge(300, 1, w0, lambda);
  CHECK(mode_norm_2d(huge, 0.0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("distinct radial orders are orthogonal") {
  for (auto [p1, p2] : {std::pair{0, 1}, std::pair{0, 3}, std::pair{1, 2}}) {
    const LGModeSpec a(2, p1, w0, lambda), b(2, p2, w0, lambda);
    const double overlap = 2.0 * pi *
                           oracles::simpson(
                               [&](double rho) {
                                 return lg_radial_amplitude(a, rho, 0.0) *
                                        lg_radial_amplitude(b, rho, 0.0) * rho;
                               },
                               0.0, 8.0 * w0, 4000);
    CHECK(std::abs(overlap) < 1e-8);
  }
}

TEST_CASE("phase winding around the axis is 2 pi l") {
  for (int l : {1, -2, 5}) {
    const LGModeSpec mode(l, 0, w0, lambda);
    const double r = 1e-3 * w0;
    const int n = 720;
    double winding = 0.0;
    double prev = std::arg(lg_amplitude(mode, r, 0.0, 0.0));
    for (int k = 1; k <= n; ++k) {
      const double phi = 2.0 * pi * k / n;
      double cur = std::arg(lg_amplitude(mode, r, phi, 0.0));
      double d = cur - prev;
      while (d > pi) d -= 2.0 * pi;
      while (d < -pi) d += 2.0 * pi;
      winding += d;
      prev = cur;
    }
    CHECK(std::abs(winding - 2.0 * pi * l) < 1e-9);
  }
}

TEST_CASE("render_mode geometry and validation") {
  const LGModeSpec mode(2, 0, w0, lambda);
  CHECK_THROWS_AS(FieldGrid(64, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(render_mode(mode, 0.0, -1.0, 64), std::invalid_argument);
  const FieldGrid grid = render_mode(mode, 0.0, 0.0, 128);
  CHECK(grid.extent == doctest::Approx(4.0 * w0));
  // annulus: dark center, bright ring near w0
  const double center = std::norm(grid.interpolate(0.0, 0.0));
  const double ring = std::norm(grid.interpolate(w0, 0.0));
  CHECK(center < 1e-3 * ring);
  // grid total intensity approximates the unit norm
  CHECK(grid.total_intensity() == doctest::Approx(1.0).epsilon(1e-3));

  const LGModeSpec fundamental(0, 0, w0, lambda);
  const FieldGrid g0 = render_mode(fundamental, 0.0, 0.0, 128);
  double best = 0.0;
  double at_r = 1.0;
  for (int iy = 0; iy < g0.n; ++iy)
    for (int ix = 0; ix < g0.n; ++ix)
      if (std::norm(g0.at(iy, ix)) > best) {
        best = std::norm(g0.at(iy, ix));
        at_r = std::hypot(g0.coord(ix), g0.coord(iy));
      }
  CHECK(at_r < 1.5 * g0.spacing()); // maximum at the center cell
}

TEST_CASE("counter-rotating superposition shows 2l lobes") {
  for (int l : {1, 2, 3}) {
    const LGModeSpec plus(l, 0, w0, lambda), minus(-l, 0, w0, lambda);
    const FieldGrid sum = superpose(render_mode(plus, 0.0, 0.0, 256),
                                    render_mode(minus, 0.0, 0.0, 256), 1.0 / std::sqrt(2.0),
                                    1.0 / std::sqrt(2.0));
    const double ring = w0 * std::sqrt(l / 2.0);
    CHECK(count_azimuthal_maxima(sum, ring) == 2 * l);
  }
}

TEST_CASE("phase plate: identity at t = 0, pure phase otherwise") {
  const LGModeSpec mode(0, 0, w0, lambda);
  const FieldGrid in = render_mode(mode, 0.0, 0.0, 64);
  const FieldGrid same = phase_plate_transform(in, 0.0, lambda);
  for (size_t i = 0; i < in.values.size(); ++i) CHECK(same.values[i] == in.values[i]);
  const FieldGrid turned = phase_plate_transform(in, 2.0 * lambda, lambda);
  for (size_t i = 0; i < in.values.size(); i += 97)
    CHECK(std::abs(turned.values[i]) == doctest::Approx(std::abs(in.values[i])).epsilon(1e-12));
}

TEST_CASE("oam expectation: eigenmodes, superpositions, plate charges") {
  const LGModeSpec l3(3, 0, w0, lambda);
  CHECK(oam_expectation(render_mode(l3, 0.0, 0.0, 256)) == doctest::Approx(3.0).epsilon(2e-3));

  const LGModeSpec p2(2, 0, w0, lambda), m2(-2, 0, w0, lambda);
  const FieldGrid balanced = superpose(render_mode(p2, 0.0, 0.0, 256),
                                       render_mode(m2, 0.0, 0.0, 256), 0.5, 0.5);
  CHECK(std::abs(oam_expectation(balanced)) < 1e-6);

  const LGModeSpec gauss(0, 0, w0, lambda);
  const FieldGrid in = render_mode(gauss, 0.0, 0.0, 512);
  CHECK(oam_expectation(phase_plate_transform(in, 2.0 * lambda, lambda)) ==
        doctest::Approx(2.0).epsilon(5e-4));
  // non-integer step: average charge t/lambda spread over integer harmonics
  const FieldGrid frac = phase_plate_transform(in, 1.5 * lambda, lambda);
  CHECK(oam_expectation(frac) == doctest::Approx(1.5).epsilon(1e-3));
  const auto fractions = azimuthal_power_fractions(frac, 8);
  CHECK(fractions[8 + 1] > 0.3); // nearest integers carry most of the power
  CHECK(fractions[8 + 2] > 0.3);
  CHECK(fractions[8 + 5] < 0.02);

  FieldGrid dark(32, w0);
  CHECK_THROWS_AS(oam_expectation(dark), std::invalid_argument);
}

TEST_CASE("oam expectation error shrinks monotonically under grid refinement") {
  const LGModeSpec gauss(0, 0, w0, lambda);
  double previous = 1.0;
  for (int n : {128, 256, 512}) {
    const FieldGrid in = render_mode(gauss, 0.0, 0.0, n);
    const double err =
        std::abs(oam_expectation(phase_plate_transform(in, 1.5 * lambda, lambda)) - 1.5);
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("ring lattice construction and intensity") {
  CHECK_THROWS_AS(RingLattice(0, w0, w0, 1.0), std::invalid_argument);
  const RingLattice lat = RingLattice::from_trap(2, 2, w0, lambda);
  CHECK(lat.R == doctest::Approx(w0)); // R = w0 sqrt(|l_t|/2), l_t = 2

  // node of cos^2(2 phi) at phi = pi/4
  CHECK(lattice_intensity(lat, pi / 4.0, 0.0) == doctest::Approx(0.0).epsilon(1e-20));

  // l = 1 trap: R = w0/sqrt(2); radial prefactor e^{-1} (1/1!) (sqrt2 R/w0)^2 = e^{-1}
  const RingLattice l1 = RingLattice::from_trap(1, 1, w0, lambda);
  CHECK(l1.R == doctest::Approx(w0 / std::sqrt(2.0)));
  CHECK(lattice_intensity(l1, 0.0, 0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  // 2l maxima and 2l zeros per azimuthal period, at the cos^2 extrema
  for (int l : {1, 2, 3, 5}) {
    const RingLattice lat_l(l, w0, w0, 2.0 * pi / lambda);
    int maxima = 0, zeros = 0;
    const int n = 40000;
    std::vector<double> vals(n);
    for (int j = 0; j < n; ++j) vals[j] = lattice_intensity(lat_l, 2.0 * pi * j / n, 0.0);
    for (int j = 0; j < n; ++j) {
      const double prev = vals[(j + n - 1) % n], next = vals[(j + 1) % n];
      if (vals[j] > prev && vals[j] > next) ++maxima;
      if (vals[j] < prev && vals[j] < next) ++zeros;
    }
    CHECK(maxima == 2 * l);
    CHECK(zeros == 2 * l);
    // extrema line up with cos^2(l phi): maxima at phi = k pi / l
    CHECK(lattice_intensity(lat_l, pi / l, 0.0) ==
          doctest::Approx(lattice_intensity(lat_l, 0.0, 0.0)).epsilon(1e-12));
  }
}
