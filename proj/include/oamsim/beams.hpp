// Laguerre-Gaussian mode functions, sampled transverse fields, spiral phase
// plates, orbital-angular-momentum diagnostics and the ring probe lattice.
#pragma once

#include <complex>
#include <vector>

namespace oamsim::beams {

using cplx = std::complex<double>;

/// One Laguerre-Gaussian mode: topological charge l (any sign), radial index
/// p >= 0, waist w0 at focus and optical wavelength, both in meters.
struct LGModeSpec {
  int l = 0;
  int p = 0;
  double w0 = 0.0;
  double lambda = 0.0;

  LGModeSpec() = default;
  LGModeSpec(int l_, int p_, double w0_, double lambda_);

  double rayleigh_range() const; // pi w0^2 / lambda
  double waist_at(double z) const;
  double wavenumber() const; // 2 pi / lambda
};

/// u_lp(rho, phi, z): transverse profile normalized to unit 2-D norm at every
/// z, with azimuthal, curvature and Gouy phases. Vanishes on axis for l != 0.
cplx lg_amplitude(const LGModeSpec& mode, double rho, double phi, double z);

/// Signed radial part of lg_amplitude (everything except the phase factors).
double lg_radial_amplitude(const LGModeSpec& mode, double rho, double z);

/// Square n x n grid of complex samples over [-extent, extent]^2,
/// cell-centered so no sample sits exactly on the vortex axis.
struct FieldGrid {
  int n = 0;
  double extent = 0.0;
  std::vector<cplx> values; // row-major, values[iy * n + ix]

  FieldGrid() = default;
  FieldGrid(int n_, double extent_);

  double spacing() const { return 2.0 * extent / n; }
  double coord(int i) const { return -extent + (i + 0.5) * spacing(); }
  cplx& at(int iy, int ix) { return values[static_cast<size_t>(iy) * n + ix]; }
  const cplx& at(int iy, int ix) const { return values[static_cast<size_t>(iy) * n + ix]; }

  /// Bilinear interpolation; clamps to the border cells.
  cplx interpolate(double x, double y) const;

  /// Sum |v|^2 h^2 over all samples.
  double total_intensity() const;
};

/// Sample lg_amplitude on a grid. extent <= 0 selects the default 4 w(z).
FieldGrid render_mode(const LGModeSpec& mode, double z, double extent, int n);

/// Pointwise sum of two fields on identical grids (equal-weight superposition
/// is (a + b)/sqrt(2); pass prefactors via scale).
FieldGrid superpose(const FieldGrid& a, const FieldGrid& b, cplx wa, cplx wb);

/// Spiral phase plate of step height t: multiplies each sample by
/// e^{i (t/lambda) phi} with phi measured about the grid center.
FieldGrid phase_plate_transform(const FieldGrid& field, double step_height, double lambda);

/// <-i d/dphi> in units of hbar per photon, by azimuthal harmonic
/// decomposition: sum_m m P_m with P_m the power fraction in e^{i m phi}.
/// Throws std::invalid_argument on a zero-intensity field.
double oam_expectation(const FieldGrid& field);

/// Power fractions P_m for m in [-max_m, max_m] (index m + max_m).
std::vector<double> azimuthal_power_fractions(const FieldGrid& field, int max_m);

/// Number of azimuthal intensity lobes on the circle of given radius:
/// contiguous arcs with intensity above threshold_frac * ring maximum.
int count_azimuthal_maxima(const FieldGrid& field, double radius, double threshold_frac = 0.5);

/// Probe lattice formed by degenerate LG_{+l} + LG_{-l} modes around the
/// trapping ring of radius R. k_p is the probe wavenumber.
struct RingLattice {
  int l = 0;      // probe OAM, >= 1
  double R = 0.0; // ring radius
  double w0 = 0.0;
  double k_p = 0.0;

  RingLattice() = default;
  RingLattice(int l_, double R_, double w0_, double k_p_);

  /// Ring radius R = w0 sqrt(|l_trap|/2) of the trap mode with OAM l_trap.
  static RingLattice from_trap(int l_probe, int l_trap, double w0, double probe_wavelength);
};

/// Dimensionless lattice intensity on the ring:
/// (1/|l|!) (sqrt2 R/w0)^{2|l|} e^{-2R^2/w0^2} cos^2(k_p z) cos^2(l phi).
double lattice_intensity(const RingLattice& lat, double phi, double z);

/// Same profile with the radial coordinate free (used by the mode-overlap
/// quadrature); reduces to lattice_intensity at rho = R.
double lattice_intensity_at(const RingLattice& lat, double rho, double phi, double z);

} // namespace oamsim::beams
