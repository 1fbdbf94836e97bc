// Optomechanical coupling constants for the vibrational, torsional,
// rotational and surface-acoustic-wave systems, from closed forms and from
// numerical mode-overlap (frequency-shift) integrals.
#pragma once

#include "oamsim/beams.hpp"

#include <complex>
#include <functional>

namespace oamsim::coupling {

/// Optical quasi-mode of a driven Fabry-Perot cavity. delta0 = omega0 -
/// omega_laser (the drive-frame detuning), drive F = sqrt(P gamma0 / hbar
/// omega0) in 1/s.
struct CavityParams {
  double length = 0.0; // m
  double omega0 = 0.0; // rad/s
  double gamma0 = 0.0; // rad/s, field energy decay rate
  double delta0 = 0.0; // rad/s
  double drive = 0.0;  // 1/s

  CavityParams() = default;
  CavityParams(double length_, double omega0_, double gamma0_, double delta0_, double drive_);

  /// Cavity resonant at the n-th longitudinal mode, omega0 = n pi c / L.
  static CavityParams resonant(int n, double length, double gamma0, double delta0, double drive);
  static double drive_from_power(double power, double gamma0, double omega0);

  double wavenumber() const; // omega0 / c
  int mode_index() const;    // nearest integer omega0 L / (pi c)
  double e0_per_photon(double mode_volume) const;
  double b0_per_photon(double mode_volume) const;
};

enum class MechKind { vibrational, torsional, rotational };

/// Mechanical oscillator or rotor. Linear systems use mass; angular systems
/// use the moment of inertia. omega_m = 0 marks a free rotor.
struct MechanicalParams {
  MechKind kind = MechKind::vibrational;
  double mass = 0.0;        // kg
  double inertia = 0.0;     // kg m^2
  double omega_m = 0.0;     // rad/s
  double gamma_m = 0.0;     // 1/s
  double temperature = 0.0; // K
  double torque = 0.0;      // N m, rotational only

  static MechanicalParams vibrational(double mass, double omega_m, double gamma_m, double temperature);
  static MechanicalParams torsional(double inertia, double omega_phi, double gamma_phi, double temperature);
  /// Disk of mass M and radius R about its axis: I = M R^2 / 2.
  static MechanicalParams torsional_disk(double M, double R, double omega_phi, double gamma_phi,
                                         double temperature);
  /// Point particle of mass m on a ring of radius R: I = m R^2.
  static MechanicalParams rotational_ring(double m, double R, double gamma_m, double temperature,
                                          double torque);

  /// Mass for vibrational systems, moment of inertia otherwise.
  double generalized_inertia() const;
  void validate() const;
};

/// Small dielectric probe body for the frequency-shift integrals.
struct DielectricBody {
  double epsilon_r = 1.0; // relative dielectric constant, >= 1
  double volume = 0.0;    // m^3

  DielectricBody() = default;
  DielectricBody(double epsilon_r_, double volume_);
};

/// g = omega0 / L, the radiation-pressure frequency pull per unit length.
double vibrational_coupling(const CavityParams& cav);
/// Equivalent c k / L form.
double vibrational_coupling_from_wavenumber(double k, double length);

struct ZeroPoint {
  double q0; // m (or rad for angular systems)
  double p0; // kg m/s (or kg m^2/s)
};

/// q0 = sqrt(hbar / 2 m omega_m), p0 = sqrt(m hbar omega_m / 2).
/// Throws for a free rotor (omega_m = 0): no zero-point length exists.
ZeroPoint zero_point(const MechanicalParams& mech);

/// g' = g q0 (rad/s per photon).
double single_photon_coupling(double g, const MechanicalParams& mech);

/// Optotorsional coupling g_phi = c l / L (torque hbar g_phi per photon).
double torsional_coupling(int l, double length);

/// Dimensionless lattice factor 2^{l+2}/l! (R/w0)^{2l} e^{-2R^2/w0^2},
/// i.e. 4 x lattice peak intensity / its transverse-plane average.
double rotational_coupling_factor(int l, double R, double w0);

/// Optorotational coupling g(l) =
/// omega_c (eps_r - 1) [2^{l+2}/l!] (R/w0)^{2l} e^{-2R^2/w0^2} V/(pi w0^2 L);
/// the frequency-shift amplitude in omega_c(phi) = omega_c - g(l) cos^2(l phi).
double rotational_coupling(int l, const DielectricBody& body, double R, double w0, double length,
                           double omega_c);

/// Nearest lattice axial antinode to the cavity midplane.
double lattice_antinode_z(const beams::RingLattice& lat, double cavity_length);

/// Fractional cavity shift omega_c(phi)/omega_c - 1 ~=
/// -Int_V (eps-1)|u|^2 / (2 Int_V' |u|^2) for a cube of volume V centered on
/// the ring at angle phi (axially at the antinode nearest mid-cavity), by
/// adaptive tensor quadrature over the body; the mode-volume denominator is
/// computed once per lattice and cached. Throws on non-convergence.
double bethe_schwinger_shift(const DielectricBody& body, const beams::RingLattice& lat,
                             double cavity_length, double phi);

/// Mode-volume integral Int |u|^2 dV of the lattice over the cavity.
double lattice_mode_volume(const beams::RingLattice& lat, double cavity_length);

/// Torsional overlap coupling g_{l,0} = sqrt(hbar/(I omega_phi))
/// |d omega_c/d phi| at phi0, from the frequency-shift quadrature.
double torsional_overlap_coupling(const DielectricBody& body, const beams::RingLattice& lat,
                                  double cavity_length, double omega_c, double inertia,
                                  double omega_phi, double phi0);

/// (1/2pi) Int_0^{2pi} cos^2(l phi) e^{i l' phi} dphi. Nonzero only for
/// l' in {0, +2l, -2l}.
std::complex<double> saw_azimuthal_overlap(int l, int l_prime);

/// Normalized radial overlap of an optical intensity profile with an acoustic
/// mode profile: Int f g rho drho / sqrt(Int f^2 rho drho Int g^2 rho drho).
double saw_radial_overlap(const std::function<double(double)>& optical,
                          const std::function<double(double)>& acoustic, double r_max,
                          int n_points = 512);

} // namespace oamsim::coupling
