// Stochastic (Langevin) dynamics of the three optomechanical systems:
// vibrating Fabry-Perot mirror, torsional spiral resonator, and a
// nanoparticle rotating through an angular probe lattice. All field dynamics
// run in the drive frame; mechanical noise follows the fluctuation-
// dissipation correlators <xi xi'> = 2 m gamma_m kB T delta (t-t')
// (rotational: 2 I gamma_m kB T delta).
#pragma once

#include "oamsim/coupling.hpp"

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oamsim::dynamics {

using cplx = std::complex<double>;

struct VibrationalState {
  double q = 0.0;      // m
  double p = 0.0;      // kg m/s
  cplx alpha = 0.0;    // |alpha|^2 = intracavity photon number
};

struct TorsionalState {
  double phi = 0.0;    // rad
  double Lz = 0.0;     // kg m^2/s
  cplx alpha = 0.0;
};

struct RotationalState {
  double phi = 0.0;    // rad, unwrapped
  double Lz = 0.0;     // kg m^2/s
  cplx alpha = 0.0;
};

/// U_l = e^{2 i l phi}; unit modulus by construction.
cplx rotor_phase(const RotationalState& s, int l);

/// Determinism contract: same seed + same parameters give bitwise-identical
/// trajectories. Optical input noise is off by default (classical laser noise
/// neglected); thermal Langevin forces are on by default.
struct NoiseConfig {
  std::uint64_t seed = 0;
  bool include_thermal = true;
  bool include_optical_input = false;
};

/// Gaussian draw stream for one trajectory.
class NoiseStream {
public:
  explicit NoiseStream(std::uint64_t seed) : rng_(seed) {}
  double gaussian() { return normal_(rng_); }
  /// Stream seed for trajectory `index` of an ensemble rooted at `seed`
  /// (splitmix64 of the pair), so ensembles are order-independent.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

struct VibrationalSystem {
  coupling::CavityParams cavity;
  coupling::MechanicalParams mech;
  double g = 0.0; // rad/(s m), omega0/L unless overridden

  static VibrationalSystem make(const coupling::CavityParams&, const coupling::MechanicalParams&);
};

struct TorsionalSystem {
  coupling::CavityParams cavity;
  coupling::MechanicalParams mech;
  double g_phi = 0.0; // 1/s, c l / L unless overridden

  static TorsionalSystem make(const coupling::CavityParams&, const coupling::MechanicalParams&, int l);
};

struct RotationalSystem {
  coupling::CavityParams cavity; // delta0 = omega_c - omega_d (drive frame)
  coupling::MechanicalParams mech;
  double g_l = 0.0; // rad/s, lattice frequency-pull amplitude
  int l = 1;        // probe OAM

  /// Effective detuning of the drive from the lattice-averaged resonance:
  /// Delta' = (omega_d - omega_c) + g_l/2 = g_l/2 - delta0.
  double delta_prime() const;
};

/// One stochastic Heun (predictor-corrector) step; additive noises, so the
/// Ito and Stratonovich readings coincide. dt must satisfy the stability
/// guard dt * max(gamma0, omega_m, |delta0|) < 0.1, checked by the run_*
/// drivers.
VibrationalState step_vibrational(const VibrationalState&, const VibrationalSystem&, double dt,
                                  NoiseStream&, const NoiseConfig&);
TorsionalState step_torsional(const TorsionalState&, const TorsionalSystem&, double dt,
                              NoiseStream&, const NoiseConfig&);
RotationalState step_rotational(const RotationalState&, const RotationalSystem&, double dt,
                                NoiseStream&, const NoiseConfig&);

/// Default integration step 5e-4 / max_rate, where max_rate is the fastest
/// rate in the problem (gamma0, mechanical frequency or 2 l omega_ms,
/// |detuning| + coupling pull).
double default_timestep(double max_rate);

double vibrational_max_rate(const VibrationalSystem&);
double torsional_max_rate(const TorsionalSystem&);
double rotational_max_rate(const RotationalSystem&);

/// Strided record of one trajectory. coord/momentum are (q, p), (phi, Lz) or
/// (phi, Lz) depending on the system.
struct Trajectory {
  double dt_sample = 0.0;
  std::vector<double> t;
  std::vector<double> coord;
  std::vector<double> momentum;
  std::vector<cplx> alpha;

  void reserve(size_t n);
  void push(double time, double c, double m, cplx a);
};

/// Integrate for n_steps, recording every `stride` steps (the initial state
/// included). Throws std::runtime_error with the step index if the state
/// leaves the finite range (divergence), std::invalid_argument if dt violates
/// the stability guard.
Trajectory run_vibrational(const VibrationalSystem&, VibrationalState init, double dt,
                           long n_steps, long stride, const NoiseConfig&);
Trajectory run_torsional(const TorsionalSystem&, TorsionalState init, double dt, long n_steps,
                         long stride, const NoiseConfig&);
Trajectory run_rotational(const RotationalSystem&, RotationalState init, double dt, long n_steps,
                          long stride, const NoiseConfig&);

/// Conserved energies of the undamped, undriven, noiseless systems.
double vibrational_energy(const VibrationalState&, const VibrationalSystem&);
double torsional_energy(const TorsionalState&, const TorsionalSystem&);
double rotational_energy(const RotationalState&, const RotationalSystem&);

/// Bad-cavity limit: alpha follows q instantly,
/// alpha = F / (gamma0/2 + i (delta0 - g q)).
cplx adiabatic_field(double q, const coupling::CavityParams& cav, double g);

struct RotationalSteadyState {
  double omega_ms = 0.0; // tau / (I gamma_m); +inf when gamma_m = 0
  cplx alpha_s = 0.0;    // sqrt(gamma0) a_in / (gamma0/2 - i Delta')
  cplx u_avg = 0.0;      // long-time average of U_l (0 for a rotating state)
  bool bounded = true;
};

RotationalSteadyState rotational_steady_state(const coupling::CavityParams& cav,
                                              const coupling::MechanicalParams& mech, double g_l,
                                              int l);

} // namespace oamsim::dynamics
