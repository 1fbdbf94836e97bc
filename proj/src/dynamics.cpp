#include "oamsim/dynamics.hpp"
#include "oamsim/constants.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace oamsim::dynamics {

namespace {

void check_timestep(double dt, double gamma0, double omega_m, double delta0) {
  if (!(dt > 0.0)) throw std::invalid_argument("timestep must be > 0");
  const double fastest = std::max(gamma0, std::max(omega_m, std::abs(delta0)));
  if (dt * fastest >= 0.1)
    throw std::invalid_argument("timestep violates stability guard: dt * max(gamma0, omega_m, "
                                "|delta0|) = " +
                                std::to_string(dt * fastest) + " >= 0.1");
}

struct Increments {
  double dc = 0.0;  // coordinate
  double dm = 0.0;  // momentum
  cplx da = 0.0;
};

struct NoiseDraw {
  double momentum_kick = 0.0;
  cplx field_kick = 0.0;
};

NoiseDraw draw_noise(NoiseStream& rng, const NoiseConfig& cfg, double dt, double inertia,
                     double gamma_m, double temperature, double gamma0) {
  NoiseDraw d;
  if (cfg.include_thermal) {
    const double amp = std::sqrt(2.0 * inertia * gamma_m * k_boltzmann * temperature);
    d.momentum_kick = amp * std::sqrt(dt) * rng.gaussian();
  }
  if (cfg.include_optical_input) {
    const double nr = rng.gaussian();
    const double ni = rng.gaussian();
    d.field_kick = std::sqrt(gamma0) * std::sqrt(0.5 * dt) * cplx(nr, ni);
  }
  return d;
}

} // namespace

cplx rotor_phase(const RotationalState& s, int l) { return std::polar(1.0, 2.0 * l * s.phi); }

std::uint64_t NoiseStream::derive(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

VibrationalSystem VibrationalSystem::make(const coupling::CavityParams& cav,
                                          const coupling::MechanicalParams& mech) {
  return {cav, mech, coupling::vibrational_coupling(cav)};
}

TorsionalSystem TorsionalSystem::make(const coupling::CavityParams& cav,
                                      const coupling::MechanicalParams& mech, int l) {
  return {cav, mech, coupling::torsional_coupling(l, cav.length)};
}

double RotationalSystem::delta_prime() const { return 0.5 * g_l - cavity.delta0; }

namespace {

Increments vibrational_rhs(const VibrationalState& s, const VibrationalSystem& sys) {
  const auto& c = sys.cavity;
  const auto& m = sys.mech;
  Increments d;
  const double photon = std::norm(s.alpha);
  d.dc = s.p / m.mass;
  d.dm = -m.mass * m.omega_m * m.omega_m * s.q - m.gamma_m * s.p + hbar * sys.g * photon;
  d.da = -(cplx(0.0, c.delta0) + 0.5 * c.gamma0) * s.alpha +
         cplx(0.0, sys.g * s.q) * s.alpha + c.drive;
  return d;
}

Increments torsional_rhs(const TorsionalState& s, const TorsionalSystem& sys) {
  const auto& c = sys.cavity;
  const auto& m = sys.mech;
  Increments d;
  const double photon = std::norm(s.alpha);
  d.dc = s.Lz / m.inertia;
  d.dm = -m.inertia * m.omega_m * m.omega_m * s.phi - m.gamma_m * s.Lz + hbar * sys.g_phi * photon;
  d.da = -(cplx(0.0, c.delta0) + 0.5 * c.gamma0) * s.alpha +
         cplx(0.0, sys.g_phi * s.phi) * s.alpha + c.drive;
  return d;
}

Increments rotational_rhs(const RotationalState& s, const RotationalSystem& sys) {
  const auto& c = sys.cavity;
  const auto& m = sys.mech;
  Increments d;
  const double photon = std::norm(s.alpha);
  const double two_l_phi = 2.0 * sys.l * s.phi;
  d.dc = s.Lz / m.inertia;
  // Lattice torque -hbar g l sin(2 l phi) |a|^2, the phi-gradient of the
  // frequency pull omega_c(phi) = omega_c - g cos^2(l phi).
  d.dm = -m.gamma_m * s.Lz - hbar * sys.g_l * sys.l * std::sin(two_l_phi) * photon + m.torque;
  const double detuning_eff = sys.delta_prime() + 0.5 * sys.g_l * std::cos(two_l_phi);
  d.da = (cplx(0.0, detuning_eff) - 0.5 * c.gamma0) * s.alpha + c.drive;
  return d;
}

// Generic Heun predictor-corrector with the additive noise added once.
template <typename State, typename System, typename Rhs>
State heun(const State& s, const System& sys, double dt, Rhs rhs, const NoiseDraw& noise,
           double State::*coord, double State::*momentum) {
  const Increments k1 = rhs(s, sys);
  State pred = s;
  pred.*coord += k1.dc * dt;
  pred.*momentum += k1.dm * dt + noise.momentum_kick;
  pred.alpha += k1.da * dt + noise.field_kick;
  const Increments k2 = rhs(pred, sys);
  State out = s;
  out.*coord += 0.5 * (k1.dc + k2.dc) * dt;
  out.*momentum += 0.5 * (k1.dm + k2.dm) * dt + noise.momentum_kick;
  out.alpha += 0.5 * (k1.da + k2.da) * dt + noise.field_kick;
  return out;
}

} // namespace

VibrationalState step_vibrational(const VibrationalState& s, const VibrationalSystem& sys,
                                  double dt, NoiseStream& rng, const NoiseConfig& cfg) {
  const NoiseDraw noise = draw_noise(rng, cfg, dt, sys.mech.mass, sys.mech.gamma_m,
                                     sys.mech.temperature, sys.cavity.gamma0);
  return heun(s, sys, dt, vibrational_rhs, noise, &VibrationalState::q, &VibrationalState::p);
}

TorsionalState step_torsional(const TorsionalState& s, const TorsionalSystem& sys, double dt,
                              NoiseStream& rng, const NoiseConfig& cfg) {
  const NoiseDraw noise = draw_noise(rng, cfg, dt, sys.mech.inertia, sys.mech.gamma_m,
                                     sys.mech.temperature, sys.cavity.gamma0);
  return heun(s, sys, dt, torsional_rhs, noise, &TorsionalState::phi, &TorsionalState::Lz);
}

RotationalState step_rotational(const RotationalState& s, const RotationalSystem& sys, double dt,
                                NoiseStream& rng, const NoiseConfig& cfg) {
  const NoiseDraw noise = draw_noise(rng, cfg, dt, sys.mech.inertia, sys.mech.gamma_m,
                                     sys.mech.temperature, sys.cavity.gamma0);
  return heun(s, sys, dt, rotational_rhs, noise, &RotationalState::phi, &RotationalState::Lz);
}

double default_timestep(double max_rate) {
  if (!(max_rate > 0.0)) throw std::invalid_argument("default_timestep: max_rate must be > 0");
  return 5e-4 / max_rate;
}

double vibrational_max_rate(const VibrationalSystem& sys) {
  return std::max({sys.cavity.gamma0, sys.mech.omega_m, std::abs(sys.cavity.delta0)});
}

double torsional_max_rate(const TorsionalSystem& sys) {
  return std::max({sys.cavity.gamma0, sys.mech.omega_m, std::abs(sys.cavity.delta0)});
}

double rotational_max_rate(const RotationalSystem& sys) {
  const RotationalSteadyState ss = rotational_steady_state(sys.cavity, sys.mech, sys.g_l, sys.l);
  const double rotation = sys.mech.gamma_m > 0.0 ? 2.0 * sys.l * std::abs(ss.omega_ms) : 0.0;
  const double photon = std::norm(ss.alpha_s);
  // Libration rate in a lattice well bounds the trapped-regime stiffness.
  const double libration = sys.l * std::sqrt(2.0 * hbar * sys.g_l * photon / sys.mech.inertia);
  const double field = std::abs(sys.delta_prime()) + sys.g_l;
  return std::max({sys.cavity.gamma0, rotation, libration, field, sys.mech.gamma_m});
}

void Trajectory::reserve(size_t n) {
  t.reserve(n);
  coord.reserve(n);
  momentum.reserve(n);
  alpha.reserve(n);
}

void Trajectory::push(double time, double c, double m, cplx a) {
  t.push_back(time);
  coord.push_back(c);
  momentum.push_back(m);
  alpha.push_back(a);
}

namespace {

template <typename State, typename System, typename Stepper>
Trajectory run_generic(const System& sys, State state, double dt, long n_steps, long stride,
                       const NoiseConfig& cfg, Stepper step, double State::*coord,
                       double State::*momentum) {
  check_timestep(dt, sys.cavity.gamma0, sys.mech.omega_m, sys.cavity.delta0);
  if (stride < 1) throw std::invalid_argument("run: stride must be >= 1");
  NoiseStream rng(cfg.seed);
  Trajectory traj;
  traj.dt_sample = dt * stride;
  traj.reserve(static_cast<size_t>(n_steps / stride) + 2);
  traj.push(0.0, state.*coord, state.*momentum, state.alpha);
  for (long k = 1; k <= n_steps; ++k) {
    state = step(state, sys, dt, rng, cfg);
    if (!std::isfinite(state.*coord) || !std::isfinite(state.*momentum) ||
        !std::isfinite(state.alpha.real()) || !std::isfinite(state.alpha.imag()))
      throw std::runtime_error("simulation diverged (non-finite state) at step " +
                               std::to_string(k) + ", t = " + std::to_string(k * dt) + " s");
    if (k % stride == 0) traj.push(k * dt, state.*coord, state.*momentum, state.alpha);
  }
  return traj;
}

} // namespace

Trajectory run_vibrational(const VibrationalSystem& sys, VibrationalState init, double dt,
                           long n_steps, long stride, const NoiseConfig& cfg) {
  return run_generic(sys, init, dt, n_steps, stride, cfg, step_vibrational, &VibrationalState::q,
                     &VibrationalState::p);
}

Trajectory run_torsional(const TorsionalSystem& sys, TorsionalState init, double dt, long n_steps,
                         long stride, const NoiseConfig& cfg) {
  return run_generic(sys, init, dt, n_steps, stride, cfg, step_torsional, &TorsionalState::phi,
                     &TorsionalState::Lz);
}

Trajectory run_rotational(const RotationalSystem& sys, RotationalState init, double dt,
                          long n_steps, long stride, const NoiseConfig& cfg) {
  return run_generic(sys, init, dt, n_steps, stride, cfg, step_rotational, &RotationalState::phi,
                     &RotationalState::Lz);
}

double vibrational_energy(const VibrationalState& s, const VibrationalSystem& sys) {
  const auto& m = sys.mech;
  const double photon = std::norm(s.alpha);
  return 0.5 * s.p * s.p / m.mass + 0.5 * m.mass * m.omega_m * m.omega_m * s.q * s.q +
         hbar * sys.cavity.delta0 * photon - hbar * sys.g * s.q * photon;
}

double torsional_energy(const TorsionalState& s, const TorsionalSystem& sys) {
  const auto& m = sys.mech;
  const double photon = std::norm(s.alpha);
  return 0.5 * s.Lz * s.Lz / m.inertia + 0.5 * m.inertia * m.omega_m * m.omega_m * s.phi * s.phi +
         hbar * sys.cavity.delta0 * photon - hbar * sys.g_phi * s.phi * photon;
}

double rotational_energy(const RotationalState& s, const RotationalSystem& sys) {
  const auto& m = sys.mech;
  const double photon = std::norm(s.alpha);
  const double lattice = sys.delta_prime() + 0.5 * sys.g_l * std::cos(2.0 * sys.l * s.phi);
  return 0.5 * s.Lz * s.Lz / m.inertia - hbar * lattice * photon - m.torque * s.phi;
}

cplx adiabatic_field(double q, const coupling::CavityParams& cav, double g) {
  return cav.drive / cplx(0.5 * cav.gamma0, cav.delta0 - g * q);
}

RotationalSteadyState rotational_steady_state(const coupling::CavityParams& cav,
                                              const coupling::MechanicalParams& mech, double g_l,
                                              int l) {
  (void)l;
  RotationalSteadyState ss;
  const double delta_prime = 0.5 * g_l - cav.delta0;
  ss.alpha_s = cav.drive / cplx(0.5 * cav.gamma0, -delta_prime);
  if (mech.gamma_m > 0.0) {
    ss.omega_ms = mech.torque / (mech.inertia * mech.gamma_m);
    // U_{l,s} read as a long-time average: zero while the particle rotates.
    // For a trapped state the average is e^{2 i l phi_rest}; reported for
    // phi_rest = 0.
    ss.u_avg = (ss.omega_ms != 0.0) ? cplx(0.0, 0.0) : cplx(1.0, 0.0);
    ss.bounded = true;
  } else {
    ss.omega_ms = std::numeric_limits<double>::infinity();
    ss.u_avg = cplx(0.0, 0.0);
    ss.bounded = false;
  }
  return ss;
}

} // namespace oamsim::dynamics
