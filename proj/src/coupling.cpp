#include "oamsim/coupling.hpp"
#include "oamsim/constants.hpp"
#include "oamsim/specfun.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace oamsim::coupling {

CavityParams::CavityParams(double length_, double omega0_, double gamma0_, double delta0_,
                           double drive_)
    : length(length_), omega0(omega0_), gamma0(gamma0_), delta0(delta0_), drive(drive_) {
  if (!(length > 0.0)) throw std::invalid_argument("CavityParams: length must be > 0");
  if (!(omega0 > 0.0)) throw std::invalid_argument("CavityParams: omega0 must be > 0");
  if (gamma0 < 0.0) throw std::invalid_argument("CavityParams: gamma0 must be >= 0");
  if (drive < 0.0) throw std::invalid_argument("CavityParams: drive must be >= 0");
}

CavityParams CavityParams::resonant(int n, double length, double gamma0, double delta0,
                                    double drive) {
  if (n < 1) throw std::invalid_argument("CavityParams::resonant: n must be >= 1");
  return CavityParams(length, n * pi * speed_of_light / length, gamma0, delta0, drive);
}

double CavityParams::drive_from_power(double power, double gamma0, double omega0) {
  if (power < 0.0) throw std::invalid_argument("drive_from_power: power must be >= 0");
  return std::sqrt(power * gamma0 / (hbar * omega0));
}

double CavityParams::wavenumber() const { return omega0 / speed_of_light; }

int CavityParams::mode_index() const {
  return static_cast<int>(std::lround(omega0 * length / (pi * speed_of_light)));
}

double CavityParams::e0_per_photon(double mode_volume) const {
  return std::sqrt(hbar * omega0 / (epsilon0 * mode_volume));
}

double CavityParams::b0_per_photon(double mode_volume) const {
  return mu0 / wavenumber() * std::sqrt(epsilon0 * omega0 * omega0 * omega0 / mode_volume);
}

void MechanicalParams::validate() const {
  if (kind == MechKind::vibrational) {
    if (!(mass > 0.0)) throw std::invalid_argument("MechanicalParams: mass must be > 0");
  } else {
    if (!(inertia > 0.0)) throw std::invalid_argument("MechanicalParams: inertia must be > 0");
  }
  if (gamma_m < 0.0) throw std::invalid_argument("MechanicalParams: gamma_m must be >= 0");
  if (temperature < 0.0) throw std::invalid_argument("MechanicalParams: temperature must be >= 0");
  if (omega_m < 0.0) throw std::invalid_argument("MechanicalParams: omega_m must be >= 0");
}

MechanicalParams MechanicalParams::vibrational(double mass, double omega_m, double gamma_m,
                                               double temperature) {
  MechanicalParams m;
  m.kind = MechKind::vibrational;
  m.mass = mass;
  m.omega_m = omega_m;
  m.gamma_m = gamma_m;
  m.temperature = temperature;
  m.validate();
  return m;
}

MechanicalParams MechanicalParams::torsional(double inertia, double omega_phi, double gamma_phi,
                                             double temperature) {
  MechanicalParams m;
  m.kind = MechKind::torsional;
  m.inertia = inertia;
  m.omega_m = omega_phi;
  m.gamma_m = gamma_phi;
  m.temperature = temperature;
  m.validate();
  return m;
}

MechanicalParams MechanicalParams::torsional_disk(double M, double R, double omega_phi,
                                                  double gamma_phi, double temperature) {
  return torsional(0.5 * M * R * R, omega_phi, gamma_phi, temperature);
}

MechanicalParams MechanicalParams::rotational_ring(double m, double R, double gamma_m,
                                                   double temperature, double torque) {
  MechanicalParams mp;
  mp.kind = MechKind::rotational;
  mp.mass = m;
  mp.inertia = m * R * R;
  mp.gamma_m = gamma_m;
  mp.temperature = temperature;
  mp.torque = torque;
  mp.validate();
  return mp;
}

double MechanicalParams::generalized_inertia() const {
  return kind == MechKind::vibrational ? mass : inertia;
}

DielectricBody::DielectricBody(double epsilon_r_, double volume_)
    : epsilon_r(epsilon_r_), volume(volume_) {
  if (epsilon_r < 1.0) throw std::invalid_argument("DielectricBody: epsilon_r must be >= 1");
  if (!(volume > 0.0)) throw std::invalid_argument("DielectricBody: volume must be > 0");
}

double vibrational_coupling(const CavityParams& cav) { return cav.omega0 / cav.length; }

double vibrational_coupling_from_wavenumber(double k, double length) {
  if (!(length > 0.0)) throw std::invalid_argument("vibrational_coupling: length must be > 0");
  return speed_of_light * k / length;
}

ZeroPoint zero_point(const MechanicalParams& mech) {
  const double inertia = mech.generalized_inertia();
  if (!(inertia > 0.0)) throw std::invalid_argument("zero_point: inertia must be > 0");
  if (!(mech.omega_m > 0.0))
    throw std::invalid_argument("zero_point: undefined for a free rotor (omega_m = 0)");
  return {std::sqrt(hbar / (2.0 * inertia * mech.omega_m)),
          std::sqrt(inertia * hbar * mech.omega_m / 2.0)};
}

double single_photon_coupling(double g, const MechanicalParams& mech) {
  return g * zero_point(mech).q0;
}

double torsional_coupling(int l, double length) {
  if (!(length > 0.0)) throw std::invalid_argument("torsional_coupling: length must be > 0");
  return speed_of_light * l / length;
}

double rotational_coupling_factor(int l, double R, double w0) {
  if (l < 1) throw std::invalid_argument("rotational_coupling: l must be >= 1");
  const double log_factor = (l + 2.0) * std::log(2.0) - log_factorial(l) +
                            2.0 * l * std::log(R / w0) - 2.0 * R * R / (w0 * w0);
  return std::exp(log_factor);
}

double rotational_coupling(int l, const DielectricBody& body, double R, double w0, double length,
                           double omega_c) {
  if (!(R > 0.0 && w0 > 0.0 && length > 0.0))
    throw std::invalid_argument("rotational_coupling: R, w0, L must be > 0");
  return omega_c * (body.epsilon_r - 1.0) * rotational_coupling_factor(l, R, w0) * body.volume /
         (pi * w0 * w0 * length);
}

double lattice_antinode_z(const beams::RingLattice& lat, double cavity_length) {
  const double half_period = pi / lat.k_p;
  double z = half_period * std::round(0.5 * cavity_length / half_period);
  if (z <= 0.0) z = half_period;
  return std::min(z, cavity_length);
}

namespace {

double axial_cos2_integral(double k_p, double length) {
  // Composite Gauss-Legendre, one panel per half period of cos^2(k_p z).
  const double half_period = pi / k_p;
  const long panels = std::max(1L, static_cast<long>(std::ceil(length / half_period)));
  const QuadratureRule rule = gauss_legendre(8, 0.0, 1.0);
  double total = 0.0;
  for (long s = 0; s < panels; ++s) {
    const double a = s * length / panels;
    const double b = (s + 1) * length / panels;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      const double z = a + (b - a) * rule.nodes[i];
      const double c = std::cos(k_p * z);
      total += (b - a) * rule.weights[i] * c * c;
    }
  }
  return total;
}

std::mutex g_mode_volume_mutex;
std::map<std::tuple<int, double, double, double>, double> g_mode_volume_cache;

} // namespace

double lattice_mode_volume(const beams::RingLattice& lat, double cavity_length) {
  const auto key = std::make_tuple(lat.l, lat.w0, lat.k_p, cavity_length);
  {
    std::lock_guard<std::mutex> lock(g_mode_volume_mutex);
    auto it = g_mode_volume_cache.find(key);
    if (it != g_mode_volume_cache.end()) return it->second;
  }
  // Separable profile: radial x azimuthal x axial, each integrated numerically.
  const double r_max = lat.w0 * (std::sqrt(0.5 * lat.l) + 8.0);
  const QuadratureRule radial = gauss_legendre(256, 0.0, r_max);
  double radial_integral = 0.0;
  for (size_t i = 0; i < radial.nodes.size(); ++i) {
    const double rho = radial.nodes[i];
    radial_integral +=
        radial.weights[i] * beams::lattice_intensity_at(lat, rho, 0.0, 0.0) * rho;
  }
  const int n_phi = 1024;
  double azimuthal_integral = 0.0;
  for (int j = 0; j < n_phi; ++j) {
    const double phi = 2.0 * pi * j / n_phi;
    const double c = std::cos(lat.l * phi);
    azimuthal_integral += c * c;
  }
  azimuthal_integral *= 2.0 * pi / n_phi;
  const double axial_integral = axial_cos2_integral(lat.k_p, cavity_length);
  const double volume = radial_integral * azimuthal_integral * axial_integral;
  std::lock_guard<std::mutex> lock(g_mode_volume_mutex);
  g_mode_volume_cache[key] = volume;
  return volume;
}

namespace {

double body_intensity_integral(const beams::RingLattice& lat, double phi, double z_center,
                               double side, int order) {
  const double xc = lat.R * std::cos(phi);
  const double yc = lat.R * std::sin(phi);
  const QuadratureRule rule = gauss_legendre(order, -0.5 * side, 0.5 * side);
  double total = 0.0;
  for (size_t ix = 0; ix < rule.nodes.size(); ++ix) {
    const double x = xc + rule.nodes[ix];
    for (size_t iy = 0; iy < rule.nodes.size(); ++iy) {
      const double y = yc + rule.nodes[iy];
      const double rho = std::hypot(x, y);
      const double ang = std::atan2(y, x);
      double plane = 0.0;
      for (size_t iz = 0; iz < rule.nodes.size(); ++iz) {
        const double z = z_center + rule.nodes[iz];
        plane += rule.weights[iz] * beams::lattice_intensity_at(lat, rho, ang, z);
      }
      total += rule.weights[ix] * rule.weights[iy] * plane;
    }
  }
  return total;
}

} // namespace

double bethe_schwinger_shift(const DielectricBody& body, const beams::RingLattice& lat,
                             double cavity_length, double phi) {
  if (!(cavity_length > 0.0))
    throw std::invalid_argument("bethe_schwinger_shift: cavity length must be > 0");
  const double side = std::cbrt(body.volume);
  const double lambda_p = 2.0 * pi / lat.k_p;
  if (side > 0.1 * cavity_length || side > 0.1 * lambda_p)
    std::fprintf(stderr,
                 "bethe_schwinger_shift: body size %.3g m is not small against the cavity "
                 "(L = %.3g m, lambda_p = %.3g m); perturbative shift may be inaccurate\n",
                 side, cavity_length, lambda_p);
  if (body.epsilon_r == 1.0) return 0.0;
  const double z_center = lattice_antinode_z(lat, cavity_length);
  // Adaptive tensor order, refined until the relative change is < 1e-4.
  const double tolerance = 1e-4;
  double previous = body_intensity_integral(lat, phi, z_center, side, 4);
  for (int order = 8; order <= 32; order *= 2) {
    const double current = body_intensity_integral(lat, phi, z_center, side, order);
    const double scale = std::max(std::abs(current), std::abs(previous));
    if (scale == 0.0 || std::abs(current - previous) <= tolerance * scale) {
      const double numerator = (body.epsilon_r - 1.0) * current;
      return -numerator / (2.0 * lattice_mode_volume(lat, cavity_length));
    }
    previous = current;
  }
  throw std::runtime_error(
      "bethe_schwinger_shift: quadrature did not converge to 1e-4 (estimate " +
      std::to_string(-(body.epsilon_r - 1.0) * previous /
                     (2.0 * lattice_mode_volume(lat, cavity_length))) +
      ", last refinement bound unavailable)");
}

double torsional_overlap_coupling(const DielectricBody& body, const beams::RingLattice& lat,
                                  double cavity_length, double omega_c, double inertia,
                                  double omega_phi, double phi0) {
  if (!(inertia > 0.0 && omega_phi > 0.0))
    throw std::invalid_argument("torsional_overlap_coupling: inertia and omega_phi must be > 0");
  const double delta = 1e-4 / std::max(1, lat.l);
  const double plus = bethe_schwinger_shift(body, lat, cavity_length, phi0 + delta);
  const double minus = bethe_schwinger_shift(body, lat, cavity_length, phi0 - delta);
  const double domega_dphi = omega_c * (plus - minus) / (2.0 * delta);
  return std::sqrt(hbar / (inertia * omega_phi)) * std::abs(domega_dphi);
}

std::complex<double> saw_azimuthal_overlap(int l, int l_prime) {
  // Periodic trapezoid rule; exact to rounding for this band-limited integrand.
  const int n = 8192;
  std::complex<double> sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * pi * j / n;
    const double c = std::cos(l * phi);
    sum += c * c * std::polar(1.0, l_prime * phi);
  }
  return sum / static_cast<double>(n);
}

double saw_radial_overlap(const std::function<double(double)>& optical,
                          const std::function<double(double)>& acoustic, double r_max,
                          int n_points) {
  if (!(r_max > 0.0)) throw std::invalid_argument("saw_radial_overlap: r_max must be > 0");
  const QuadratureRule rule = gauss_legendre(n_points, 0.0, r_max);
  double cross = 0.0, norm_o = 0.0, norm_a = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    const double rho = rule.nodes[i];
    const double fo = optical(rho);
    const double fa = acoustic(rho);
    cross += rule.weights[i] * fo * fa * rho;
    norm_o += rule.weights[i] * fo * fo * rho;
    norm_a += rule.weights[i] * fa * fa * rho;
  }
  if (norm_o <= 0.0 || norm_a <= 0.0)
    throw std::invalid_argument("saw_radial_overlap: profiles must have nonzero norm");
  return cross / std::sqrt(norm_o * norm_a);
}

} // namespace oamsim::coupling
