#include "febe/physics.hpp"

#include <cmath>

#include "febe/constants.hpp"
#include "febe/special_functions.hpp"

namespace febe {

using namespace constants;

ElectronKinematics kinematics_from_energy(double kinetic_energy_ev) {
  if (!(kinetic_energy_ev > 0.0) || !std::isfinite(kinetic_energy_ev)) {
    throw DomainError("kinematics_from_energy: kinetic energy must be positive");
  }
  const double ratio = kinetic_energy_ev / electron_rest_energy_ev;
  const double gamma = 1.0 + ratio;
  // beta^2 = 1 - 1/gamma^2 = ratio (2 + ratio) / gamma^2, free of cancellation at small E.
  const double beta = std::sqrt(ratio * (2.0 + ratio)) / gamma;
  const double v0 = beta * speed_of_light;
  const double zeta = planck_reduced / (2.0 * gamma * gamma * gamma * electron_mass * v0);
  return {kinetic_energy_ev, beta, gamma, v0, zeta};
}

double ElectronKinematics::dispersion_energy(double q) const {
  return planck_reduced * v0 * (q + zeta * q * q);
}

double exact_dispersion_energy(const ElectronKinematics& kin, double q) {
  const double mc2 = electron_mass * speed_of_light * speed_of_light;
  const double p0c = kin.gamma * kin.beta * mc2;
  const double dpc = planck_reduced * q * speed_of_light;
  // sqrt((p0 + dp)^2 c^2 + m^2 c^4) - gamma m c^2, rearranged to avoid cancellation.
  const double e0 = kin.gamma * mc2;
  const double numerator = dpc * (2.0 * p0c + dpc);
  return numerator / (std::sqrt(e0 * e0 + numerator) + e0);
}

TwoLevelSystem TwoLevelSystem::from_wavelength(double wavelength, double tau, double dipole_length,
                                               const Eigen::Vector3d& orientation) {
  if (!(wavelength > 0.0)) throw DomainError("TwoLevelSystem: wavelength must be positive");
  TwoLevelSystem tls{units::angular_frequency_from_wavelength(wavelength), tau, dipole_length, orientation};
  tls.validate();
  return tls;
}

double TwoLevelSystem::wavelength() const { return 2.0 * pi * speed_of_light / omega_a; }

void TwoLevelSystem::validate() const {
  if (!(omega_a > 0.0)) throw DomainError("TwoLevelSystem: transition frequency must be positive");
  if (!(tau > 0.0)) throw DomainError("TwoLevelSystem: lifetime must be positive");
  if (!(dipole_length >= 0.0)) throw DomainError("TwoLevelSystem: dipole length must be non-negative");
  if (std::abs(dipole_orientation.norm() - 1.0) > 1e-9) {
    throw DomainError("TwoLevelSystem: dipole orientation must be a unit vector");
  }
}

Eigen::Vector3d perpendicular_dipole() { return Eigen::Vector3d::UnitX(); }
Eigen::Vector3d parallel_dipole() { return Eigen::Vector3d::UnitZ(); }

TwoLevelSystem snv_center(const Eigen::Vector3d& orientation) {
  return TwoLevelSystem::from_wavelength(620.0 * units::nm, 4.5 * units::ns, 0.27 * units::nm, orientation);
}

namespace {

Complex coupling_with_gamma(const ElectronKinematics& kin, const TwoLevelSystem& tls,
                            const CouplingGeometry& geom, double gamma) {
  if (!(geom.r_perp > 0.0)) throw DomainError("coupling_g: r_perp must be positive");
  tls.validate();
  const double v0 = kin.v0;
  const double prefactor = elementary_charge * elementary_charge * tls.omega_a /
                           (2.0 * pi * vacuum_permittivity * gamma * planck_reduced * v0 * v0);
  const double xi = std::abs(tls.omega_a * geom.r_perp / (gamma * v0));
  const Eigen::Vector3d dipole = tls.dipole_length * tls.dipole_orientation;
  const Complex field = -bessel_k1(xi) * dipole.x() + kI / gamma * bessel_k0(xi) * dipole.z();
  return prefactor * std::polar(1.0, tls.omega_a * geom.z_a / v0) * field;
}

}  // namespace

Complex coupling_g(const ElectronKinematics& kin, const TwoLevelSystem& tls, const CouplingGeometry& geom) {
  return coupling_with_gamma(kin, tls, geom, kin.gamma);
}

Complex coupling_g_nonrelativistic(const ElectronKinematics& kin, const TwoLevelSystem& tls,
                                   const CouplingGeometry& geom) {
  return coupling_with_gamma(kin, tls, geom, 1.0);
}

}  // namespace febe
