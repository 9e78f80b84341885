#pragma once

#include <Eigen/Dense>

#include "febe/types.hpp"

namespace febe {

/// Longitudinal kinematics of the free electron about its central momentum.
struct ElectronKinematics {
  double kinetic_energy_ev;
  double beta;
  double gamma;
  double v0;    ///< central velocity, m/s
  double zeta;  ///< dispersion curvature hbar / (2 gamma^3 m v0), m

  /// Momentum offset (1/m) matched to a transition at angular frequency omega.
  double ladder_step(double omega) const { return omega / v0; }

  /// Free-electron energy E(q) - gamma m c^2 in joules, to second order in q.
  double dispersion_energy(double q) const;
};

/// Builds the kinematics for a kinetic energy in eV; throws DomainError if E <= 0.
ElectronKinematics kinematics_from_energy(double kinetic_energy_ev);

/// Exact relativistic energy E(q) - gamma m c^2 (J) for momentum offset hbar q.
double exact_dispersion_energy(const ElectronKinematics& kin, double q);

struct TwoLevelSystem {
  double omega_a;         ///< transition angular frequency, rad/s
  double tau;             ///< lifetime, s
  double dipole_length;   ///< |l_21|, m
  /// Unit vector in the (e_perp, e_y, e_z) frame, e_perp pointing from the
  /// electron trajectory to the atom and e_z along the electron velocity.
  Eigen::Vector3d dipole_orientation;

  static TwoLevelSystem from_wavelength(double wavelength, double tau, double dipole_length,
                                        const Eigen::Vector3d& orientation);

  double wavelength() const;
  void validate() const;
};

/// Dipole orientations used for the tin-vacancy coupling curves.
Eigen::Vector3d perpendicular_dipole();
Eigen::Vector3d parallel_dipole();

/// Tin-vacancy center in diamond: 620 nm, 4.5 ns, dipole length 0.27 nm.
TwoLevelSystem snv_center(const Eigen::Vector3d& orientation = perpendicular_dipole());

struct CouplingGeometry {
  double r_perp;  ///< transverse distance trajectory-to-atom, m
  double z_a;     ///< longitudinal atom position, m
};

/// Dimensionless electron-atom coupling g, with the relativistic gamma
/// corrections to the field prefactor, the Bessel argument and the
/// longitudinal field component.
Complex coupling_g(const ElectronKinematics& kin, const TwoLevelSystem& tls, const CouplingGeometry& geom);

/// The same coupling with gamma set to 1 everywhere (low-velocity form).
Complex coupling_g_nonrelativistic(const ElectronKinematics& kin, const TwoLevelSystem& tls,
                                   const CouplingGeometry& geom);

}  // namespace febe
