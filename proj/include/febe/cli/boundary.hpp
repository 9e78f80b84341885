#pragma once

// Lab units (keV, eV, nm, ns, mA, mm, mrad, deg) to SI. Nothing else in the
// CLI converts units.

#include <vector>

#include "febe/beam.hpp"
#include "febe/cli/config.hpp"
#include "febe/physics.hpp"
#include "febe/scattering.hpp"
#include "febe/wavepacket.hpp"

namespace febe::cli {

ElectronKinematics electron(const RunConfig& config);
/// Momentum spread sigma_q = dE / (hbar v0), 1/m.
double momentum_spread(const RunConfig& config, const ElectronKinematics& kin);
TwoLevelSystem atom(const RunConfig& config);
DensityMatrix2 atom_state(const RunConfig& config);
CouplingGeometry geometry(const RunConfig& config);
Complex coupling(const RunConfig& config, const ElectronKinematics& kin, const TwoLevelSystem& tls);
/// Modulation at omega = omega_a / harmonic; with phase matching the g_m phase
/// is replaced by the anti-symmetry condition for the given g and rho12.
ModulationParams modulation(const RunConfig& config, const ElectronKinematics& kin, const TwoLevelSystem& tls,
                            Complex g, const DensityMatrix2& rho);
BeamParams beam(const RunConfig& config, const TwoLevelSystem& tls);
double drift_length(const RunConfig& config);

double mm_to_m(double v);
double nm_to_m(double v);
double ns_to_s(double v);
double ma_to_a(double v);
double deg_to_rad(double v);

struct SweepDefault {
  double start, stop;
  int count;
  bool log;
};

/// Sweep points in the scenario's lab unit; sweep.count = 0 keeps the default.
std::vector<double> sweep_values(const RunConfig& config, const SweepDefault& fallback);

}  // namespace febe::cli
