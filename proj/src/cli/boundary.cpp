#include "febe/cli/boundary.hpp"

#include <cmath>

#include "febe/constants.hpp"

namespace febe::cli {

using constants::pi;

double mm_to_m(double v) { return v * units::mm; }
double nm_to_m(double v) { return v * units::nm; }
double ns_to_s(double v) { return v * units::ns; }
double ma_to_a(double v) { return v * units::ma; }
double deg_to_rad(double v) { return v * pi / 180.0; }

ElectronKinematics electron(const RunConfig& config) {
  return kinematics_from_energy(config.number("electron.kinetic_energy_kev") * 1e3);
}

double momentum_spread(const RunConfig& config, const ElectronKinematics& kin) {
  return config.number("electron.energy_spread_ev") * constants::joule_per_ev / (constants::planck_reduced * kin.v0);
}

TwoLevelSystem atom(const RunConfig& config) {
  const double angle = deg_to_rad(config.number("atom.dipole_angle_deg"));
  return TwoLevelSystem::from_wavelength(nm_to_m(config.number("atom.wavelength_nm")),
                                         ns_to_s(config.number("atom.lifetime_ns")),
                                         nm_to_m(config.number("atom.dipole_length_nm")),
                                         Eigen::Vector3d(std::cos(angle), 0.0, std::sin(angle)));
}

DensityMatrix2 atom_state(const RunConfig& config) {
  const double p = config.number("atom.excited_population");
  const double c = config.number("atom.coherence") * std::sqrt(p * (1.0 - p));
  DensityMatrix2 rho{1.0 - p, p, std::polar(c, deg_to_rad(config.number("atom.coherence_phase_deg")))};
  rho.validate(1e-12);
  return rho;
}

CouplingGeometry geometry(const RunConfig& config) {
  return {nm_to_m(config.number("geometry.r_perp_nm")), nm_to_m(config.number("geometry.z_a_nm"))};
}

Complex coupling(const RunConfig& config, const ElectronKinematics& kin, const TwoLevelSystem& tls) {
  if (config.flag("coupling.override")) {
    return std::polar(config.number("coupling.g_abs"), deg_to_rad(config.number("coupling.g_phase_deg")));
  }
  return coupling_g(kin, tls, geometry(config));
}

double drift_length(const RunConfig& config) { return mm_to_m(config.number("modulation.l_p_mm")); }

ModulationParams modulation(const RunConfig& config, const ElectronKinematics& kin, const TwoLevelSystem& tls,
                            Complex g, const DensityMatrix2& rho) {
  const int harmonic = static_cast<int>(config.integer("modulation.harmonic"));
  const double omega = tls.omega_a / harmonic;
  const double L_p = drift_length(config);
  double phase = deg_to_rad(config.number("modulation.g_m_phase_deg"));
  if (config.flag("modulation.phase_matched")) {
    // Without coherence or coupling any phase is as good as another.
    const Complex g_ref = std::abs(g) > 0.0 ? g : Complex{1.0, 0.0};
    const Complex rho_ref = std::abs(rho.rho12) > 0.0 ? rho.rho12 : Complex{1.0, 0.0};
    phase = phase_matched_modulation_phase(g_ref, rho_ref, L_p, tls.omega_a, kin.v0, harmonic);
  }
  return ModulationParams::make(momentum_spread(config, kin), omega,
                                std::polar(config.number("modulation.g_m_abs"), phase), L_p,
                                mm_to_m(config.number("modulation.l_s_mm")));
}

BeamParams beam(const RunConfig& config, const TwoLevelSystem& tls) {
  return BeamParams::from_current(ma_to_a(config.number("beam.current_ma")), tls.tau);
}

std::vector<double> sweep_values(const RunConfig& config, const SweepDefault& fallback) {
  SweepDefault grid = fallback;
  const long count = config.integer("sweep.count");
  if (count > 0) {
    grid.start = config.number("sweep.start");
    grid.stop = config.number("sweep.stop");
    grid.count = static_cast<int>(count);
  }
  const std::string& scale = config.choice("sweep.scale");
  if (scale != "default") grid.log = scale == "log";
  if (grid.count < 1) throw ConfigError("sweep.count: must be positive");
  if (grid.count > 1 && !(grid.stop > grid.start)) throw ConfigError("sweep.stop: must exceed sweep.start");
  if (grid.log && !(grid.start > 0.0)) throw ConfigError("sweep.start: log sweeps need a positive start");
  std::vector<double> out;
  for (int i = 0; i < grid.count; ++i) {
    const double f = grid.count == 1 ? 0.0 : static_cast<double>(i) / (grid.count - 1);
    out.push_back(grid.log ? grid.start * std::pow(grid.stop / grid.start, f) : grid.start + f * (grid.stop - grid.start));
  }
  return out;
}

}  // namespace febe::cli
