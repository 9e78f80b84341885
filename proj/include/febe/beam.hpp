#pragma once

#include <iosfwd>
#include <vector>

#include "febe/physics.hpp"
#include "febe/scattering.hpp"
#include "febe/types.hpp"
#include "febe/wavepacket.hpp"

namespace febe {

/// Periodic electron train driving one atom.
struct BeamParams {
  double period;  ///< T, time between electrons, s
  double tau;     ///< atom lifetime, s

  static BeamParams from_current(double current, double tau);
  double current() const;
  void validate() const;
};

/// Decay part Gamma of the effective dynamics.
Matrix4c decay_matrix(double tau);

/// H_eff = M / T - i Gamma, so that du/dt = -i H_eff u.
Matrix4c effective_hamiltonian(const Matrix4c& M, const BeamParams& beam);

/// Closed-form steady state in the |s| >> |g| regime; warns outside it.
/// s = 0 uses the exact unmodulated result.
Checked<DensityMatrix2> steady_state_closed_form(Complex g, Complex s, const BeamParams& beam);

/// Trace-normalized null vector of H_eff.
DensityMatrix2 steady_state_nullspace(const Matrix4c& h_eff);

struct TimeSeries {
  std::vector<double> t;
  std::vector<DensityMatrix2> states;
};

struct Evolution {
  TimeSeries continuous;  ///< exact exponential stepping of the averaged dynamics
  TimeSeries discrete;    ///< per-electron kick (I - iM) followed by exact decay over T
};

struct EvolveOptions {
  double duration;
  double dt;
  int max_samples = 2000;  ///< output thinning; integration itself is not affected
};

/// Both integrators from the same initial state. Throws DomainError when
/// dt > T or dt > tau / 100.
Evolution evolve(const DensityMatrix2& rho0, const Matrix4c& M, const BeamParams& beam, const EvolveOptions& options);

struct RabiReport {
  bool oscillatory;
  double omega_R;          ///< 2|gs| / T, rad/s
  double threshold_ratio;  ///< (T / tau) / (8 |gs|)
};

RabiReport rabi_report(Complex g, Complex s, const BeamParams& beam);

/// Oscillation angular frequency of the slowest oscillatory mode of H_eff
/// (largest |Re lambda| among its eigenvalues); zero when none oscillates.
double rabi_frequency_from_eigenvalues(const Matrix4c& h_eff);

/// Electrons needed per lifetime for oscillation, 1 / (8|gs|).
double minimum_electron_count(Complex g, Complex s);

struct CurrentSweepRow {
  double current;
  std::vector<double> rho22;              ///< null vector of the full H_eff, one entry per modulation
  std::vector<double> rho22_closed_form;  ///< |s| >> |g| closed form, same order
};

/// Steady-state excited population against beam current for each electron
/// state. The closed form drops the incoherent |g|^2 pumping, which dominates
/// at low current whenever 4|s|^2 tau / T < 1, so the primary curve comes
/// from the full effective Hamiltonian.
std::vector<CurrentSweepRow> excited_state_vs_current(Complex g, const std::vector<LadderExpectations>& electrons,
                                                      double tau, const std::vector<double>& currents);

/// Current at which the steady excited population of the full model reaches
/// half its large-current limit of 1/2, found by bisection in log current.
double saturation_current(Complex g, const LadderExpectations& electron, double tau);

struct PhaseBudget {
  double energy_term;  ///< from the energy spread
  double angle_term;   ///< from the angular spread
  double total;        ///< linear sum, a worst-case bound
};

/// Propagation phase uncertainty over the drift L_p; delta_e in eV, delta_theta in rad.
PhaseBudget phase_uncertainty(const ElectronKinematics& kin, const TwoLevelSystem& tls, double L_p, double delta_e_ev,
                              double delta_theta);

/// CSV with columns t, rho11, rho22, re_rho12, im_rho12.
void write_csv(std::ostream& os, const TimeSeries& series);

}  // namespace febe
