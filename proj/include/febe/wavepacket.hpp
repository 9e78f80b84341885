#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "febe/physics.hpp"
#include "febe/types.hpp"

namespace febe {

/// PINEM modulation of a Gaussian electron packet followed by free drift.
struct ModulationParams {
  double sigma_q;  ///< momentum spread, 1/m
  double omega;    ///< modulation angular frequency, rad/s
  Complex g_m;     ///< modulation strength |g_m| e^{i phi_gm}
  double L_s;      ///< source-to-modulator distance, m
  double L_p;      ///< modulator-to-atom drift length, m
  int n_max;       ///< sideband cutoff

  /// Fills n_max with the smallest cutoff whose Bessel weight deficit is below 1e-12.
  static ModulationParams make(double sigma_q, double omega, Complex g_m, double L_p, double L_s = 0.0);

  void validate() const;
};

/// Smallest n such that 1 - sum_{|k|<=n} J_k(2|g_m|)^2 < tolerance, plus two guard orders.
int sideband_cutoff(double g_m_abs, double tolerance = 1e-12);

/// 1 - sum_{|n|<=n_max} J_n(2|g_m|)^2.
double bessel_weight_deficit(double g_m_abs, int n_max);

/// Sideband populations J_n(2|g_m|)^2 for n = -n_max..n_max.
std::vector<double> sideband_populations(const ModulationParams& mod);

/// Drift length for perfect bunching in the classical picture.
double classical_bunching_length(const ElectronKinematics& kin, const ModulationParams& mod);

/// Drift period over which the dispersion phase zeta L (omega/v0)^2 advances by 2 pi.
double drift_period(const ElectronKinematics& kin, double omega);

/// Uniformly sampled momentum-space wavefunction, q measured from the central momentum.
struct MomentumGrid {
  Eigen::VectorXd q_values;
  Eigen::VectorXcd amplitudes;
  double bin_width = 0.0;
  double sideband_spacing = 0.0;  ///< omega / v0
  int bins_per_sideband = 0;
  Eigen::Index origin = 0;  ///< index of q = 0

  Eigen::Index size() const { return amplitudes.size(); }
  double norm() const { return amplitudes.squaredNorm() * bin_width; }
  /// Probability density |Psi(q)|^2.
  Eigen::VectorXd density() const { return amplitudes.cwiseAbs2(); }
  /// Number of bins corresponding to q_shift; throws GridError if not an integer.
  Eigen::Index shift_in_bins(double q_shift) const;
};

/// Samples Psi_e(q; L_p) on a grid spanning +-window sidebands with the given
/// number of bins per sideband spacing omega/v0.
MomentumGrid build_momentum_grid(const ElectronKinematics& kin, const ModulationParams& mod, double window,
                                 int bins_per_sideband);

/// Grid with window n_max + 4 and the given number of bins per sigma_q.
MomentumGrid default_momentum_grid(const ElectronKinematics& kin, const ModulationParams& mod,
                                   int bins_per_sigma = 16);

/// Builds a grid directly from amplitudes (e.g. a discrete ladder state).
MomentumGrid make_momentum_grid(Eigen::VectorXcd amplitudes, double bin_width, Eigen::Index origin,
                                double sideband_spacing);

/// Sum_q Psi(q + q_shift) Psi*(q) dq.
Complex ladder_expectation_grid(const MomentumGrid& grid, double q_shift);

/// Closed-form <b^order> of the modulated Gaussian packet for a transition at omega_a.
Complex ladder_expectation_analytic(const ElectronKinematics& kin, const ModulationParams& mod, double omega_a,
                                    int order);

struct LadderExpectations {
  Complex s;
  Complex s2;
};

LadderExpectations ladder_expectations(const ElectronKinematics& kin, const ModulationParams& mod, double omega_a);

struct DriftOptimum {
  double L_p;
  double s_max;
  bool peak_reachable;  ///< false when 4|g_m| is below the first maximum of J_l
};

/// Maximizes |s| over one period of the drift length for omega_a = l omega.
DriftOptimum max_s_over_drift(const ElectronKinematics& kin, const ModulationParams& mod, int harmonic);

/// Peak of the bunched real-space density (one modulation period, sigma_q -> 0)
/// relative to the unmodulated density.
double peak_bunch_density(const ElectronKinematics& kin, const ModulationParams& mod);

/// Drift length maximizing peak_bunch_density within one drift period.
double shortest_bunch_drift_length(const ElectronKinematics& kin, const ModulationParams& mod);

/// Real-space density |psi(z)|^2 of the grid state by direct Fourier sum.
Eigen::VectorXd real_space_density(const MomentumGrid& grid, std::span<const double> z);

/// CSV with columns q, re, im, abs2.
void write_csv(std::ostream& os, const MomentumGrid& grid);

}  // namespace febe
