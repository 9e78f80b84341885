#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "febe/physics.hpp"
#include "febe/types.hpp"
#include "febe/wavepacket.hpp"

namespace febe {

/// 2x2 atom density matrix; rho21 is always conj(rho12).
struct DensityMatrix2 {
  double rho11 = 1.0;
  double rho22 = 0.0;
  Complex rho12{0.0, 0.0};

  Complex rho21() const { return std::conj(rho12); }

  /// [rho11, rho22, rho12, rho21]
  Vector4c vec() const;
  Matrix2c matrix() const;

  /// Trace-normalizes and hermitizes a vectorized state.
  static DensityMatrix2 from_vector(const Vector4c& u);
  static DensityMatrix2 ground() { return {1.0, 0.0, {0.0, 0.0}}; }
  static DensityMatrix2 excited() { return {0.0, 1.0, {0.0, 0.0}}; }
  /// Pure state c1|1> + c2|2> (normalized by the caller).
  static DensityMatrix2 pure(Complex c1, Complex c2);

  /// Throws DomainError unless trace, hermiticity and positivity hold.
  void validate(double tolerance = 1e-12) const;
};

inline constexpr double kDefaultPerturbativeGuard = 0.1;

/// The 4x4 matrix M with Delta u = -i M u for one electron passage.
Checked<Matrix4c> perturbation_matrix(Complex g, Complex s, Complex s2,
                                      double guard = kDefaultPerturbativeGuard);

/// Delta u = -i M u; components ordered [d11, d22, d12, d21].
Vector4c apply_to_atom(const Matrix4c& M, const DensityMatrix2& rho);

/// Change of the electron momentum distribution, split by order in g.
struct SpectrumChange {
  Eigen::VectorXd k_values;
  Eigen::VectorXd first_order;   ///< linear in g (atomic coherence)
  Eigen::VectorXd second_order;  ///< quadratic in g
  double bin_width = 0.0;
  double sideband_spacing = 0.0;
  Eigen::Index origin = 0;
  int bins_per_sideband = 0;

  Eigen::VectorXd total() const { return first_order + second_order; }
};

/// Per-sideband integrated spectrum change (window +-spacing/2 around n omega/v0).
struct SidebandSpectrum {
  std::vector<int> n;
  std::vector<double> first_order;
  std::vector<double> second_order;

  double total(std::size_t i) const { return first_order[i] + second_order[i]; }
  std::size_t size() const { return n.size(); }
};

/// Electron spectrum change for an arbitrary grid state; q_a = omega_a / v0.
SpectrumChange eels_change(Complex g, const DensityMatrix2& rho_a, const MomentumGrid& grid, double q_a);

SidebandSpectrum integrate_sidebands(const SpectrumChange& spectrum);

/// Closed-form per-sideband spectrum change for a resonantly modulated packet
/// (omega_a = l omega, sigma_q << omega/v0). Throws DomainError off resonance.
SidebandSpectrum eels_modulated_closed_form(const ElectronKinematics& kin, const ModulationParams& mod,
                                            const TwoLevelSystem& tls, Complex g, const DensityMatrix2& rho_a,
                                            int harmonic);

/// Average electron energy change in units of hbar omega_a.
double average_energy_change(Complex g, const DensityMatrix2& rho_a, Complex s);

/// First moment sum_k (k / q_a) Delta rho(k) dk of a spectrum change, units of hbar omega_a.
double spectrum_energy_moment(const SpectrumChange& spectrum, double q_a);

enum class SpectrumComponent { first_order, second_order, total };

/// Delta rho(n) - Delta rho(-n) for n = 1..N. Throws DomainError when the
/// sideband labels are not symmetric about zero.
std::vector<double> antisymmetric_signal(const SidebandSpectrum& spectrum,
                                         SpectrumComponent component = SpectrumComponent::total);
std::vector<double> antisymmetric_signal(const SpectrumChange& spectrum,
                                         SpectrumComponent component = SpectrumComponent::total);

/// Modulation phase phi_gm that makes the first-order spectrum change purely
/// anti-symmetric for the given coupling, coherence and drift.
double phase_matched_modulation_phase(Complex g, Complex rho12, double L_p, double omega_a, double v0,
                                      int harmonic, int branch = 0);

struct ModulationSweepRange {
  double g_m_min = 0.05;
  double g_m_max = 2.0;
  int g_m_count = 40;
  double L_p_min = 0.0;  ///< m; zero means a small positive start
  double L_p_max = 0.0;  ///< m; zero means half the drift period
  int L_p_count = 120;
};

struct ModulationOptimum {
  double g_m_abs;
  double L_p;
  int n;
  double signal;      ///< |Delta rho1(n) - Delta rho1(-n)| / |g rho12|
  double raw_signal;  ///< same, for the given g and rho12 = 1/2
};

/// Best anti-symmetric first-order signal over drift length for one |g_m|.
ModulationOptimum best_drift_for_modulation(const ElectronKinematics& kin, const TwoLevelSystem& tls,
                                            Complex g, double sigma_q, double g_m_abs, double L_p_min, double L_p_max,
                                            int L_p_count);

/// Grid search plus local refinement over (|g_m|, L_p) for omega = omega_a, with
/// the atom in (|1> + |2>)/sqrt(2) and phi_gm phase matched.
ModulationOptimum optimal_modulation_search(const ElectronKinematics& kin, const TwoLevelSystem& tls,
                                            Complex g, double sigma_q, const ModulationSweepRange& range = {});

/// CSV with columns n, k, delta_rho_first_order, delta_rho_second_order, delta_rho_total.
void write_csv(std::ostream& os, const SpectrumChange& spectrum);

}  // namespace febe
