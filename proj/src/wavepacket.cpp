#include "febe/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "febe/constants.hpp"
#include "febe/csv.hpp"
#include "febe/optimize.hpp"
#include "febe/special_functions.hpp"

namespace febe {

using constants::pi;

double bessel_weight_deficit(double g_m_abs, int n_max) {
  const auto j = bessel_j_sequence(n_max, 2.0 * g_m_abs);
  double sum = j[0] * j[0];
  for (int n = 1; n <= n_max; ++n) sum += 2.0 * j[static_cast<std::size_t>(n)] * j[static_cast<std::size_t>(n)];
  return 1.0 - sum;
}

int sideband_cutoff(double g_m_abs, double tolerance) {
  if (!(g_m_abs >= 0.0)) throw DomainError("sideband_cutoff: |g_m| must be non-negative");
  // Tail weights fall off super-exponentially once n exceeds 2|g_m|, so a
  // direct tail sum avoids the 1 - sum cancellation.
  const int guess = static_cast<int>(std::ceil(2.0 * g_m_abs)) + 40;
  const auto j = bessel_j_sequence(guess, 2.0 * g_m_abs);
  double tail = 0.0;
  int n = guess;
  for (; n >= 1; --n) {
    tail += 2.0 * j[static_cast<std::size_t>(n)] * j[static_cast<std::size_t>(n)];
    if (tail >= tolerance) break;
  }
  return std::max(n, 1) + 2;
}

ModulationParams ModulationParams::make(double sigma_q, double omega, Complex g_m, double L_p, double L_s) {
  ModulationParams mod{sigma_q, omega, g_m, L_s, L_p, sideband_cutoff(std::abs(g_m))};
  mod.validate();
  return mod;
}

void ModulationParams::validate() const {
  if (!(sigma_q > 0.0)) throw DomainError("ModulationParams: sigma_q must be positive");
  if (!(omega > 0.0)) throw DomainError("ModulationParams: omega must be positive");
  if (!(L_s >= 0.0) || !(L_p >= 0.0)) throw DomainError("ModulationParams: drift lengths must be non-negative");
  if (n_max < 1) throw DomainError("ModulationParams: n_max must be >= 1");
  const double deficit = bessel_weight_deficit(std::abs(g_m), n_max);
  if (deficit > 1e-12) {
    throw DomainError("ModulationParams: sideband cutoff too small, Bessel weight deficit " +
                      std::to_string(deficit));
  }
}

std::vector<double> sideband_populations(const ModulationParams& mod) {
  const BesselJTable<double> j(mod.n_max, 2.0 * std::abs(mod.g_m));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * mod.n_max + 1));
  for (int n = -mod.n_max; n <= mod.n_max; ++n) out.push_back(j(n) * j(n));
  return out;
}

double classical_bunching_length(const ElectronKinematics& kin, const ModulationParams& mod) {
  const double g = std::abs(mod.g_m);
  if (!(g > 0.0)) throw DomainError("classical_bunching_length: |g_m| must be positive");
  return kin.v0 * kin.v0 / (4.0 * kin.zeta * g * mod.omega * mod.omega);
}

double drift_period(const ElectronKinematics& kin, double omega) {
  return 2.0 * pi * kin.v0 * kin.v0 / (kin.zeta * omega * omega);
}

Eigen::Index MomentumGrid::shift_in_bins(double q_shift) const {
  const double bins = q_shift / bin_width;
  const double rounded = std::round(bins);
  if (std::abs(bins - rounded) > 1e-9 * std::max(1.0, std::abs(bins))) {
    throw GridError("momentum shift is not an integer number of bins; use a grid whose bin width divides the shift");
  }
  return static_cast<Eigen::Index>(rounded);
}

MomentumGrid make_momentum_grid(Eigen::VectorXcd amplitudes, double bin_width, Eigen::Index origin,
                                double sideband_spacing) {
  if (!(bin_width > 0.0)) throw GridError("make_momentum_grid: bin width must be positive");
  MomentumGrid grid;
  grid.amplitudes = std::move(amplitudes);
  grid.bin_width = bin_width;
  grid.origin = origin;
  grid.sideband_spacing = sideband_spacing;
  grid.bins_per_sideband = static_cast<int>(std::lround(sideband_spacing / bin_width));
  grid.q_values.resize(grid.amplitudes.size());
  for (Eigen::Index j = 0; j < grid.q_values.size(); ++j) grid.q_values[j] = static_cast<double>(j - origin) * bin_width;
  return grid;
}

MomentumGrid build_momentum_grid(const ElectronKinematics& kin, const ModulationParams& mod, double window,
                                 int bins_per_sideband) {
  mod.validate();
  if (window < mod.n_max + 2) throw GridError("build_momentum_grid: window must be at least n_max + 2 sidebands");
  if (bins_per_sideband < 1) throw GridError("build_momentum_grid: bins_per_sideband must be positive");
  const double spacing = mod.omega / kin.v0;
  const double dq = spacing / bins_per_sideband;
  if (dq > mod.sigma_q / 8.0) {
    throw GridError("build_momentum_grid: grid must resolve sigma_q with at least 8 bins");
  }

  const auto half = static_cast<Eigen::Index>(std::ceil(window * bins_per_sideband));
  const Eigen::Index size = 2 * half + 1;
  const double g_abs = std::abs(mod.g_m);
  const double phi_gm = std::arg(mod.g_m);
  const BesselJTable<double> bessel(mod.n_max, 2.0 * g_abs);
  const double norm = std::pow(2.0 * pi * mod.sigma_q * mod.sigma_q, -0.25);
  const double inv4s2 = 1.0 / (4.0 * mod.sigma_q * mod.sigma_q);
  const int reach = static_cast<int>(std::ceil(14.0 * mod.sigma_q / spacing)) + 1;

  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(size);
  for (Eigen::Index j = 0; j < size; ++j) {
    const double q = static_cast<double>(j - half) * dq;
    const int nearest = static_cast<int>(std::lround(q / spacing));
    Complex value{0.0, 0.0};
    for (int n = std::max(-mod.n_max, nearest - reach); n <= std::min(mod.n_max, nearest + reach); ++n) {
      const double x = q - n * spacing;
      const double exponent = -x * x * inv4s2;
      if (exponent < -40.0) continue;
      const double source_phase = n * phi_gm - (x + kin.zeta * x * x) * mod.L_s;
      value += bessel(n) * std::exp(exponent) * std::polar(1.0, source_phase);
    }
    if (value == Complex{0.0, 0.0}) continue;
    const double drift_phase = -(q + kin.zeta * q * q) * mod.L_p;
    amp[j] = norm * value * std::polar(1.0, drift_phase);
  }

  MomentumGrid grid = make_momentum_grid(std::move(amp), dq, half, spacing);
  grid.bins_per_sideband = bins_per_sideband;
  const double deficit = 1.0 - grid.norm();
  if (std::abs(deficit) > 1e-9) {
    throw GridError("build_momentum_grid: sampled state not normalized (cutoff or window too small), deficit " +
                        std::to_string(deficit),
                    deficit);
  }
  grid.amplitudes /= std::sqrt(grid.norm());
  return grid;
}

MomentumGrid default_momentum_grid(const ElectronKinematics& kin, const ModulationParams& mod, int bins_per_sigma) {
  const double spacing = mod.omega / kin.v0;
  const int bins = static_cast<int>(std::ceil(bins_per_sigma * spacing / mod.sigma_q));
  return build_momentum_grid(kin, mod, mod.n_max + 4, bins);
}

Complex ladder_expectation_grid(const MomentumGrid& grid, double q_shift) {
  const Eigen::Index shift = grid.shift_in_bins(q_shift);
  const Eigen::Index n = grid.size();
  if (std::abs(shift) >= n) return {0.0, 0.0};
  const Eigen::Index count = n - std::abs(shift);
  const Eigen::Index lo = shift >= 0 ? 0 : -shift;
  // sum_j Psi(q_j + shift) conj(Psi(q_j))
  const Complex overlap = grid.amplitudes.segment(lo, count).dot(grid.amplitudes.segment(lo + shift, count));
  return overlap * grid.bin_width;
}

Complex ladder_expectation_analytic(const ElectronKinematics& kin, const ModulationParams& mod, double omega_a,
                                    int order) {
  if (order != 1 && order != 2) throw DomainError("ladder_expectation_analytic: order must be 1 or 2");
  mod.validate();
  const double wa = order * omega_a;
  const double g_abs = std::abs(mod.g_m);
  const double phi_gm = std::arg(mod.g_m);
  const double spacing = mod.omega / kin.v0;
  const double ratio = wa / mod.omega;
  const double a = wa / kin.v0;

  // Graf's addition theorem collapses the double sideband sum to a single sum
  // over the harmonic index l.
  const double half_angle = kin.zeta * mod.L_p * spacing * a;
  const double argument = 4.0 * g_abs * std::sin(half_angle);
  const int centre = static_cast<int>(std::lround(ratio));
  const int span = 2 * mod.n_max + 20;
  const int l_max = std::abs(centre) + span;
  const BesselJTable<double> bessel(l_max, argument);

  const double sq = mod.sigma_q;
  Complex sum{0.0, 0.0};
  for (int l = centre - span; l <= centre + span; ++l) {
    const double detune = l - ratio;
    const double envelope = -(spacing * spacing) * detune * detune / (8.0 * sq * sq);
    if (envelope < -40.0) continue;
    const double chirp = mod.L_s * spacing * detune - mod.L_p * a;
    const double exponent = envelope - 2.0 * sq * sq * kin.zeta * kin.zeta * chirp * chirp;
    const double phase = l * (phi_gm - pi / 2.0) + mod.L_s * spacing * detune;
    const Complex term = bessel(l) * std::exp(exponent) * std::polar(1.0, phase);
    sum += term;
  }
  return std::polar(1.0, -mod.L_p * a) * sum;
}

LadderExpectations ladder_expectations(const ElectronKinematics& kin, const ModulationParams& mod, double omega_a) {
  return {ladder_expectation_analytic(kin, mod, omega_a, 1), ladder_expectation_analytic(kin, mod, omega_a, 2)};
}

DriftOptimum max_s_over_drift(const ElectronKinematics& kin, const ModulationParams& mod, int harmonic) {
  if (harmonic < 1) throw DomainError("max_s_over_drift: harmonic order must be >= 1");
  const double g_abs = std::abs(mod.g_m);
  if (!(g_abs > 0.0)) throw DomainError("max_s_over_drift: |g_m| must be positive");
  const double omega_a = harmonic * mod.omega;
  const double spacing = mod.omega / kin.v0;
  // |J_l(4|g_m| sin x)| repeats when x = zeta L_p (omega/v0)(omega_a/v0) advances by pi.
  const double span = pi / (kin.zeta * spacing * omega_a / kin.v0);

  const auto magnitude = [&](double L_p) {
    ModulationParams trial = mod;
    trial.L_p = L_p;
    return std::abs(ladder_expectation_analytic(kin, trial, omega_a, 1));
  };
  const auto best = maximize_on_interval(magnitude, 0.0, span, 2000);
  const BesselPeak peak = bessel_j_first_peak(harmonic);
  return {best.x, best.value, 4.0 * g_abs >= peak.argument};
}

double peak_bunch_density(const ElectronKinematics& kin, const ModulationParams& mod) {
  const double spacing = mod.omega / kin.v0;
  const BesselJTable<double> bessel(mod.n_max, 2.0 * std::abs(mod.g_m));
  const double phi_gm = std::arg(mod.g_m);
  std::vector<Complex> coeff;
  for (int n = -mod.n_max; n <= mod.n_max; ++n) {
    const double phase = n * phi_gm - kin.zeta * n * n * spacing * spacing * mod.L_p;
    coeff.push_back(bessel(n) * std::polar(1.0, phase));
  }
  // Density over one period, z measured in units of the period.
  const auto density = [&](double u) {
    Complex psi{0.0, 0.0};
    for (int n = -mod.n_max; n <= mod.n_max; ++n) {
      psi += coeff[static_cast<std::size_t>(n + mod.n_max)] * std::polar(1.0, 2.0 * pi * n * u);
    }
    return std::norm(psi);
  };
  return maximize_on_interval(density, 0.0, 1.0, 512).value;
}

double shortest_bunch_drift_length(const ElectronKinematics& kin, const ModulationParams& mod) {
  const auto peak = [&](double L_p) {
    ModulationParams trial = mod;
    trial.L_p = L_p;
    return peak_bunch_density(kin, trial);
  };
  // Within half a drift period the bunching first builds up and then decays.
  return maximize_on_interval(peak, 0.0, 0.5 * drift_period(kin, mod.omega), 400).x;
}

Eigen::VectorXd real_space_density(const MomentumGrid& grid, std::span<const double> z) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(z.size()));
  const double scale = grid.bin_width / (2.0 * pi);
  for (std::size_t i = 0; i < z.size(); ++i) {
    Complex psi{0.0, 0.0};
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
      if (grid.amplitudes[j] == Complex{0.0, 0.0}) continue;
      psi += grid.amplitudes[j] * std::polar(1.0, grid.q_values[j] * z[i]);
    }
    out[static_cast<Eigen::Index>(i)] = std::norm(psi) * grid.bin_width * scale;
  }
  return out;
}

void write_csv(std::ostream& os, const MomentumGrid& grid) {
  os << "q,re,im,abs2\n";
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const Complex a = grid.amplitudes[j];
    write_csv_row(os, {grid.q_values[j], a.real(), a.imag(), std::norm(a)});
  }
}

}  // namespace febe
