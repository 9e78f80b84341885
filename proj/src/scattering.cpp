#include "febe/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "febe/constants.hpp"
#include "febe/csv.hpp"
#include "febe/optimize.hpp"
#include "febe/parallel.hpp"
#include "febe/special_functions.hpp"

namespace febe {

using constants::pi;

Vector4c DensityMatrix2::vec() const { return Vector4c(rho11, rho22, rho12, rho21()); }

Matrix2c DensityMatrix2::matrix() const {
  Matrix2c m;
  m << rho11, rho12, rho21(), rho22;
  return m;
}

DensityMatrix2 DensityMatrix2::from_vector(const Vector4c& u) {
  const double trace = u[0].real() + u[1].real();
  if (!(std::abs(trace) > 0.0)) throw DomainError("DensityMatrix2::from_vector: zero trace");
  const Complex coherence = 0.5 * (u[2] + std::conj(u[3]));
  return {u[0].real() / trace, u[1].real() / trace, coherence / trace};
}

DensityMatrix2 DensityMatrix2::pure(Complex c1, Complex c2) {
  return {std::norm(c1), std::norm(c2), c1 * std::conj(c2)};
}

void DensityMatrix2::validate(double tolerance) const {
  if (!std::isfinite(rho11) || !std::isfinite(rho22) || !std::isfinite(rho12.real()) ||
      !std::isfinite(rho12.imag())) {
    throw DomainError("DensityMatrix2: non-finite entries");
  }
  if (std::abs(rho11 + rho22 - 1.0) > tolerance) throw DomainError("DensityMatrix2: trace must be 1");
  if (rho11 < -tolerance || rho22 < -tolerance) throw DomainError("DensityMatrix2: negative population");
  if (rho11 * rho22 - std::norm(rho12) < -tolerance) throw DomainError("DensityMatrix2: not positive semidefinite");
}

Checked<Matrix4c> perturbation_matrix(Complex g, Complex s, Complex s2, double guard) {
  const double g2 = std::norm(g);
  const Complex gs = g * s;
  const Complex gs_c = std::conj(gs);
  Matrix4c m;
  // clang-format off
  m << -kI * g2,  kI * g2,  -gs,                                  gs_c,
        kI * g2, -kI * g2,   gs,                                 -gs_c,
       -gs_c,     gs_c,     -kI * g2,                             kI * std::conj(g * g) * std::conj(s2),
        gs,      -gs,        kI * g * g * s2,                    -kI * g2;
  // clang-format on
  Checked<Matrix4c> out{m, {}};
  if (std::abs(g) >= guard) {
    out.warnings.push_back("|g| = " + std::to_string(std::abs(g)) + " exceeds the perturbative guard " +
                           std::to_string(guard) + "; second-order scattering is unreliable");
  }
  return out;
}

Vector4c apply_to_atom(const Matrix4c& M, const DensityMatrix2& rho) { return -kI * (M * rho.vec()); }

SpectrumChange eels_change(Complex g, const DensityMatrix2& rho_a, const MomentumGrid& grid, double q_a) {
  const Eigen::Index s = grid.shift_in_bins(q_a);
  const Eigen::Index n = grid.size();
  const auto psi = [&](Eigen::Index j) -> Complex {
    return (j >= 0 && j < n) ? grid.amplitudes[j] : Complex{0.0, 0.0};
  };
  const double g2 = std::norm(g);
  const Complex coupling = g * rho_a.rho12;

  SpectrumChange out;
  out.k_values = grid.q_values;
  out.first_order.resize(n);
  out.second_order.resize(n);
  out.bin_width = grid.bin_width;
  out.sideband_spacing = grid.sideband_spacing;
  out.origin = grid.origin;
  out.bins_per_sideband = grid.bins_per_sideband;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex here = psi(j), up = psi(j + s), down = psi(j - s);
    out.second_order[j] = g2 * (-std::norm(here) + rho_a.rho11 * std::norm(up) + rho_a.rho22 * std::norm(down));
    // -i[X - conj(X)] with X = g rho12 (<k|b rho|k> - <k|rho b|k>)
    const Complex x = coupling * (up * std::conj(here) - here * std::conj(down));
    out.first_order[j] = 2.0 * x.imag();
  }
  return out;
}

SidebandSpectrum integrate_sidebands(const SpectrumChange& spectrum) {
  const int per = spectrum.bins_per_sideband;
  if (per < 1) throw GridError("integrate_sidebands: spectrum has no sideband structure");
  const auto label = [&](Eigen::Index j) {
    const double offset = static_cast<double>(j - spectrum.origin) / per;
    return static_cast<int>(std::floor(offset + 0.5));
  };
  const Eigen::Index size = spectrum.k_values.size();
  const int lo = label(0), hi = label(size - 1);
  SidebandSpectrum out;
  for (int n = lo; n <= hi; ++n) out.n.push_back(n);
  out.first_order.assign(out.n.size(), 0.0);
  out.second_order.assign(out.n.size(), 0.0);
  for (Eigen::Index j = 0; j < size; ++j) {
    const auto idx = static_cast<std::size_t>(label(j) - lo);
    out.first_order[idx] += spectrum.first_order[j] * spectrum.bin_width;
    out.second_order[idx] += spectrum.second_order[j] * spectrum.bin_width;
  }
  return out;
}

namespace {

struct ClosedFormInputs {
  double zeta;
  double spacing;  // omega / v0
  double q_a;      // omega_a / v0
  double sigma_q;
  double L_p;
  double phi_gm;
  int harmonic;
};

// Gaussian-integrated first-order change of sideband n.
double first_order_sideband(const BesselJTable<double>& j, Complex coupling, const ClosedFormInputs& in, int n) {
  const int l = in.harmonic;
  const double chirp = in.zeta * in.L_p * in.q_a;
  const double recoil = chirp * in.q_a;
  const Complex bracket =
      j(n + l) * j(n) * std::polar(1.0, -recoil) - j(n) * j(n - l) * std::polar(1.0, recoil);
  const double damping = std::exp(-2.0 * in.sigma_q * in.sigma_q * chirp * chirp);
  const double phase = -(in.L_p * in.q_a - l * in.phi_gm) - 2.0 * n * in.spacing * chirp;
  const Complex f = coupling * std::polar(damping, phase) * bracket;
  return 2.0 * f.imag();
}

}  // namespace

SidebandSpectrum eels_modulated_closed_form(const ElectronKinematics& kin, const ModulationParams& mod,
                                            const TwoLevelSystem& tls, Complex g, const DensityMatrix2& rho_a,
                                            int harmonic) {
  mod.validate();
  if (harmonic < 1) throw DomainError("eels_modulated_closed_form: harmonic order must be >= 1");
  if (std::abs(tls.omega_a - harmonic * mod.omega) > 1e-9 * tls.omega_a) {
    throw DomainError("eels_modulated_closed_form: transition is off resonance with the modulation harmonic; use "
                      "eels_change on a momentum grid");
  }
  const ClosedFormInputs in{kin.zeta,    mod.omega / kin.v0, tls.omega_a / kin.v0, mod.sigma_q,
                            mod.L_p,     std::arg(mod.g_m),  harmonic};
  const BesselJTable<double> j(mod.n_max, 2.0 * std::abs(mod.g_m));
  const double g2 = std::norm(g);
  const Complex coupling = g * rho_a.rho12;
  const int reach = mod.n_max + harmonic;

  SidebandSpectrum out;
  for (int n = -reach; n <= reach; ++n) {
    out.n.push_back(n);
    out.first_order.push_back(first_order_sideband(j, coupling, in, n));
    out.second_order.push_back(
        g2 * (-j(n) * j(n) + rho_a.rho11 * j(n + harmonic) * j(n + harmonic) +
              rho_a.rho22 * j(n - harmonic) * j(n - harmonic)));
  }
  return out;
}

double average_energy_change(Complex g, const DensityMatrix2& rho_a, Complex s) {
  // i (X - conj(X)) = -2 Im X, X = g rho12 s
  return std::norm(g) * (rho_a.rho22 - rho_a.rho11) - 2.0 * (g * rho_a.rho12 * s).imag();
}

double spectrum_energy_moment(const SpectrumChange& spectrum, double q_a) {
  const Eigen::VectorXd total = spectrum.total();
  return (spectrum.k_values.array() * total.array()).sum() * spectrum.bin_width / q_a;
}

std::vector<double> antisymmetric_signal(const SidebandSpectrum& spectrum, SpectrumComponent component) {
  if (spectrum.n.empty() || spectrum.n.front() != -spectrum.n.back()) {
    throw DomainError("antisymmetric_signal: sidebands must be labelled symmetrically about n = 0");
  }
  const auto value = [&](std::size_t i) {
    switch (component) {
      case SpectrumComponent::first_order:
        return spectrum.first_order[i];
      case SpectrumComponent::second_order:
        return spectrum.second_order[i];
      case SpectrumComponent::total:
        break;
    }
    return spectrum.total(i);
  };
  const int top = spectrum.n.back();
  const auto zero = static_cast<std::size_t>(top);
  std::vector<double> out;
  for (int n = 1; n <= top; ++n) {
    out.push_back(value(zero + static_cast<std::size_t>(n)) - value(zero - static_cast<std::size_t>(n)));
  }
  return out;
}

std::vector<double> antisymmetric_signal(const SpectrumChange& spectrum, SpectrumComponent component) {
  SidebandSpectrum sidebands = integrate_sidebands(spectrum);
  // Drop unmatched outer sidebands so the labels are symmetric.
  const int top = std::min(-sidebands.n.front(), sidebands.n.back());
  SidebandSpectrum trimmed;
  for (std::size_t i = 0; i < sidebands.size(); ++i) {
    if (std::abs(sidebands.n[i]) > top) continue;
    trimmed.n.push_back(sidebands.n[i]);
    trimmed.first_order.push_back(sidebands.first_order[i]);
    trimmed.second_order.push_back(sidebands.second_order[i]);
  }
  return antisymmetric_signal(trimmed, component);
}

double phase_matched_modulation_phase(Complex g, Complex rho12, double L_p, double omega_a, double v0, int harmonic,
                                      int branch) {
  if (harmonic < 1) throw DomainError("phase_matched_modulation_phase: harmonic order must be >= 1");
  const double target = branch * pi + (harmonic - 1) * pi / 2.0;
  const double drift = std::fmod(L_p * omega_a / v0, 2.0 * pi);
  const double phi = (target - std::arg(g) - std::arg(rho12) + drift) / harmonic;
  return std::remainder(phi, 2.0 * pi);
}

namespace {

// Largest |Delta rho1(n) - Delta rho1(-n)| / |g rho12| over n for one (|g_m|, L_p),
// atom in (|1> + |2>)/sqrt(2) and phase-matched phi_gm.
std::pair<double, int> normalized_signal(const ElectronKinematics& kin, const TwoLevelSystem& tls,
                                         const BesselJTable<double>& j, double sigma_q, double L_p) {
  const Complex rho12{0.5, 0.0};
  const Complex g{1.0, 0.0};
  ClosedFormInputs in{kin.zeta, tls.omega_a / kin.v0, tls.omega_a / kin.v0, sigma_q, L_p, 0.0, 1};
  in.phi_gm = phase_matched_modulation_phase(g, rho12, L_p, tls.omega_a, kin.v0, 1);
  double best = 0.0;
  int best_n = 1;
  for (int n = 1; n <= j.n_max() + 1; ++n) {
    const double signal = std::abs(first_order_sideband(j, g * rho12, in, n) - first_order_sideband(j, g * rho12, in, -n));
    if (signal > best) {
      best = signal;
      best_n = n;
    }
  }
  return {best / std::abs(rho12), best_n};
}

double default_drift_ceiling(const ElectronKinematics& kin, const TwoLevelSystem& tls) {
  return 0.5 * drift_period(kin, tls.omega_a);
}

}  // namespace

ModulationOptimum best_drift_for_modulation(const ElectronKinematics& kin, const TwoLevelSystem& tls, Complex g,
                                            double sigma_q, double g_m_abs, double L_p_min, double L_p_max,
                                            int L_p_count) {
  if (!(g_m_abs > 0.0)) throw DomainError("best_drift_for_modulation: |g_m| must be positive");
  if (L_p_max <= 0.0) L_p_max = default_drift_ceiling(kin, tls);
  if (L_p_min <= 0.0) L_p_min = 1e-6 * L_p_max;
  if (!(L_p_max > L_p_min) || L_p_count < 2) throw DomainError("best_drift_for_modulation: invalid drift range");
  const BesselJTable<double> j(sideband_cutoff(g_m_abs) + 2, 2.0 * g_m_abs);
  const auto signal = [&](double L_p) { return normalized_signal(kin, tls, j, sigma_q, L_p).first; };
  const Extremum best = maximize_on_interval(signal, L_p_min, L_p_max, L_p_count);
  const auto [value, n] = normalized_signal(kin, tls, j, sigma_q, best.x);
  return {g_m_abs, best.x, n, value, value * std::abs(g) * 0.5};
}

ModulationOptimum optimal_modulation_search(const ElectronKinematics& kin, const TwoLevelSystem& tls, Complex g,
                                            double sigma_q, const ModulationSweepRange& range) {
  if (!(range.g_m_max > range.g_m_min) || range.g_m_min <= 0.0 || range.g_m_count < 2) {
    throw DomainError("optimal_modulation_search: invalid |g_m| range");
  }
  const double step = (range.g_m_max - range.g_m_min) / (range.g_m_count - 1);
  std::vector<double> grid(static_cast<std::size_t>(range.g_m_count));
  for (int i = 0; i < range.g_m_count; ++i) grid[static_cast<std::size_t>(i)] = range.g_m_min + i * step;

  const auto at = [&](double g_m) {
    return best_drift_for_modulation(kin, tls, g, sigma_q, g_m, range.L_p_min, range.L_p_max, range.L_p_count);
  };
  const std::vector<ModulationOptimum> coarse = parallel_map(grid, at);
  const auto best = std::max_element(coarse.begin(), coarse.end(),
                                     [](const auto& a, const auto& b) { return a.signal < b.signal; });
  const auto index = static_cast<int>(best - coarse.begin());
  const double lo = range.g_m_min + std::max(index - 1, 0) * step;
  const double hi = range.g_m_min + std::min(index + 1, range.g_m_count - 1) * step;
  const Extremum refined = golden_section_maximize([&](double g_m) { return at(g_m).signal; }, lo, hi, 1e-9);
  ModulationOptimum out = at(refined.x);
  return out.signal >= best->signal ? out : *best;
}

void write_csv(std::ostream& os, const SpectrumChange& spectrum) {
  os << "n,k,delta_rho_first_order,delta_rho_second_order,delta_rho_total\n";
  const int per = std::max(spectrum.bins_per_sideband, 1);
  for (Eigen::Index j = 0; j < spectrum.k_values.size(); ++j) {
    const double n = std::floor(static_cast<double>(j - spectrum.origin) / per + 0.5);
    const double first = spectrum.first_order[j], second = spectrum.second_order[j];
    write_csv_row(os, {n, spectrum.k_values[j], first, second, first + second});
  }
}

}  // namespace febe
