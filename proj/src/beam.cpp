#include "febe/beam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "febe/constants.hpp"
#include "febe/csv.hpp"

namespace febe {

using constants::elementary_charge;

BeamParams BeamParams::from_current(double current, double tau) {
  if (!(current > 0.0)) throw DomainError("BeamParams: current must be positive");
  BeamParams beam{elementary_charge / current, tau};
  beam.validate();
  return beam;
}

double BeamParams::current() const { return elementary_charge / period; }

void BeamParams::validate() const {
  if (!(period > 0.0) || !std::isfinite(period)) throw DomainError("BeamParams: period T must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("BeamParams: lifetime tau must be positive");
}

Matrix4c decay_matrix(double tau) {
  Matrix4c gamma = Matrix4c::Zero();
  gamma(0, 1) = -1.0 / tau;
  gamma(1, 1) = 1.0 / tau;
  gamma(2, 2) = 0.5 / tau;
  gamma(3, 3) = 0.5 / tau;
  return gamma;
}

Matrix4c effective_hamiltonian(const Matrix4c& M, const BeamParams& beam) {
  beam.validate();
  return M / beam.period - kI * decay_matrix(beam.tau);
}

Checked<DensityMatrix2> steady_state_closed_form(Complex g, Complex s, const BeamParams& beam) {
  beam.validate();
  const double rate = beam.tau / beam.period;
  Checked<DensityMatrix2> out{{}, {}};
  if (std::abs(s) == 0.0) {
    const double y = std::norm(g) * rate;
    out.value = {(1.0 + y) / (1.0 + 2.0 * y), y / (1.0 + 2.0 * y), {0.0, 0.0}};
    return out;
  }
  const Complex drive = 2.0 * g * s * rate;
  const double x2 = std::norm(drive);
  const double denom = 1.0 + 2.0 * x2;
  out.value = {(1.0 + x2) / denom, x2 / denom, kI * std::conj(drive) / denom};
  if (std::abs(s) < 10.0 * std::abs(g)) {
    out.warnings.push_back("closed-form steady state assumes |s| >> |g|; got |s|/|g| = " +
                           std::to_string(std::abs(s) / std::abs(g)));
  }
  return out;
}

DensityMatrix2 steady_state_nullspace(const Matrix4c& h_eff) {
  Eigen::ComplexEigenSolver<Matrix4c> solver(h_eff);
  if (solver.info() != Eigen::Success) throw DomainError("steady_state_nullspace: eigensolver failed");
  Eigen::Index best = 0;
  solver.eigenvalues().cwiseAbs().minCoeff(&best);
  return DensityMatrix2::from_vector(solver.eigenvectors().col(best));
}

namespace {

class Recorder {
 public:
  Recorder(double duration, int max_samples) : interval_(duration / std::max(max_samples, 1)) {}

  void offer(double t, const Vector4c& u, TimeSeries& series, bool force = false) {
    if (!force && t + 1e-12 * interval_ < next_) return;
    series.t.push_back(t);
    series.states.push_back(DensityMatrix2::from_vector(u));
    next_ = t + interval_;
  }

 private:
  double interval_;
  double next_ = 0.0;
};

}  // namespace

Evolution evolve(const DensityMatrix2& rho0, const Matrix4c& M, const BeamParams& beam,
                 const EvolveOptions& options) {
  beam.validate();
  rho0.validate(1e-10);
  if (!(options.duration > 0.0) || !(options.dt > 0.0)) throw DomainError("evolve: duration and dt must be positive");
  if (options.dt > beam.period * (1.0 + 1e-12)) throw DomainError("evolve: dt must not exceed the electron period T");
  if (options.dt > beam.tau / 100.0 * (1.0 + 1e-12)) throw DomainError("evolve: dt must not exceed tau / 100");
  const double steps_needed = options.duration / std::min(options.dt, beam.period);
  if (steps_needed > 1e9) throw DomainError("evolve: more than 1e9 steps requested");

  Evolution out;
  const Vector4c u0 = rho0.vec();

  {
    const auto steps = static_cast<long long>(std::ceil(options.duration / options.dt - 1e-9));
    const double dt = options.duration / static_cast<double>(steps);
    const Matrix4c propagator = (-kI * effective_hamiltonian(M, beam) * dt).exp();
    Recorder recorder(options.duration, options.max_samples);
    Vector4c u = u0;
    recorder.offer(0.0, u, out.continuous, true);
    for (long long k = 1; k <= steps; ++k) {
      u = propagator * u;
      recorder.offer(k * dt, u, out.continuous, k == steps);
    }
  }
  {
    const auto electrons = static_cast<long long>(std::floor(options.duration / beam.period + 1e-9));
    const Matrix4c kick = Matrix4c::Identity() - kI * M;
    const Matrix4c decay = (-decay_matrix(beam.tau) * beam.period).exp();
    const Matrix4c map = decay * kick;
    Recorder recorder(options.duration, options.max_samples);
    Vector4c u = u0;
    recorder.offer(0.0, u, out.discrete, true);
    for (long long k = 1; k <= electrons; ++k) {
      u = map * u;
      recorder.offer(k * beam.period, u, out.discrete, k == electrons);
    }
  }
  return out;
}

RabiReport rabi_report(Complex g, Complex s, const BeamParams& beam) {
  beam.validate();
  const double gs = std::abs(g * s);
  const double ratio = gs > 0.0 ? (beam.period / beam.tau) / (8.0 * gs) : std::numeric_limits<double>::infinity();
  return {ratio < 1.0, 2.0 * gs / beam.period, ratio};
}

double rabi_frequency_from_eigenvalues(const Matrix4c& h_eff) {
  Eigen::ComplexEigenSolver<Matrix4c> solver(h_eff, false);
  if (solver.info() != Eigen::Success) throw DomainError("rabi_frequency_from_eigenvalues: eigensolver failed");
  const double scale = h_eff.cwiseAbs().maxCoeff();
  double omega = 0.0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    const double re = std::abs(solver.eigenvalues()[i].real());
    if (re > 1e-9 * scale) omega = std::max(omega, re);
  }
  return omega;
}

double minimum_electron_count(Complex g, Complex s) {
  const double gs = std::abs(g * s);
  if (!(gs > 0.0)) throw DomainError("minimum_electron_count: g s must be nonzero");
  return 1.0 / (8.0 * gs);
}

namespace {

double excited_population(Complex g, const LadderExpectations& electron, const BeamParams& beam) {
  const Matrix4c M = perturbation_matrix(g, electron.s, electron.s2).value;
  return steady_state_nullspace(effective_hamiltonian(M, beam)).rho22;
}

}  // namespace

std::vector<CurrentSweepRow> excited_state_vs_current(Complex g, const std::vector<LadderExpectations>& electrons,
                                                      double tau, const std::vector<double>& currents) {
  std::vector<CurrentSweepRow> rows;
  rows.reserve(currents.size());
  for (double current : currents) {
    const BeamParams beam = BeamParams::from_current(current, tau);
    CurrentSweepRow row{current, {}, {}};
    for (const auto& electron : electrons) {
      row.rho22.push_back(excited_population(g, electron, beam));
      row.rho22_closed_form.push_back(steady_state_closed_form(g, electron.s, beam).value.rho22);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double saturation_current(Complex g, const LadderExpectations& electron, double tau) {
  if (!(std::abs(g) > 0.0)) throw DomainError("saturation_current: g must be nonzero");
  const auto excess = [&](double log_current) {
    return excited_population(g, electron, BeamParams::from_current(std::exp(log_current), tau)) - 0.25;
  };
  double lo = std::log(1e-30), hi = std::log(1e6);
  if (excess(lo) > 0.0 || excess(hi) < 0.0) throw DomainError("saturation_current: crossing outside search range");
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

PhaseBudget phase_uncertainty(const ElectronKinematics& kin, const TwoLevelSystem& tls, double L_p, double delta_e_ev,
                              double delta_theta) {
  if (!(L_p >= 0.0) || !(delta_e_ev >= 0.0) || !(delta_theta >= 0.0)) {
    throw DomainError("phase_uncertainty: drift, energy spread and angle spread must be non-negative");
  }
  const double phase = L_p * tls.omega_a / kin.v0;
  const double energy = phase * delta_e_ev /
                        (kin.beta * kin.gamma * kin.gamma * kin.gamma * constants::electron_rest_energy_ev);
  const double angle = 0.5 * delta_theta * delta_theta * phase;
  return {energy, angle, energy + angle};
}

void write_csv(std::ostream& os, const TimeSeries& series) {
  os << "t,rho11,rho22,re_rho12,im_rho12\n";
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    const auto& r = series.states[i];
    write_csv_row(os, {series.t[i], r.rho11, r.rho22, r.rho12.real(), r.rho12.imag()});
  }
}

}  // namespace febe
