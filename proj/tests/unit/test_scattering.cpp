#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "febe/constants.hpp"
#include "febe/physics.hpp"
#include "febe/scattering.hpp"
#include "febe/wavepacket.hpp"
#include "oracles.hpp"

using namespace febe;
using constants::pi;

namespace {

const ElectronKinematics kKin = kinematics_from_energy(60e3);
const TwoLevelSystem kAtom = snv_center();
const double kQa = kAtom.omega_a / kKin.v0;

DensityMatrix2 random_atom(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p = u(rng), mix = u(rng), phase = 2.0 * pi * u(rng);
  // Convex mix of a random pure state and the maximally mixed state.
  const DensityMatrix2 pure = DensityMatrix2::pure(std::sqrt(1.0 - p), std::polar(std::sqrt(p), phase));
  return {mix * pure.rho11 + (1.0 - mix) * 0.5, mix * pure.rho22 + (1.0 - mix) * 0.5, mix * pure.rho12};
}

}  // namespace

TEST_CASE("density matrix helpers") {
  const auto rho = DensityMatrix2::pure(std::sqrt(0.3), std::polar(std::sqrt(0.7), 1.0));
  CHECK_NOTHROW(rho.validate());
  CHECK(std::abs(rho.rho12 - std::sqrt(0.21) * std::polar(1.0, -1.0)) < 1e-15);
  const auto back = DensityMatrix2::from_vector(2.0 * rho.vec());
  CHECK(back.rho22 == doctest::Approx(0.7));
  CHECK(std::abs(back.rho12 - rho.rho12) < 1e-15);
  CHECK(rho.matrix().isApprox(rho.matrix().adjoint()));
  CHECK_THROWS_AS((DensityMatrix2{0.5, 0.6, {}}.validate()), DomainError);
  CHECK_THROWS_AS((DensityMatrix2{0.5, 0.5, {0.6, 0.0}}.validate()), DomainError);
  CHECK_THROWS_AS((DensityMatrix2{1.2, -0.2, {}}.validate()), DomainError);
}

TEST_CASE("perturbation matrix structure") {
  const Complex g = std::polar(1e-3, 0.4), s = std::polar(0.5, -1.2), s2 = std::polar(0.3, 2.0);
  const auto M = perturbation_matrix(g, s, s2);
  CHECK(M.ok());
  // Population rows cancel: the trace is conserved.
  CHECK((M.value.row(0) + M.value.row(1)).norm() < 1e-20);
  // Delta u keeps rho21 = conj(rho12).
  const auto rho = DensityMatrix2::pure(0.6, std::polar(0.8, 0.3));
  const Vector4c du = apply_to_atom(M.value, rho);
  CHECK(std::abs(du[3] - std::conj(du[2])) < 1e-18);
  CHECK(std::abs(du[0].imag()) < 1e-18);
  CHECK_FALSE(perturbation_matrix(0.2, s, s2).ok());
}

TEST_CASE("product-space oracle: atom, spectrum and energy changes") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int size = 16, origin = 8;
  const oracle::LadderAtom space{size};
  for (int draw = 0; draw < 50; ++draw) {
    const Complex g = std::polar(1e-2 * u(rng), 2.0 * pi * u(rng));
    const DensityMatrix2 atom = random_atom(rng);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(size);
    for (int j = 4; j < size - 4; ++j) psi[j] = Complex(u(rng) - 0.5, u(rng) - 0.5);
    psi.normalize();

    Eigen::MatrixXcd total = oracle::LadderAtom::kron(psi * psi.adjoint(), atom.matrix());
    const Eigen::MatrixXcd after = oracle::LadderAtom::scatter(space.hamiltonian(g), total);
    const Eigen::Matrix2cd d_atom = space.atom_part(after) - atom.matrix();
    const Eigen::VectorXd d_electron = space.electron_populations(after) - psi.cwiseAbs2();
    double d_energy = 0.0;
    for (int j = 0; j < size; ++j) d_energy += (j - origin) * d_electron[j];

    const auto grid = make_momentum_grid(psi / std::sqrt(kQa), kQa, origin, kQa);
    const Complex s = ladder_expectation_grid(grid, kQa);
    const Complex s2 = ladder_expectation_grid(grid, 2.0 * kQa);
    const Vector4c du = apply_to_atom(perturbation_matrix(g, s, s2).value, atom);
    CHECK(std::abs(du[0] - d_atom(0, 0)) < 1e-10);
    CHECK(std::abs(du[1] - d_atom(1, 1)) < 1e-10);
    CHECK(std::abs(du[2] - d_atom(0, 1)) < 1e-10);
    CHECK(std::abs(du[3] - d_atom(1, 0)) < 1e-10);

    const auto spectrum = eels_change(g, atom, grid, kQa);
    const Eigen::VectorXd library = spectrum.total() * kQa;
    CHECK((library - d_electron).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(average_energy_change(g, atom, s) - d_energy) < 1e-10);
    CHECK(std::abs(spectrum_energy_moment(spectrum, kQa) - d_energy) < 1e-10);
  }
}

TEST_CASE("monochromatic electron and ground-state atom give the conventional loss peak") {
  const Complex g = std::polar(8.4e-4, 0.9);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(9);
  psi[4] = 1.0 / std::sqrt(kQa);
  const auto grid = make_momentum_grid(psi, kQa, 4, kQa);
  const auto spectrum = eels_change(g, DensityMatrix2::ground(), grid, kQa);
  const Eigen::VectorXd p = spectrum.total() * kQa;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    const double expected = j == 4 ? -std::norm(g) : j == 3 ? std::norm(g) : 0.0;
    CHECK(std::abs(p[j] - expected) < 1e-12);
  }
  CHECK(spectrum.first_order.cwiseAbs().maxCoeff() == 0.0);

  const auto sidebands = integrate_sidebands(spectrum);
  CHECK(sidebands.n.front() == -4);
  CHECK(sidebands.total(3) == doctest::Approx(std::norm(g)));
  CHECK(average_energy_change(g, DensityMatrix2::ground(), 0.0) == doctest::Approx(-std::norm(g)));
}

TEST_CASE("non-integer shifts are rejected") {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(10);
  const auto grid = make_momentum_grid(psi, 0.3 * kQa, 5, kQa);
  CHECK_THROWS_AS(eels_change(1e-3, DensityMatrix2::ground(), grid, kQa), GridError);
}

TEST_CASE("closed-form sideband spectrum matches the grid spectrum") {
  const Complex g = std::polar(1e-3, 0.3);
  const auto atom = DensityMatrix2::pure(0.8, std::polar(0.6, 0.5));
  for (int l = 1; l <= 2; ++l) {
    const double omega = kAtom.omega_a / l;
    const double spacing = omega / kKin.v0;
    const auto mod = ModulationParams::make(1e-3 * spacing, omega, std::polar(0.9, 0.7), 6e-3);
    const auto grid = default_momentum_grid(kKin, mod, 12);
    const auto numeric = integrate_sidebands(eels_change(g, atom, grid, kQa));
    const auto closed = eels_modulated_closed_form(kKin, mod, kAtom, g, atom, l);
    for (std::size_t i = 0; i < closed.size(); ++i) {
      const int n = closed.n[i];
      const auto k = static_cast<std::size_t>(n - numeric.n.front());
      INFO("l = " << l << ", n = " << n);
      CHECK(std::abs(closed.first_order[i] - numeric.first_order[k]) < 1e-8 * std::abs(g));
      CHECK(std::abs(closed.second_order[i] - numeric.second_order[k]) < 1e-8 * std::norm(g));
    }
    // The energy moment of the closed form matches the ladder-expectation formula.
    double moment = 0.0;
    for (std::size_t i = 0; i < closed.size(); ++i) moment += closed.n[i] * closed.total(i) / l;
    const Complex s = ladder_expectation_analytic(kKin, mod, kAtom.omega_a, 1);
    CHECK(moment == doctest::Approx(average_energy_change(g, atom, s)).epsilon(1e-9));
  }
  auto off = ModulationParams::make(1e-3, 0.7 * kAtom.omega_a, 0.9, 6e-3);
  CHECK_THROWS_AS(eels_modulated_closed_form(kKin, off, kAtom, g, atom, 1), DomainError);
}

TEST_CASE("phase matching makes the first-order spectrum anti-symmetric") {
  const Complex g = coupling_g(kKin, kAtom, {10e-9, 4e-9});
  const auto atom = DensityMatrix2::pure(1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), 0.8));
  for (int l = 1; l <= 3; ++l) {
    for (double L_p : {2e-3, 9.82e-3, 17e-3}) {
      const double omega = kAtom.omega_a / l;
      const double phi = phase_matched_modulation_phase(g, atom.rho12, L_p, kAtom.omega_a, kKin.v0, l);
      const auto mod = ModulationParams::make(1e-4 * omega / kKin.v0, omega, std::polar(0.68 * l, phi), L_p);
      const auto spectrum = eels_modulated_closed_form(kKin, mod, kAtom, g, atom, l);
      double peak = 0.0, residue = 0.0;
      for (std::size_t i = 0; i < spectrum.size(); ++i) {
        peak = std::max(peak, std::abs(spectrum.first_order[i]));
        residue = std::max(residue, std::abs(spectrum.first_order[i] + spectrum.first_order[spectrum.size() - 1 - i]));
      }
      INFO("l = " << l << ", L_p = " << L_p);
      CHECK(peak > 0.0);
      CHECK(residue < 1e-9 * peak);
    }
  }
}

TEST_CASE("no coherence, no first-order signal") {
  const Complex g = std::polar(1e-3, 0.3);
  const DensityMatrix2 mixed{0.5, 0.5, {0.0, 0.0}};
  const auto mod = ModulationParams::make(1e-3 * kQa, kAtom.omega_a, 0.68, 9.82e-3);
  const auto closed = eels_modulated_closed_form(kKin, mod, kAtom, g, mixed, 1);
  for (double v : closed.first_order) CHECK(v == 0.0);
  const auto grid = default_momentum_grid(kKin, mod, 12);
  CHECK(eels_change(g, mixed, grid, kQa).first_order.cwiseAbs().maxCoeff() == 0.0);
  for (double v : antisymmetric_signal(closed, SpectrumComponent::first_order)) CHECK(v == 0.0);
}

TEST_CASE("antisymmetric signal of grid and closed form agree") {
  const Complex g = std::polar(1e-3, -0.4);
  const auto atom = DensityMatrix2::pure(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  const double L_p = 0.25 * drift_period(kKin, kAtom.omega_a);
  const double phi = phase_matched_modulation_phase(g, atom.rho12, L_p, kAtom.omega_a, kKin.v0, 1);
  const auto mod = ModulationParams::make(1e-3 * kQa, kAtom.omega_a, std::polar(0.68, phi), L_p);
  const auto closed = antisymmetric_signal(eels_modulated_closed_form(kKin, mod, kAtom, g, atom, 1),
                                           SpectrumComponent::first_order);
  const auto grid = antisymmetric_signal(eels_change(g, atom, default_momentum_grid(kKin, mod, 12), kQa),
                                         SpectrumComponent::first_order);
  REQUIRE(grid.size() >= closed.size());
  for (std::size_t i = 0; i < closed.size(); ++i) CHECK(std::abs(closed[i] - grid[i]) < 1e-11);
  // Quarter period: 4 n J_n^2(2|g_m|) |g rho12| with the sign fixed by the phase branch.
  const double gm = 0.68;
  for (int n = 1; n <= 3; ++n) {
    const double jn = std::cyl_bessel_j(n, 2.0 * gm);
    CHECK(std::abs(closed[n - 1]) == doctest::Approx(4.0 * n * jn * jn / gm * std::abs(g) * 0.5).epsilon(1e-6));
  }
  SidebandSpectrum lopsided{{-1, 0, 1, 2}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  CHECK_THROWS_AS(antisymmetric_signal(lopsided), DomainError);
}

TEST_CASE("modulation design optimum") {
  const Complex g = coupling_g(kKin, kAtom, {10e-9, 0.0});
  const auto best = optimal_modulation_search(kKin, kAtom, g, 1e-4 * kQa);
  const double quarter = 0.25 * drift_period(kKin, kAtom.omega_a);
  CHECK(best.g_m_abs == doctest::Approx(0.68).epsilon(0.02 / 0.68));
  CHECK(best.L_p == doctest::Approx(quarter).epsilon(0.01));
  CHECK(best.n == 1);
  CHECK(best.raw_signal == doctest::Approx(best.signal * std::abs(g) * 0.5));
  // Signal is periodic in the drift length with the drift period.
  const auto shifted = best_drift_for_modulation(kKin, kAtom, g, 1e-4 * kQa, best.g_m_abs, quarter * 4.5,
                                                 quarter * 5.5, 200);
  CHECK(shifted.L_p - best.L_p == doctest::Approx(4.0 * quarter).epsilon(1e-3));
}

TEST_CASE("spectrum CSV layout") {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(5);
  psi[2] = 1.0 / std::sqrt(kQa);
  const auto spectrum = eels_change(1e-3, DensityMatrix2::ground(), make_momentum_grid(psi, kQa, 2, kQa), kQa);
  std::ostringstream os;
  write_csv(os, spectrum);
  const std::string text = os.str();
  CHECK(text.rfind("n,k,delta_rho_first_order,delta_rho_second_order,delta_rho_total\n", 0) == 0);
  CHECK(text.find("\n-1,") != std::string::npos);
}
