#include "febe/cli/scenarios.hpp"

#include <cmath>
#include <sstream>

#include "febe/beam.hpp"
#include "febe/cli/boundary.hpp"
#include "febe/constants.hpp"
#include "febe/csv.hpp"
#include "febe/entanglement.hpp"
#include "febe/parallel.hpp"
#include "febe/physics.hpp"
#include "febe/scattering.hpp"
#include "febe/wavepacket.hpp"

namespace febe::cli {

namespace {

using constants::pi;

std::string complex_text(Complex z) {
  return format_number(std::abs(z)) + " exp(i " + format_number(std::arg(z)) + ")";
}

std::string label(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void set_columns(ResultTable& table, std::vector<std::pair<std::string, std::string>> columns) {
  for (auto& [name, unit] : columns) {
    table.columns.push_back(std::move(name));
    table.units.push_back(std::move(unit));
  }
}

// Inputs shared by most scenarios, built (and so validated) before any work.
struct Setup {
  ElectronKinematics kin;
  TwoLevelSystem tls;
  DensityMatrix2 rho;
  Complex g;
  ModulationParams mod;
};

Setup common_setup(const RunConfig& config) {
  const ElectronKinematics kin = electron(config);
  const TwoLevelSystem tls = atom(config);
  const DensityMatrix2 rho = atom_state(config);
  const Complex g = coupling(config, kin, tls);
  return {kin, tls, rho, g, modulation(config, kin, tls, g, rho)};
}

void note_common(ResultTable& table, const Setup& s) {
  table.note("beta", format_number(s.kin.beta));
  table.note("gamma", format_number(s.kin.gamma));
  table.note("g", complex_text(s.g));
  table.note("sigma_q over omega/v0", format_number(s.mod.sigma_q * s.kin.v0 / s.mod.omega));
  table.note("g_m", complex_text(s.mod.g_m));
}

ScenarioResult coupling_scenario(const RunConfig& config) {
  const TwoLevelSystem base = atom(config);
  const std::vector<double> energies = config.list("coupling.energies_kev");
  std::vector<ElectronKinematics> kins;
  for (double e : energies) kins.push_back(kinematics_from_energy(e * 1e3));
  const std::vector<double> radii = sweep_values(config, {1.0, 100.0, 60, true});
  const double z_a = nm_to_m(config.number("geometry.z_a_nm"));
  TwoLevelSystem perp = base, para = base;
  perp.dipole_orientation = perpendicular_dipole();
  para.dipole_orientation = parallel_dipole();

  ScenarioResult out;
  auto& t = out.table;
  t.title = "coupling |g| against transverse distance";
  set_columns(t, {{"r_perp_nm", "nm"}});
  for (double e : energies) {
    set_columns(t, {{"g_perp_" + label(e) + "keV", ""}, {"g_par_" + label(e) + "keV", ""}});
  }
  for (double r : radii) {
    std::vector<double> row{r};
    for (const auto& kin : kins) {
      row.push_back(std::abs(coupling_g(kin, perp, {nm_to_m(r), z_a})));
      row.push_back(std::abs(coupling_g(kin, para, {nm_to_m(r), z_a})));
    }
    t.add_row(std::move(row));
  }
  const auto kin = electron(config);
  t.note("g at configured geometry", complex_text(coupling_g(kin, base, geometry(config))));
  t.plot.x = 0;
  for (std::size_t c = 1; c < t.columns.size(); ++c) t.plot.y.push_back(c);
  t.plot.log_x = t.plot.log_y = true;
  t.plot.y_label = "|g|";
  return out;
}

ScenarioResult spectrum_scenario(const RunConfig& config) {
  const Setup s = common_setup(config);
  const auto grid = default_momentum_grid(s.kin, s.mod, static_cast<int>(config.integer("grid.bins_per_sigma")));
  const double spacing = s.mod.omega / s.kin.v0;
  ScenarioResult out;
  auto& t = out.table;
  t.title = "modulated electron momentum distribution after drift";
  set_columns(t, {{"q_over_spacing", ""}, {"density", ""}, {"re_psi", ""}, {"im_psi", ""}});
  const double scale = std::sqrt(spacing);
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const Complex a = grid.amplitudes[j] * scale;
    t.add_row({grid.q_values[j] / spacing, std::norm(a), a.real(), a.imag()});
  }
  note_common(t, s);
  const auto ladder = ladder_expectations(s.kin, s.mod, s.tls.omega_a);
  t.note("<b>", complex_text(ladder.s));
  t.note("<b^2>", complex_text(ladder.s2));
  t.note("grid norm", format_number(grid.norm()));
  t.plot = {0, {1}, false, false, "|psi|^2 per sideband spacing"};
  return out;
}

ScenarioResult eels_scenario(const RunConfig& config) {
  const Setup s = common_setup(config);
  const double q_a = s.tls.omega_a / s.kin.v0;
  const auto grid = default_momentum_grid(s.kin, s.mod, static_cast<int>(config.integer("grid.bins_per_sigma")));
  const SpectrumChange change = eels_change(s.g, s.rho, grid, q_a);
  const Complex sb = ladder_expectation_analytic(s.kin, s.mod, s.tls.omega_a, 1);

  ScenarioResult out;
  auto& t = out.table;
  t.title = "electron spectrum change after scattering";
  if (config.flag("eels.per_bin")) {
    set_columns(t, {{"n", ""}, {"k", "1/m"}, {"delta_rho_first_order", "m"}, {"delta_rho_second_order", "m"},
                    {"delta_rho_total", "m"}});
    const int per = std::max(change.bins_per_sideband, 1);
    for (Eigen::Index j = 0; j < change.k_values.size(); ++j) {
      const double n = std::floor(static_cast<double>(j - change.origin) / per + 0.5);
      t.add_row({n, change.k_values[j], change.first_order[j], change.second_order[j],
                 change.first_order[j] + change.second_order[j]});
    }
    t.plot = {1, {2, 3, 4}, false, false, "delta rho"};
  } else {
    const SidebandSpectrum sidebands = integrate_sidebands(change);
    set_columns(t, {{"n", ""}, {"delta_p_first_order", ""}, {"delta_p_second_order", ""}, {"delta_p_total", ""}});
    for (std::size_t i = 0; i < sidebands.size(); ++i) {
      t.add_row({static_cast<double>(sidebands.n[i]), sidebands.first_order[i], sidebands.second_order[i],
                 sidebands.total(i)});
    }
    t.plot = {0, {1, 2, 3}, false, false, "sideband population change"};
  }
  note_common(t, s);
  t.note("<b>", complex_text(sb));
  t.note("average energy change / hbar omega_a", format_number(average_energy_change(s.g, s.rho, sb)));
  t.note("energy moment of spectrum / hbar omega_a", format_number(spectrum_energy_moment(change, q_a)));
  return out;
}

ScenarioResult sweep_lp_scenario(const RunConfig& config) {
  const Setup s = common_setup(config);
  const int harmonic = static_cast<int>(config.integer("modulation.harmonic"));
  const double period_mm = drift_period(s.kin, s.mod.omega) / units::mm;
  const std::vector<double> lengths = sweep_values(config, {0.0, period_mm, 401, false});
  const bool matched = config.flag("modulation.phase_matched");

  struct Row {
    double s_abs;
    std::vector<double> signal;
  };
  const auto rows = parallel_map(lengths, [&](double L_mm) {
    ModulationParams mod = s.mod;
    mod.L_p = mm_to_m(L_mm);
    if (matched) {
      const Complex g_ref = std::abs(s.g) > 0.0 ? s.g : Complex{1.0, 0.0};
      const Complex rho_ref = std::abs(s.rho.rho12) > 0.0 ? s.rho.rho12 : Complex{1.0, 0.0};
      mod.g_m = std::polar(std::abs(mod.g_m),
                           phase_matched_modulation_phase(g_ref, rho_ref, mod.L_p, s.tls.omega_a, s.kin.v0, harmonic));
    }
    const auto spectrum = eels_modulated_closed_form(s.kin, mod, s.tls, s.g, s.rho, harmonic);
    const auto anti = antisymmetric_signal(spectrum, SpectrumComponent::first_order);
    std::vector<double> signal;
    for (std::size_t n = 0; n < 3; ++n) signal.push_back(n < anti.size() ? anti[n] : 0.0);
    return Row{std::abs(ladder_expectation_analytic(s.kin, mod, s.tls.omega_a, 1)), signal};
  });

  ScenarioResult out;
  auto& t = out.table;
  t.title = "bunching and coherent EELS signal against drift length";
  set_columns(t, {{"l_p_mm", "mm"}, {"s_abs", ""}, {"antisym_n1", ""}, {"antisym_n2", ""}, {"antisym_n3", ""}});
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    t.add_row({lengths[i], rows[i].s_abs, rows[i].signal[0], rows[i].signal[1], rows[i].signal[2]});
  }
  note_common(t, s);
  t.note("drift period mm", format_number(period_mm));
  t.note("classical bunching length mm",
         std::abs(s.mod.g_m) > 0.0 ? format_number(classical_bunching_length(s.kin, s.mod) / units::mm) : "inf");
  t.plot = {0, {2, 3, 4}, false, false, "delta rho(n) - delta rho(-n)"};
  return out;
}

ScenarioResult sweep_gm_scenario(const RunConfig& config) {
  const Setup s = common_setup(config);
  const std::vector<double> strengths = sweep_values(config, {0.02, 2.0, 199, false});
  for (double g : strengths) {
    if (!(g > 0.0)) throw ConfigError("sweep.start: |g_m| values must be positive");
  }
  const double sigma = momentum_spread(config, s.kin);
  const auto best = parallel_map(strengths, [&](double g_m) {
    return best_drift_for_modulation(s.kin, s.tls, s.g, sigma, g_m, 0.0, 0.0, 120);
  });
  ScenarioResult out;
  auto& t = out.table;
  t.title = "optimal coherent EELS signal against modulation strength";
  set_columns(t, {{"g_m_abs", ""}, {"best_l_p_mm", "mm"}, {"signal", ""}, {"raw_signal", ""}, {"n", ""}});
  std::size_t arg = 0;
  for (std::size_t i = 0; i < best.size(); ++i) {
    t.add_row({strengths[i], best[i].L_p / units::mm, best[i].signal, best[i].raw_signal, static_cast<double>(best[i].n)});
    if (best[i].signal > best[arg].signal) arg = i;
  }
  note_common(t, s);
  t.note("argmax g_m", format_number(strengths[arg]));
  t.note("argmax drift mm", format_number(best[arg].L_p / units::mm));
  t.note("quarter drift period mm", format_number(0.25 * drift_period(s.kin, s.tls.omega_a) / units::mm));
  t.plot = {0, {2}, false, false, "|delta rho(n) - delta rho(-n)| / |g rho12|"};
  return out;
}

LadderExpectations beam_electron(const RunConfig& config, const Setup& s) {
  if (config.choice("beam.s_mode") == "fixed") {
    const Complex sb = std::polar(config.number("beam.s_abs"), deg_to_rad(config.number("beam.s_phase_deg")));
    return {sb, 0.0};
  }
  return ladder_expectations(s.kin, s.mod, s.tls.omega_a);
}

ScenarioResult steady_scenario(const RunConfig& config) {
  const Setup s = common_setup(config);
  const LadderExpectations electron_state = beam_electron(config, s);
  const std::vector<double> currents = sweep_values(config, {1e-8, 1.0, 161, true});
  std::vector<LadderExpectations> compare{electron_state};
  for (double v : config.list("beam.s_values")) compare.push_back({v, 0.0});

  std::vector<std::vector<double>> chunks(currents.size());
  const auto rows = parallel_map(currents, [&](double I_ma) {
    const BeamParams b = BeamParams::from_current(ma_to_a(I_ma), s.tls.tau);
    const Matrix4c M = perturbation_matrix(s.g, electron_state.s, electron_state.s2).value;
    const DensityMatrix2 rho = steady_state_nullspace(effective_hamiltonian(M, b));
    std::vector<double> row{I_ma, rho.rho11, rho.rho22, rho.rho12.real(), rho.rho12.imag()};
    const auto sweep = excited_state_vs_current(s.g, compare, s.tls.tau, {ma_to_a(I_ma)});
    for (std::size_t k = 1; k < compare.size(); ++k) row.push_back(sweep[0].rho22[k]);
    return row;
  });

  ScenarioResult out;
  auto& t = out.table;
  t.title = "steady-state excitation against beam current";
  set_columns(t, {{"current_ma", "mA"}, {"rho11", ""}, {"rho22", ""}, {"re_rho12", ""}, {"im_rho12", ""}});
  for (double v : config.list("beam.s_values")) set_columns(t, {{"rho22_s" + label(v), ""}});
  for (const auto& row : rows) t.add_row(row);
  note_common(t, s);
  t.note("<b> of beam electrons", complex_text(electron_state.s));
  t.note("saturation current mA (rho22 = 1/4)",
         format_number(saturation_current(s.g, electron_state, s.tls.tau) / units::ma));
  t.plot = {0, {2}, true, false, "rho22"};
  for (std::size_t c = 5; c < t.columns.size(); ++c) t.plot.y.push_back(c);
  return out;
}

ScenarioResult rabi_scenario(const RunConfig& config) {
  const Setup s = common_setup(config);
  const LadderExpectations electron_state = beam_electron(config, s);
  const BeamParams b = beam(config, s.tls);
  const double duration = ns_to_s(config.number("beam.duration_ns"));
  double dt = ns_to_s(config.number("beam.dt_ns"));
  if (dt == 0.0) dt = std::min(b.period, s.tls.tau / 100.0);
  if (duration / dt > 2e8) {
    throw ConfigError("beam.duration_ns: more than 2e8 integration steps; lower the duration or the current");
  }
  const auto M = perturbation_matrix(s.g, electron_state.s, electron_state.s2);
  const Evolution evo =
      evolve(s.rho, M.value, b, {duration, dt, static_cast<int>(config.integer("beam.samples"))});
  const RabiReport report = rabi_report(s.g, electron_state.s, b);
  const Matrix4c h = effective_hamiltonian(M.value, b);

  ScenarioResult out;
  auto& t = out.table;
  t.title = "atom driven by a periodic electron train";
  set_columns(t, {{"t_ns", "ns"}, {"rho11", ""}, {"rho22", ""}, {"re_rho12", ""}, {"im_rho12", ""},
                  {"rho22_discrete", ""}});
  for (std::size_t i = 0; i < evo.continuous.t.size(); ++i) {
    const auto& r = evo.continuous.states[i];
    const double discrete = i < evo.discrete.states.size() ? evo.discrete.states[i].rho22 : std::nan("");
    t.add_row({evo.continuous.t[i] / units::ns, r.rho11, r.rho22, r.rho12.real(), r.rho12.imag(), discrete});
  }
  note_common(t, s);
  t.note("<b> of beam electrons", complex_text(electron_state.s));
  t.note("electron period ns", format_number(b.period / units::ns));
  t.note("oscillatory", report.oscillatory ? "true" : "false");
  t.note("threshold ratio (T/tau)/(8|gs|)", format_number(report.threshold_ratio));
  t.note("omega_R rad/s", format_number(report.omega_R));
  t.note("omega from eigenvalues rad/s", format_number(rabi_frequency_from_eigenvalues(h)));
  if (std::abs(s.g * electron_state.s) > 0.0) {
    t.note("minimum electrons per lifetime", format_number(minimum_electron_count(s.g, electron_state.s)));
  }
  const auto closed = steady_state_closed_form(s.g, electron_state.s, b);
  const auto null = steady_state_nullspace(h);
  t.note("steady rho22 closed form", format_number(closed.value.rho22));
  t.note("steady rho22 null vector", format_number(null.rho22));
  for (const auto& w : closed.warnings) t.note("warning", w);
  for (const auto& w : M.warnings) t.note("warning", w);
  t.plot = {0, {2, 5}, false, false, "rho22"};
  return out;
}

ScenarioResult entangle_scenario(const RunConfig& config) {
  const Complex g1 = std::polar(config.number("entangle.g1_abs"), deg_to_rad(config.number("entangle.g1_phase_deg")));
  const Complex g2 = std::polar(config.number("entangle.g2_abs"), deg_to_rad(config.number("entangle.g2_phase_deg")));
  const int shift = static_cast<int>(config.integer("entangle.shift"));
  const TwoAtomJointState state = sequential_scatter(g1, g2, AtomState::ground(), AtomState::ground());
  const PostSelectedPair pair = postselect(state, shift);

  ScenarioResult out;
  auto& t = out.table;
  t.title = "two-atom state after one electron";
  set_columns(t, {{"m", ""}, {"a1", ""}, {"a2", ""}, {"re", ""}, {"im", ""}});
  for (int m = -TwoAtomJointState::kMaxShift; m <= TwoAtomJointState::kMaxShift; ++m)
    for (int a1 = 1; a1 <= 2; ++a1)
      for (int a2 = 1; a2 <= 2; ++a2) {
        const Complex c = state.at(m, a1, a2);
        t.add_row({static_cast<double>(m), static_cast<double>(a1), static_cast<double>(a2), c.real(), c.imag()});
      }
  t.note("post-selected shift", std::to_string(shift));
  t.note("probability", format_number(pair.probability));
  t.note("concurrence", format_number(concurrence(pair)));
  t.note("norm deficit", format_number(1.0 - state.norm()));
  for (int a1 = 1; a1 <= 2; ++a1)
    for (int a2 = 1; a2 <= 2; ++a2)
      t.note("pair amplitude " + std::to_string(a1) + std::to_string(a2), complex_text(pair.amplitude(a1, a2)));
  t.plot = {0, {3, 4}, false, false, "amplitude"};
  out.json = to_json(state).dump(2) + "\n";
  return out;
}

ScenarioResult phase_budget_scenario(const RunConfig& config) {
  const ElectronKinematics kin = electron(config);
  const TwoLevelSystem tls = atom(config);
  const double de = config.number("budget.delta_e_ev");
  const double dtheta = config.number("budget.delta_theta_mrad") * units::mrad;
  const std::vector<double> lengths = sweep_values(config, {1.0, 40.0, 40, false});
  ScenarioResult out;
  auto& t = out.table;
  t.title = "propagation phase uncertainty";
  set_columns(t, {{"l_p_mm", "mm"}, {"energy_term_rad", "rad"}, {"angle_term_rad", "rad"}, {"total_rad", "rad"},
                  {"total_over_2pi", ""}});
  for (double L : lengths) {
    const auto p = phase_uncertainty(kin, tls, mm_to_m(L), de, dtheta);
    t.add_row({L, p.energy_term, p.angle_term, p.total, p.total / (2.0 * pi)});
  }
  const auto at = phase_uncertainty(kin, tls, drift_length(config), de, dtheta);
  t.note("energy term / 2pi at configured drift", format_number(at.energy_term / (2.0 * pi)));
  t.note("angle term / 2pi at configured drift", format_number(at.angle_term / (2.0 * pi)));
  t.plot = {0, {1, 2, 3}, false, false, "phase uncertainty [rad]"};
  return out;
}

}  // namespace

ScenarioResult run_scenario(const RunConfig& config) {
  switch (config.scenario) {
    case Scenario::coupling:
      return coupling_scenario(config);
    case Scenario::spectrum:
      return spectrum_scenario(config);
    case Scenario::eels:
      return eels_scenario(config);
    case Scenario::sweep_lp:
      return sweep_lp_scenario(config);
    case Scenario::sweep_gm:
      return sweep_gm_scenario(config);
    case Scenario::steady:
      return steady_scenario(config);
    case Scenario::rabi:
      return rabi_scenario(config);
    case Scenario::entangle:
      return entangle_scenario(config);
    case Scenario::phase_budget:
      return phase_budget_scenario(config);
  }
  throw ConfigError("unknown scenario");
}

}  // namespace febe::cli
