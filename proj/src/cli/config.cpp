#include "febe/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "febe/csv.hpp"

namespace febe::cli {

namespace {

const std::vector<std::pair<Scenario, std::string>>& scenario_table() {
  static const std::vector<std::pair<Scenario, std::string>> table = {
      {Scenario::coupling, "coupling"}, {Scenario::spectrum, "spectrum"}, {Scenario::eels, "eels"},
      {Scenario::sweep_lp, "sweep-lp"}, {Scenario::sweep_gm, "sweep-gm"}, {Scenario::steady, "steady"},
      {Scenario::rabi, "rabi"},         {Scenario::entangle, "entangle"}, {Scenario::phase_budget, "phase-budget"},
  };
  return table;
}

constexpr double kInf = 1e300;

KeySpec number(std::string key, std::string unit, std::string def, double lo, double hi, std::string help) {
  return {std::move(key), ValueKind::number, std::move(unit), std::move(def), lo, hi, {}, std::move(help)};
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(const std::string& where, const std::string& key, const std::string& what) {
  throw ConfigError(where + ": key '" + key + "': " + what);
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc() && result.ptr == end && std::isfinite(out);
}

// Splits "60 keV" into number text and unit token.
std::pair<std::string, std::string> split_unit(const std::string& text) {
  const auto space = text.find_first_of(" \t");
  if (space == std::string::npos) return {text, ""};
  return {trim(text.substr(0, space)), trim(text.substr(space))};
}

double parse_number(const KeySpec& spec, const std::string& raw, const std::string& where) {
  auto [number_text, unit] = split_unit(raw);
  if (!unit.empty()) {
    if (spec.unit.empty()) fail(where, spec.key, "dimensionless value given unit '" + unit + "'");
    if (lower(unit) != lower(spec.unit)) {
      fail(where, spec.key, "unit mismatch: expected " + spec.unit + ", got '" + unit + "'");
    }
  }
  double value = 0.0;
  if (!parse_double(number_text, value)) fail(where, spec.key, "cannot parse '" + raw + "' as a number");
  if (value < spec.min || value > spec.max) {
    std::ostringstream msg;
    msg << where << ": key '" << spec.key << "': value " << format_number(value) << " outside ["
        << format_number(spec.min) << ", " << format_number(spec.max) << "]";
    throw ValidationError(msg.str());
  }
  return value;
}

Value parse_value(const KeySpec& spec, const std::string& raw, const std::string& where) {
  switch (spec.kind) {
    case ValueKind::number:
      return parse_number(spec, raw, where);
    case ValueKind::integer: {
      const double v = parse_number(spec, raw, where);
      if (v != std::floor(v)) fail(where, spec.key, "expected an integer, got '" + raw + "'");
      return static_cast<long>(v);
    }
    case ValueKind::boolean: {
      const std::string v = lower(raw);
      if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
      if (v == "false" || v == "0" || v == "no" || v == "off") return false;
      fail(where, spec.key, "expected true or false, got '" + raw + "'");
    }
    case ValueKind::choice: {
      const std::string v = lower(raw);
      if (std::find(spec.choices.begin(), spec.choices.end(), v) == spec.choices.end()) {
        std::string allowed;
        for (const auto& c : spec.choices) allowed += (allowed.empty() ? "" : "|") + c;
        fail(where, spec.key, "expected one of " + allowed + ", got '" + raw + "'");
      }
      return v;
    }
    case ValueKind::list: {
      std::vector<double> out;
      std::stringstream ss(raw);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(parse_number(spec, trim(item), where));
      if (out.empty()) fail(where, spec.key, "empty list");
      return out;
    }
  }
  fail(where, spec.key, "unsupported value kind");
}

const KeySpec* find_spec(const std::string& key) {
  for (const auto& spec : config_schema())
    if (spec.key == key) return &spec;
  return nullptr;
}

void assign(RunConfig& config, std::string_view line, const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value', got '" + trim(line) + "'");
  const std::string key = trim(line.substr(0, eq));
  const std::string raw = trim(line.substr(eq + 1));
  // Lets a resolved-config.txt be fed back in for the same scenario.
  if (key == "scenario") {
    if (raw != scenario_name(config.scenario)) {
      fail(where, key, "file is for '" + raw + "', not '" + scenario_name(config.scenario) + "'");
    }
    return;
  }
  const KeySpec* spec = find_spec(key);
  if (spec == nullptr) throw ConfigError(where + ": unknown key '" + key + "'");
  if (raw.empty()) fail(where, key, "missing value");
  config.values[key] = parse_value(*spec, raw, where);
  config.sources[key] = where;
}

std::string format_value(const Value& value) {
  struct {
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(const std::vector<double>& v) const {
      std::string out;
      for (double x : v) out += (out.empty() ? "" : ", ") + format_number(x);
      return out;
    }
  } visitor;
  return std::visit(visitor, value);
}

template <typename T>
const T& get(const RunConfig& config, const std::string& key) {
  const auto it = config.values.find(key);
  if (it == config.values.end()) throw ConfigError("internal: key '" + key + "' missing from configuration");
  const T* value = std::get_if<T>(&it->second);
  if (value == nullptr) throw ConfigError("internal: key '" + key + "' has a different type");
  return *value;
}

}  // namespace

Scenario parse_scenario(std::string_view name) {
  for (const auto& [scenario, text] : scenario_table())
    if (text == name) return scenario;
  std::string allowed;
  for (const auto& n : scenario_names()) allowed += (allowed.empty() ? "" : ", ") + n;
  throw ConfigError("unknown scenario '" + std::string(name) + "' (expected one of " + allowed + ")");
}

std::string scenario_name(Scenario scenario) {
  for (const auto& [s, text] : scenario_table())
    if (s == scenario) return text;
  return "unknown";
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& entry : scenario_table()) out.push_back(entry.second);
  return out;
}

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = [] {
    std::vector<KeySpec> s;
    s.push_back(number("electron.kinetic_energy_kev", "keV", "60", 1e-6, 1e5, "electron kinetic energy"));
    s.push_back(number("electron.energy_spread_ev", "eV", "0.02", 1e-9, 1e3,
                       "rms energy spread; sets sigma_q = dE / (hbar v0)"));
    s.push_back(number("atom.wavelength_nm", "nm", "620", 1e-3, 1e9, "transition wavelength"));
    s.push_back(number("atom.lifetime_ns", "ns", "4.5", 1e-12, 1e12, "excited-state lifetime"));
    s.push_back(number("atom.dipole_length_nm", "nm", "0.27", 0.0, 1e3, "transition dipole length |l_21|"));
    s.push_back(number("atom.dipole_angle_deg", "deg", "0", -360.0, 360.0,
                       "dipole angle from the transverse axis toward the beam axis"));
    s.push_back(number("atom.excited_population", "", "0.5", 0.0, 1.0, "initial rho22"));
    s.push_back(number("atom.coherence", "", "1", 0.0, 1.0, "|rho12| as a fraction of its pure-state maximum"));
    s.push_back(number("atom.coherence_phase_deg", "deg", "0", -360.0, 360.0, "phase of rho12"));
    s.push_back(number("geometry.r_perp_nm", "nm", "10", 1e-6, 1e9, "transverse atom-trajectory distance"));
    s.push_back(number("geometry.z_a_nm", "nm", "0", -1e12, 1e12, "longitudinal atom position"));
    s.push_back({"coupling.override", ValueKind::boolean, "", "false", 0, 0, {}, "use coupling.g_abs instead of geometry"});
    s.push_back(number("coupling.g_abs", "", "1e-3", 0.0, 1.0, "|g| when overridden"));
    s.push_back(number("coupling.g_phase_deg", "deg", "0", -360.0, 360.0, "phase of g when overridden"));
    s.push_back({"coupling.energies_kev", ValueKind::list, "keV", "0.6, 6, 60", 1e-6, 1e5, {},
                 "energies compared by the coupling scenario"});
    s.push_back(number("modulation.harmonic", "", "1", 1, 20, "transition harmonic l, omega = omega_a / l"));
    s.back().kind = ValueKind::integer;
    s.push_back(number("modulation.g_m_abs", "", "0.68", 0.0, 50.0, "modulation strength |g_m|"));
    s.push_back(number("modulation.g_m_phase_deg", "deg", "0", -360.0, 360.0, "phase of g_m"));
    s.push_back({"modulation.phase_matched", ValueKind::boolean, "", "true", 0, 0, {},
                 "choose the g_m phase that makes the coherent signal anti-symmetric"});
    s.push_back(number("modulation.l_p_mm", "mm", "9.82", 0.0, 1e6, "drift length modulator to atom"));
    s.push_back(number("modulation.l_s_mm", "mm", "0", 0.0, 1e6, "drift length source to modulator"));
    s.push_back(number("grid.bins_per_sigma", "", "16", 8, 4096, "momentum bins per sigma_q"));
    s.back().kind = ValueKind::integer;
    s.push_back({"eels.per_bin", ValueKind::boolean, "", "false", 0, 0, {},
                 "write every momentum bin instead of per-sideband sums"});
    s.push_back(number("beam.current_ma", "mA", "1e-7", 1e-30, 1e6, "average beam current"));
    s.push_back(number("beam.duration_ns", "ns", "50", 1e-12, 1e9, "evolution time"));
    s.push_back(number("beam.dt_ns", "ns", "0", 0.0, 1e9, "integration step, 0 picks min(T, tau / 100)"));
    s.push_back({"beam.s_mode", ValueKind::choice, "", "modulation", 0, 0, {"modulation", "fixed"},
                 "take <b> from the modulated packet or from beam.s_abs"});
    s.push_back(number("beam.s_abs", "", "0.58", 0.0, 1.0, "|<b>| in fixed mode"));
    s.push_back(number("beam.s_phase_deg", "deg", "0", -360.0, 360.0, "phase of <b> in fixed mode"));
    s.push_back({"beam.s_values", ValueKind::list, "", "0, 0.1, 0.58", 0.0, 1.0, {},
                 "|<b>| values compared by the steady scenario"});
    s.push_back(number("beam.samples", "", "2000", 1, 1e7, "rows written by the rabi scenario"));
    s.back().kind = ValueKind::integer;
    s.push_back(number("entangle.g1_abs", "", "1e-3", 0.0, 0.0999, "|g1|"));
    s.push_back(number("entangle.g1_phase_deg", "deg", "0", -360.0, 360.0, "phase of g1"));
    s.push_back(number("entangle.g2_abs", "", "1e-3", 0.0, 0.0999, "|g2| (includes the inter-atom phase)"));
    s.push_back(number("entangle.g2_phase_deg", "deg", "0", -360.0, 360.0, "phase of g2"));
    s.push_back(number("entangle.shift", "", "-1", -2, 2, "post-selected electron shift"));
    s.back().kind = ValueKind::integer;
    s.push_back(number("budget.delta_e_ev", "eV", "0.5", 0.0, 1e6, "energy spread for the phase budget"));
    s.push_back(number("budget.delta_theta_mrad", "mrad", "2", 0.0, 1e3, "angular spread for the phase budget"));
    s.push_back(number("sweep.start", "", "0", -1e300, kInf, "sweep start, scenario units"));
    s.push_back(number("sweep.stop", "", "0", -1e300, kInf, "sweep stop, scenario units"));
    s.push_back(number("sweep.count", "", "0", 0, 1e6, "sweep points, 0 keeps the scenario default range"));
    s.back().kind = ValueKind::integer;
    s.push_back({"sweep.scale", ValueKind::choice, "", "default", 0, 0, {"default", "linear", "log"}, "sweep spacing"});
    return s;
  }();
  return schema;
}

double RunConfig::number(const std::string& key) const { return get<double>(*this, key); }
long RunConfig::integer(const std::string& key) const { return get<long>(*this, key); }
bool RunConfig::flag(const std::string& key) const { return get<bool>(*this, key); }
const std::string& RunConfig::choice(const std::string& key) const { return get<std::string>(*this, key); }
const std::vector<double>& RunConfig::list(const std::string& key) const {
  return get<std::vector<double>>(*this, key);
}

std::string RunConfig::resolved_text() const {
  std::ostringstream os;
  os << "scenario = " << scenario_name(scenario) << '\n';
  for (const auto& spec : config_schema()) os << spec.key << " = " << format_value(values.at(spec.key)) << '\n';
  return os.str();
}

RunConfig parse_config(Scenario scenario, std::string_view text, const std::vector<Override>& overrides,
                       std::string_view source_name) {
  RunConfig config;
  config.scenario = scenario;
  for (const auto& spec : config_schema()) {
    config.values[spec.key] = parse_value(spec, spec.default_value, "default");
  }
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }
    assign(config, line, std::string(source_name) + " line " + std::to_string(line_no));
    if (end == text.size()) break;
  }
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    assign(config, overrides[i].assignment, "--set #" + std::to_string(i + 1));
  }
  return config;
}

}  // namespace febe::cli
