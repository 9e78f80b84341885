#include "febe/cli/app.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "febe/cli/config.hpp"
#include "febe/cli/scenarios.hpp"
#include "febe/types.hpp"
#include "febe/version.hpp"

namespace febe::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string scenario_list() {
  std::string s;
  for (const auto& name : scenario_names()) s += (s.empty() ? "" : ", ") + name;
  return s;
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free-electron driven two-level system simulator", "febe"};
  app.set_version_flag("--version", std::string(kVersion));
  std::string scenario_text, config_path, out_dir = ".";
  std::vector<std::string> assignments;
  bool svg = false;
  app.add_option("scenario", scenario_text, "one of: " + scenario_list())->required();
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", assignments, "override, key=value (repeatable)")->take_all();
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--svg", svg, "also write an SVG plot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "febe: " << e.what() << "\n";
    return kExitConfig;
  }

  RunConfig config;
  try {
    const Scenario scenario = parse_scenario(scenario_text);
    const std::string text = config_path.empty() ? std::string{} : read_file(config_path);
    std::vector<Override> overrides;
    for (auto& a : assignments) overrides.push_back({a});
    config = parse_config(scenario, text, overrides, config_path.empty() ? "config" : config_path);
  } catch (const ValidationError& e) {
    err << "febe: validation error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ConfigError& e) {
    err << "febe: config error: " << e.what() << "\n";
    return kExitConfig;
  }

  const std::string name = scenario_name(config.scenario);
  try {
    const ScenarioResult result = run_scenario(config);
    const std::string resolved = config.resolved_text();
    fs::create_directories(out_dir);
    std::ostringstream csv;
    result.table.write_csv(csv, resolved);
    write_file(fs::path(out_dir) / (name + ".csv"), csv.str());
    write_file(fs::path(out_dir) / "resolved-config.txt", resolved);
    if (svg) write_file(fs::path(out_dir) / (name + ".svg"), render_svg(result.table));
    if (!result.json.empty()) write_file(fs::path(out_dir) / (name + ".json"), result.json);
    out << "wrote " << (fs::path(out_dir) / (name + ".csv")).string() << "\n";
  } catch (const ConfigError& e) {
    err << "febe: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "febe: validation error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const GridError& e) {
    err << "febe: grid error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "febe: error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace febe::cli
