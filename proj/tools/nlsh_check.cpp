// Command-line front end: runs scenario files and writes verification reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nlsh/scenario.hpp"

namespace {

constexpr int kConfigError = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(const std::string& scenario, const nlsh::cli::RunOptions& opts, const std::string& out) {
  std::string source = scenario;
  std::optional<std::string> text = read_file(scenario);
  if (!text) {
    text = nlsh::cli::bundled_scenario(scenario);
    source = "<bundled:" + scenario + ">";
  }
  if (!text) {
    std::cerr << scenario << ":1:1: error: no such file or bundled scenario\n";
    return kConfigError;
  }

  std::optional<nlsh::cli::Scenario> parsed;
  try {
    parsed.emplace(nlsh::cli::Scenario::parse(*text, opts));
  } catch (const nlohmann::json::exception& e) {
    std::cerr << nlsh::cli::diagnostic(source, *text, e) << "\n";
    return kConfigError;
  } catch (const nlsh::ConfigError& e) {
    std::cerr << nlsh::cli::diagnostic(source, *text, e) << "\n";
    return kConfigError;
  }

  const auto results = parsed->run();
  const auto report = nlsh::cli::make_report(*parsed, results);
  std::cout << nlsh::cli::report_table(report);
  if (!out.empty()) {
    std::ofstream file(out, std::ios::binary);
    if (!file) {
      std::cerr << out << ": error: cannot open report file for writing\n";
      return kConfigError;
    }
    file << nlsh::cli::report_text(report);
  }
  return nlsh::cli::exit_code(results);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for nonlinear Schrodinger hierarchies"};
  app.set_version_flag("--version", nlsh::cli::tool_version());
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run a scenario file or bundled scenario");
  std::string scenario, out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol, hbar;
  run_cmd->add_option("--scenario", scenario, "Scenario JSON file or bundled scenario name")->required();
  run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--out", out, "Write the JSON report to this path");
  run_cmd->add_option("--tol", tol, "Override the tolerance of every check")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--hbar", hbar, "Override the scenario hbar")->check(CLI::PositiveNumber);

  auto* list_cmd = app.add_subcommand("list-checks", "List every check with what it verifies");
  auto* scen_cmd = app.add_subcommand("list-scenarios", "List the bundled scenarios");
  auto* show_cmd = app.add_subcommand("show-scenario", "Print a bundled scenario");
  std::string show_name;
  show_cmd->add_option("name", show_name, "Bundled scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (*run_cmd) return run(scenario, {seed, tol, hbar}, out);
  if (*list_cmd) {
    for (const auto& c : nlsh::cli::check_catalog()) std::cout << c.name << "  [" << c.anchor << "]  " << c.summary << "\n";
    return 0;
  }
  if (*scen_cmd) {
    for (const auto& name : nlsh::cli::bundled_scenarios()) std::cout << name << "\n";
    return 0;
  }
  if (*show_cmd) {
    const auto text = nlsh::cli::bundled_scenario(show_name);
    if (!text) {
      std::cerr << "error: no bundled scenario '" << show_name << "'\n";
      return kConfigError;
    }
    std::cout << *text;
    return 0;
  }
  return kConfigError;
}
