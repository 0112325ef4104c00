#pragma once

// Scenario files: a JSON description of a configuration space, named
// generators and symmetries, and an ordered list of numerical checks.  Running
// a scenario produces a deterministic JSON report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlsh/errors.hpp"

namespace nlsh::cli {

inline constexpr int kSchemaVersion = 1;
const char* tool_version();

struct CheckInfo {
  std::string name;
  std::string anchor;
  std::string summary;
};

/// Every check a scenario may request, in a stable order.
const std::vector<CheckInfo>& check_catalog();

/// Configuration error tied to a JSON pointer inside the scenario document.
class ScenarioError : public ConfigError {
 public:
  ScenarioError(std::string pointer, const std::string& what) : ConfigError(what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// 1-based line and column of a JSON pointer's value in `text`, falling back to
/// the nearest enclosing value that exists.
std::pair<int, int> locate(const std::string& text, const std::string& pointer);

/// "source:line:col: error: message" for a parse or schema error.
std::string diagnostic(const std::string& source, const std::string& text, const std::exception& e);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<double> hbar;
};

struct CheckResult {
  std::string name;
  std::string status;  // pass | fail | error
  double max_residual = 0.0;
  double tolerance = 0.0;
  nlohmann::json details;
};

class Scenario {
 public:
  /// Parses and validates; throws ScenarioError or nlohmann parse errors.
  static Scenario parse(const std::string& text, const RunOptions& opts = {});

  const std::string& name() const;
  std::uint64_t seed() const;
  double hbar() const;
  std::size_t check_count() const;

  /// Executes the checks in declared order.
  std::vector<CheckResult> run() const;

  ~Scenario();
  Scenario(Scenario&&) noexcept;
  Scenario& operator=(Scenario&&) noexcept;

 private:
  struct Impl;
  explicit Scenario(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

nlohmann::json make_report(const Scenario& s, const std::vector<CheckResult>& results);

/// Serialised report, terminated by a newline.
std::string report_text(const nlohmann::json& report);

/// Fixed-width summary table of a report.
std::string report_table(const nlohmann::json& report);

/// 0 when every check passed, 1 otherwise.
int exit_code(const std::vector<CheckResult>& results);

std::vector<std::string> bundled_scenarios();
/// JSON text of a bundled scenario, if the name exists.
std::optional<std::string> bundled_scenario(const std::string& name);

}  // namespace nlsh::cli
