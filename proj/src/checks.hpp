#pragma once

// Internal pieces of the scenario runner: a pointer-tracking view of the JSON
// document, named generator and symmetry specifications, and the check table.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nlsh/scenario.hpp"
#include "nlsh/symmetry.hpp"

namespace nlsh::cli::detail {

using json = nlohmann::json;

/// A JSON value together with its pointer, so schema errors can be located.
class Node {
 public:
  Node(const json& value, std::string pointer) : value_(&value), pointer_(std::move(pointer)) {}

  const json& value() const { return *value_; }
  const std::string& pointer() const { return pointer_; }

  [[noreturn]] void fail(const std::string& message) const;

  /// Requires an object whose keys are all in `allowed`.
  void object(const std::vector<std::string>& allowed) const;
  bool has(const std::string& key) const;
  Node at(const std::string& key) const;
  std::optional<Node> find(const std::string& key) const;
  std::vector<Node> items() const;

  double number() const;
  double positive() const;
  long integer(long lo, long hi) const;
  std::uint64_t u64() const;
  std::string string() const;
  bool boolean() const;
  /// A number or [re, im].
  cplx complex() const;
  /// [a, b] with complex entries.
  IndexPair pair() const;
  std::vector<double> numbers() const;
  std::vector<std::string> strings() const;

  double number_or(const std::string& key, double fallback) const;
  long integer_or(const std::string& key, long fallback, long lo, long hi) const;
  cplx complex_or(const std::string& key, cplx fallback) const;

 private:
  const json* value_;
  std::string pointer_;
};

struct GenSpec {
  std::function<Generator(const ConfigSpace&)> make;
  int threshold = 1;
};

struct SymSpec {
  bool finite = false;
  std::function<FiniteSymmetry(const ConfigSpace&, int n_max)> make_finite;
  std::function<FiniteSymmetry(const ConfigSpace&, int n_max)> make_inverse;
  std::function<InfinitesimalSymmetry(const ConfigSpace&, int n_max, double hbar)> make_infinitesimal;
};

GenSpec parse_generator(const Node& node, const ConfigSpace& space);
SymSpec parse_symmetry(const Node& node, const ConfigSpace& space, int n_max);
PointSymmetrySpec parse_point(const Node& node);

struct Context {
  ConfigSpace space{1};
  int n_max = 3;
  std::uint64_t seed = 0;
  double hbar = 1.0;
  std::map<std::string, GenSpec> generators;
  std::map<std::string, SymSpec> symmetries;
};

struct Outcome {
  double residual = 0.0;
  json details = json::object();
};

using Runner = std::function<Outcome()>;

/// Validates the check's parameters against the context and returns the deferred computation.
using Prepare = std::function<Runner(const std::shared_ptr<const Context>&, const Node& params, std::uint64_t seed)>;

struct CheckDef {
  CheckInfo info;
  double tolerance = 0.0;
  std::vector<std::string> keys;
  Prepare prepare;
};

const std::vector<CheckDef>& check_defs();

/// Bundled scenario texts, generated at build time.
const std::vector<std::pair<std::string, std::string>>& bundled();

}  // namespace nlsh::cli::detail
