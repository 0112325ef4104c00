#include "nlsh/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "checks.hpp"
#include "nlsh/operators.hpp"

#ifndef NLSH_VERSION
#define NLSH_VERSION "0.0.0"
#endif

namespace nlsh::cli {

using detail::json;
using detail::Node;

const char* tool_version() { return NLSH_VERSION; }

namespace detail {

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

const char* type_name(const json& j) { return j.type_name(); }

}  // namespace

void Node::fail(const std::string& message) const { throw ScenarioError(pointer_, message); }

void Node::object(const std::vector<std::string>& allowed) const {
  if (!value_->is_object()) fail(std::string("expected an object, found ") + type_name(*value_));
  for (const auto& [key, v] : value_->items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ScenarioError(pointer_ + "/" + escape_token(key), "unknown key '" + key + "'");
    }
  }
}

bool Node::has(const std::string& key) const { return value_->is_object() && value_->contains(key); }

Node Node::at(const std::string& key) const {
  if (!value_->is_object()) fail(std::string("expected an object, found ") + type_name(*value_));
  if (!value_->contains(key)) fail("missing required key '" + key + "'");
  return Node(value_->at(key), pointer_ + "/" + escape_token(key));
}

std::optional<Node> Node::find(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return at(key);
}

std::vector<Node> Node::items() const {
  if (!value_->is_array()) fail(std::string("expected an array, found ") + type_name(*value_));
  std::vector<Node> out;
  for (std::size_t i = 0; i < value_->size(); ++i) out.emplace_back(value_->at(i), pointer_ + "/" + std::to_string(i));
  return out;
}

double Node::number() const {
  if (!value_->is_number()) fail(std::string("expected a number, found ") + type_name(*value_));
  const double v = value_->get<double>();
  if (!std::isfinite(v)) fail("number must be finite");
  return v;
}

double Node::positive() const {
  const double v = number();
  if (!(v > 0.0)) fail("expected a positive number");
  return v;
}

long Node::integer(long lo, long hi) const {
  if (!value_->is_number_integer()) fail(std::string("expected an integer, found ") + type_name(*value_));
  const long v = value_->get<long>();
  if (v < lo || v > hi) fail("integer " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

std::uint64_t Node::u64() const {
  if (!value_->is_number_unsigned()) fail("expected a non-negative integer");
  return value_->get<std::uint64_t>();
}

std::string Node::string() const {
  if (!value_->is_string()) fail(std::string("expected a string, found ") + type_name(*value_));
  return value_->get<std::string>();
}

bool Node::boolean() const {
  if (!value_->is_boolean()) fail(std::string("expected a boolean, found ") + type_name(*value_));
  return value_->get<bool>();
}

cplx Node::complex() const {
  if (value_->is_number()) return {number(), 0.0};
  const auto parts = items();
  if (parts.size() != 2) fail("expected a number or [re, im]");
  return {parts[0].number(), parts[1].number()};
}

IndexPair Node::pair() const {
  const auto parts = items();
  if (parts.size() != 2) fail("expected an index pair [a, b]");
  return {parts[0].complex(), parts[1].complex()};
}

std::vector<double> Node::numbers() const {
  std::vector<double> out;
  for (const Node& n : items()) out.push_back(n.number());
  return out;
}

std::vector<std::string> Node::strings() const {
  std::vector<std::string> out;
  for (const Node& n : items()) out.push_back(n.string());
  return out;
}

double Node::number_or(const std::string& key, double fallback) const {
  const auto n = find(key);
  return n ? n->number() : fallback;
}

long Node::integer_or(const std::string& key, long fallback, long lo, long hi) const {
  const auto n = find(key);
  return n ? n->integer(lo, hi) : fallback;
}

cplx Node::complex_or(const std::string& key, cplx fallback) const {
  const auto n = find(key);
  return n ? n->complex() : fallback;
}

namespace {

char axis_of(const Node& n) {
  const std::string s = n.string();
  if (s != "x" && s != "y" && s != "z") n.fail("spin axis must be x, y or z");
  return s[0];
}

DenseMatrix matrix_of(const Node& node, const ConfigSpace& space) {
  const std::string m = node.at("matrix").string();
  if (m == "laplacian") return grid_laplacian(space);
  if (m == "gradient") return grid_gradient(space);
  if (m == "identity") return DenseMatrix::identity(space.size());
  if (m == "shift") return grid_shift(space, node.integer_or("steps", 1, -1000000, 1000000));
  if (m == "pauli") return spin_pauli(space, node.has("axis") ? axis_of(node.at("axis")) : 'x');
  if (m == "spin-rotation") return spin_rotation_generator(space, node.has("axis") ? axis_of(node.at("axis")) : 'x');
  if (m == "hopping") {
    // nearest-neighbour hopping on the ring of all sites
    DenseMatrix A(space.size());
    const std::size_t L = space.size();
    for (std::size_t x = 0; x < L && L > 1; ++x) {
      A(x, (x + 1) % L) += 1.0;
      A((x + 1) % L, x) += 1.0;
    }
    return A;
  }
  node.at("matrix").fail("unknown matrix '" + m + "'");
}

std::vector<cplx> pair_profile(const Node& node, const ConfigSpace& space) {
  const std::string profile = node.has("profile") ? node.at("profile").string() : "contact";
  const std::size_t L = space.size();
  std::vector<cplx> v(L * L);
  for (std::size_t x = 0; x < L; ++x)
    for (std::size_t y = 0; y < L; ++y) {
      if (profile == "contact") {
        v[x * L + y] = x == y ? 1.0 : 0.0;
      } else if (profile == "cosine") {
        const double d = space.grid() ? space.grid_angle(x) - space.grid_angle(y)
                                      : 2.0 * std::numbers::pi * (double(x) - double(y)) / double(L);
        v[x * L + y] = std::cos(d);
      } else {
        node.at("profile").fail("unknown pair profile '" + profile + "'");
      }
    }
  return v;
}

NonlinearOperator build_operator(const Node& node, const ConfigSpace& space) {
  const std::string kind = node.at("kind").string();
  if (kind == "lambda") {
    node.object({"kind", "a", "b"});
    return lambda_operator({node.at("a").complex(), node.at("b").complex()}, space, 1);
  }
  if (kind == "log-modulus") {
    node.object({"kind", "p", "kappa", "rms_axis"});
    LogModulusParams p;
    p.p = node.complex_or("p", 1.0);
    p.kappa = node.complex_or("kappa", 0.0);
    if (node.has("rms_axis") && !node.at("rms_axis").value().is_null()) {
      p.rms_axis = static_cast<std::size_t>(node.at("rms_axis").integer(0, long(space.factors().size()) - 1));
    }
    return log_modulus_operator(space, p);
  }
  if (kind == "cross-ratio") {
    node.object({"kind", "coupling", "reference"});
    CrossRatioParams p;
    p.coupling = node.complex_or("coupling", 1.0);
    if (node.has("reference") && !node.at("reference").value().is_null()) {
      p.reference = static_cast<std::size_t>(node.at("reference").integer(0, long(space.size()) - 1));
    }
    return cross_ratio_operator(space, p);
  }
  if (kind == "linear") {
    node.object({"kind", "matrix", "scale", "steps", "axis"});
    const cplx scale = node.complex_or("scale", 1.0);
    return linear_operator(node.at("matrix").string(), space, 1, scale * matrix_of(node, space));
  }
  if (kind == "pair-potential") {
    node.object({"kind", "strength", "profile"});
    std::vector<cplx> v = pair_profile(node, space);
    const cplx s = node.complex_or("strength", 1.0);
    for (cplx& c : v) c *= s;
    return potential_operator("pair-potential", space, 2, std::move(v));
  }
  if (kind == "sum") {
    node.object({"kind", "terms"});
    const auto terms = node.at("terms").items();
    if (terms.empty()) node.at("terms").fail("a sum needs at least one term");
    NonlinearOperator total = build_operator(terms[0], space);
    for (std::size_t i = 1; i < terms.size(); ++i) {
      const NonlinearOperator term = build_operator(terms[i], space);
      if (term.particles() != total.particles()) terms[i].fail("all terms of a sum need the same particle number");
      total = total + term;
    }
    return total;
  }
  node.at("kind").fail("unknown generator kind '" + kind + "'");
}

Profile parse_profile(const Node& node) {
  node.object({"profile", "amplitude", "slope", "wavenumber", "phase"});
  Profile p;
  const std::string kind = node.has("profile") ? node.at("profile").string() : "constant";
  if (kind == "constant") p.kind = Profile::Kind::Constant;
  else if (kind == "linear") p.kind = Profile::Kind::Linear;
  else if (kind == "sine") p.kind = Profile::Kind::Sine;
  else node.at("profile").fail("unknown profile '" + kind + "'");
  p.amplitude = node.number_or("amplitude", 0.0);
  p.slope = node.number_or("slope", 0.0);
  p.wavenumber = node.number_or("wavenumber", 1.0);
  p.phase = node.number_or("phase", 0.0);
  return p;
}

Affine parse_affine(const Node& node) {
  node.object({"slope", "offset"});
  return {node.number_or("slope", 0.0), node.number_or("offset", 0.0)};
}

// K_n(t) = n (1 - i p t / hbar) phi: the generator of real rescalings for
// operators with logarithmic indices (p, 0).
NonlinearOperator dilation_level(const ConfigSpace& space, int n, double p, double hbar) {
  NonlinearOperator::Parts parts;
  const double c = static_cast<double>(n);
  parts.eval = [c, p, hbar](double t, const WaveFunction& phi) { return c * cplx(1.0, -p * t / hbar) * phi; };
  parts.derivative = [c, p, hbar](double t, const WaveFunction&, const WaveFunction& eta) {
    return c * cplx(1.0, -p * t / hbar) * eta;
  };
  parts.second_derivative = [](double, const WaveFunction& phi, const WaveFunction&, const WaveFunction&) {
    return WaveFunction::zeros(phi.space(), phi.particles());
  };
  parts.time_dependent = p != 0.0;
  return NonlinearOperator("dilation", space, n, std::move(parts));
}

}  // namespace

PointSymmetrySpec parse_point(const Node& node) {
  PointSymmetrySpec s;
  if (auto n = node.find("eta")) s.eta = parse_profile(*n);
  if (auto n = node.find("xi")) s.xi = parse_profile(*n);
  if (auto n = node.find("gamma")) s.gamma = parse_profile(*n);
  if (auto n = node.find("delta")) s.delta = parse_profile(*n);
  if (auto n = node.find("tau")) s.tau = parse_affine(*n);
  return s;
}

GenSpec parse_generator(const Node& node, const ConfigSpace& space) {
  GenSpec spec;
  const json copy = node.value();
  const std::string pointer = node.pointer();
  spec.make = [copy, pointer](const ConfigSpace& s) { return make_generator(build_operator(Node(copy, pointer), s)); };
  try {
    spec.threshold = spec.make(space).threshold();
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    node.fail(e.what());
  }
  return spec;
}

SymSpec parse_symmetry(const Node& node, const ConfigSpace& space, int n_max) {
  const std::string kind = node.at("kind").string();
  SymSpec s;
  if (kind == "lattice-shift") {
    node.object({"kind", "steps"});
    const long steps = node.at("steps").integer(-1000000, 1000000);
    s.finite = true;
    s.make_finite = [steps](const ConfigSpace& sp, int n) { return lattice_shift(sp, steps, n); };
    s.make_inverse = [steps](const ConfigSpace& sp, int n) { return lattice_shift(sp, -steps, n); };
  } else if (kind == "phase-map") {
    node.object({"kind", "omega", "phase"});
    const double omega = node.number_or("omega", 0.0), phase = node.number_or("phase", 0.0);
    s.finite = true;
    s.make_finite = [=](const ConfigSpace& sp, int n) { return phase_map(sp, omega, phase, n); };
    s.make_inverse = [=](const ConfigSpace& sp, int n) { return phase_map(sp, -omega, -phase, n); };
  } else if (kind == "time-translation") {
    node.object({"kind"});
    s.make_infinitesimal = [](const ConfigSpace& sp, int n, double) {
      return InfinitesimalSymmetry{Hierarchy::zero(sp, n), Affine::constant(1.0)};
    };
  } else if (kind == "dilation") {
    node.object({"kind", "p"});
    const double p = node.at("p").number();
    s.make_infinitesimal = [p](const ConfigSpace& sp, int n, double hbar) {
      std::vector<NonlinearOperator> levels;
      for (int k = 1; k <= n; ++k) levels.push_back(dilation_level(sp, k, p, hbar));
      return InfinitesimalSymmetry{Hierarchy(sp, std::move(levels)), Affine{}};
    };
  } else if (kind == "point") {
    node.object({"kind", "eta", "xi", "gamma", "delta", "tau"});
    const PointSymmetrySpec spec = parse_point(node);
    s.make_infinitesimal = [spec](const ConfigSpace& sp, int n, double) { return point_symmetry(spec, sp, n); };
  } else {
    node.at("kind").fail("unknown symmetry kind '" + kind + "'");
  }
  try {
    if (s.finite) s.make_finite(space, n_max);
    else s.make_infinitesimal(space, n_max, 1.0);
  } catch (const Error& e) {
    node.fail(e.what());
  }
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Locating pointers in the source text

namespace {

class Locator {
 public:
  explicit Locator(const std::string& text) : s_(text) {}

  std::map<std::string, std::pair<int, int>> run() {
    value("");
    return std::move(out_);
  }

 private:
  bool done() const { return i_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[i_]; }
  void advance() {
    if (done()) return;
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(s_[i_]))) advance();
  }
  std::string string() {
    advance();
    std::string r;
    while (!done() && peek() != '"') {
      if (peek() == '\\') {
        advance();
        r += peek();
      } else {
        r += peek();
      }
      advance();
    }
    advance();
    return r;
  }
  void value(const std::string& pointer) {
    skip_ws();
    out_[pointer] = {line_, col_};
    const char c = peek();
    if (c == '{') {
      advance();
      skip_ws();
      if (peek() == '}') return advance();
      while (!done()) {
        skip_ws();
        std::string key = string();
        std::string token;
        for (char k : key) token += k == '~' ? std::string("~0") : k == '/' ? std::string("~1") : std::string(1, k);
        skip_ws();
        advance();  // ':'
        value(pointer + "/" + token);
        skip_ws();
        if (peek() == ',') {
          advance();
          continue;
        }
        advance();  // '}'
        break;
      }
    } else if (c == '[') {
      advance();
      skip_ws();
      if (peek() == ']') return advance();
      for (std::size_t k = 0; !done(); ++k) {
        value(pointer + "/" + std::to_string(k));
        skip_ws();
        if (peek() == ',') {
          advance();
          continue;
        }
        advance();  // ']'
        break;
      }
    } else if (c == '"') {
      string();
    } else {
      while (!done() && std::string_view(",]} \t\r\n").find(peek()) == std::string_view::npos) advance();
    }
  }

  const std::string& s_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
  std::map<std::string, std::pair<int, int>> out_;
};

std::pair<int, int> position_of_offset(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::pair<int, int> locate(const std::string& text, const std::string& pointer) {
  const auto positions = Locator(text).run();
  std::string p = pointer;
  while (true) {
    if (auto it = positions.find(p); it != positions.end()) return it->second;
    if (p.empty()) return {1, 1};
    p = p.substr(0, p.rfind('/'));
  }
}

std::string diagnostic(const std::string& source, const std::string& text, const std::exception& e) {
  std::ostringstream os;
  if (const auto* pe = dynamic_cast<const nlohmann::json::parse_error*>(&e)) {
    // byte is one past the offending character
    const auto [line, col] = position_of_offset(text, pe->byte > 0 ? pe->byte - 1 : 0);
    os << source << ":" << line << ":" << col << ": error: malformed JSON: " << pe->what();
  } else if (const auto* se = dynamic_cast<const ScenarioError*>(&e)) {
    const auto [line, col] = locate(text, se->pointer());
    os << source << ":" << line << ":" << col << ": error: " << (se->pointer().empty() ? "/" : se->pointer()) << ": "
       << se->what();
  } else {
    os << source << ":1:1: error: " << e.what();
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Scenario

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> catalog = [] {
    std::vector<CheckInfo> out;
    for (const auto& d : detail::check_defs()) out.push_back(d.info);
    return out;
  }();
  return catalog;
}

struct PreparedCheck {
  std::string name;
  double tolerance;
  detail::Runner runner;
};

struct Scenario::Impl {
  std::string name;
  std::shared_ptr<detail::Context> ctx;
  std::vector<PreparedCheck> checks;
};

Scenario::Scenario(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Scenario::~Scenario() = default;
Scenario::Scenario(Scenario&&) noexcept = default;
Scenario& Scenario::operator=(Scenario&&) noexcept = default;

const std::string& Scenario::name() const { return impl_->name; }
std::uint64_t Scenario::seed() const { return impl_->ctx->seed; }
double Scenario::hbar() const { return impl_->ctx->hbar; }
std::size_t Scenario::check_count() const { return impl_->checks.size(); }

Scenario Scenario::parse(const std::string& text, const RunOptions& opts) {
  const json doc = json::parse(text);
  const Node root(doc, "");
  root.object({"schema", "name", "description", "seed", "hbar", "space", "n_max", "generators", "symmetries", "checks"});
  if (root.has("schema") && root.at("schema").integer(0, 1000) != kSchemaVersion) {
    root.at("schema").fail("unsupported schema version");
  }

  auto impl = std::make_unique<Impl>();
  impl->name = root.at("name").string();
  auto ctx = std::make_shared<detail::Context>();
  ctx->seed = opts.seed ? *opts.seed : root.at("seed").u64();
  ctx->hbar = opts.hbar ? *opts.hbar : (root.has("hbar") ? root.at("hbar").positive() : 1.0);
  if (!(ctx->hbar > 0.0) || !std::isfinite(ctx->hbar)) throw ScenarioError("/hbar", "hbar must be positive");
  ctx->n_max = static_cast<int>(root.integer_or("n_max", 3, 1, limits().max_particles));

  const Node sp = root.at("space");
  sp.object({"size", "factors", "grid"});
  const bool grid = sp.has("grid") && sp.at("grid").boolean();
  try {
    if (sp.has("factors")) {
      if (sp.has("size")) sp.fail("give either size or factors");
      std::vector<std::size_t> factors;
      for (const Node& f : sp.at("factors").items()) factors.push_back(static_cast<std::size_t>(f.integer(1, 1 << 20)));
      if (factors.empty()) sp.at("factors").fail("factors must be non-empty");
      ctx->space = ConfigSpace(factors, grid);
    } else {
      ctx->space = ConfigSpace(static_cast<std::size_t>(sp.at("size").integer(1, 1 << 20)), grid);
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    sp.fail(e.what());
  }

  if (auto gens = root.find("generators")) {
    if (!gens->value().is_object()) gens->fail("expected an object of named generators");
    for (const auto& [key, v] : gens->value().items()) {
      ctx->generators.emplace(key, detail::parse_generator(gens->at(key), ctx->space));
    }
  }
  if (auto syms = root.find("symmetries")) {
    if (!syms->value().is_object()) syms->fail("expected an object of named symmetries");
    for (const auto& [key, v] : syms->value().items()) {
      ctx->symmetries.emplace(key, detail::parse_symmetry(syms->at(key), ctx->space, ctx->n_max));
    }
  }

  const auto& defs = detail::check_defs();
  const auto checks = root.at("checks").items();
  if (checks.empty()) root.at("checks").fail("a scenario needs at least one check");
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const Node& c = checks[k];
    const json wrapped = c.value().is_string() ? json{{"check", c.value()}} : json();
    const Node params = c.value().is_string() ? Node(wrapped, c.pointer()) : c;
    const std::string name = params.at("check").string();
    const auto def = std::find_if(defs.begin(), defs.end(), [&](const auto& d) { return d.info.name == name; });
    if (def == defs.end()) params.at("check").fail("unknown check '" + name + "'");
    std::vector<std::string> keys = def->keys;
    keys.insert(keys.end(), {"check", "tol"});
    params.object(keys);
    double tol = def->tolerance;
    if (params.has("tol")) {
      tol = params.at("tol").number();
      if (tol < 0.0) params.at("tol").fail("tolerance must be non-negative");
    }
    if (opts.tol) tol = *opts.tol;
    const std::uint64_t seed = mix_seed(ctx->seed, 1000 + k);
    impl->checks.push_back({name, tol, def->prepare(ctx, params, seed)});
  }
  impl->ctx = std::move(ctx);
  return Scenario(std::move(impl));
}

std::vector<CheckResult> Scenario::run() const {
  std::vector<CheckResult> results;
  for (const auto& c : impl_->checks) {
    CheckResult r;
    r.name = c.name;
    r.tolerance = c.tolerance;
    try {
      detail::Outcome o = c.runner();
      r.max_residual = o.residual;
      r.details = std::move(o.details);
      r.status = std::isfinite(o.residual) && o.residual <= c.tolerance ? "pass" : "fail";
    } catch (const Error& e) {
      r.status = "error";
      r.max_residual = std::numeric_limits<double>::quiet_NaN();
      r.details = json{{"error", e.what()}};
    }
    results.push_back(std::move(r));
  }
  return results;
}

json make_report(const Scenario& s, const std::vector<CheckResult>& results) {
  json checks = json::array();
  for (const auto& r : results) {
    checks.push_back({{"name", r.name},
                      {"status", r.status},
                      {"max_residual", r.max_residual},
                      {"tolerance", r.tolerance},
                      {"details", r.details}});
  }
  return {{"schema", kSchemaVersion},
          {"scenario", s.name()},
          {"seed", s.seed()},
          {"hbar", s.hbar()},
          {"tool_version", tool_version()},
          {"checks", std::move(checks)}};
}

std::string report_text(const json& report) { return report.dump(2) + "\n"; }

std::string report_table(const json& report) {
  std::ostringstream os;
  os << "scenario " << report.at("scenario").get<std::string>() << "  seed " << report.at("seed").get<std::uint64_t>()
     << "  hbar " << report.at("hbar").get<double>() << "\n";
  os << std::left << std::setw(34) << "check" << std::setw(8) << "status" << std::right << std::setw(14) << "residual"
     << std::setw(14) << "tolerance" << "\n";
  int failed = 0;
  for (const auto& c : report.at("checks")) {
    const std::string status = c.at("status").get<std::string>();
    if (status != "pass") ++failed;
    os << std::left << std::setw(34) << c.at("name").get<std::string>() << std::setw(8) << status << std::right
       << std::scientific << std::setprecision(3);
    if (c.at("max_residual").is_number()) os << std::setw(14) << c.at("max_residual").get<double>();
    else os << std::setw(14) << "-";
    os << std::setw(14) << c.at("tolerance").get<double>() << std::defaultfloat << "\n";
  }
  os << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) did not pass") << "\n";
  return os.str();
}

int exit_code(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.status == "pass"; }) ? 0 : 1;
}

std::vector<std::string> bundled_scenarios() {
  std::vector<std::string> out;
  for (const auto& [name, text] : detail::bundled()) out.push_back(name);
  return out;
}

std::optional<std::string> bundled_scenario(const std::string& name) {
  for (const auto& [n, text] : detail::bundled())
    if (n == name) return text;
  return std::nullopt;
}

}  // namespace nlsh::cli
