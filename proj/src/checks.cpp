#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlsh/operators.hpp"

namespace nlsh::cli::detail {

namespace {

using Ctx = std::shared_ptr<const Context>;

constexpr cplx kEtas[] = {{0.7, -0.4}, {-1.1, 0.3}, {0.0, 1.0}};

double uniform(std::uint64_t seed, std::uint64_t k) {
  return static_cast<double>(mix_seed(seed, k) >> 11) * 0x1p-53 * 2.0 - 1.0;
}

IndexPair random_pair(std::uint64_t seed, std::uint64_t k) {
  return {{uniform(seed, 4 * k), uniform(seed, 4 * k + 1)}, {uniform(seed, 4 * k + 2), uniform(seed, 4 * k + 3)}};
}

std::vector<double> ratios(const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) out.push_back(v[i] / v[i + 1]);
  return out;
}

/// Largest |r - centre| over the ratios; infinite when a ladder is too short.
double band(const std::vector<double>& r, double centre) {
  if (r.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (double x : r) worst = std::max(worst, std::isfinite(x) ? std::abs(x - centre) : std::numeric_limits<double>::infinity());
  return worst;
}

json pair_json(const IndexPair& p) {
  return json::array({json::array({p.a.real(), p.a.imag()}), json::array({p.b.real(), p.b.imag()})});
}

StateOptions nowhere_zero() { return {.nowhere_zero = true}; }

const GenSpec& generator(const Context& ctx, const Node& name) {
  const std::string s = name.string();
  const auto it = ctx.generators.find(s);
  if (it == ctx.generators.end()) name.fail("unknown generator '" + s + "'");
  return it->second;
}

const SymSpec& symmetry(const Context& ctx, const Node& name, bool finite) {
  const std::string s = name.string();
  const auto it = ctx.symmetries.find(s);
  if (it == ctx.symmetries.end()) name.fail("unknown symmetry '" + s + "'");
  if (it->second.finite != finite) name.fail("symmetry '" + s + "' is not " + (finite ? "finite" : "infinitesimal"));
  return it->second;
}

std::vector<Generator> generators(const Context& ctx, const Node& list) {
  std::vector<Generator> out;
  for (const Node& n : list.items()) out.push_back(generator(ctx, n).make(ctx.space));
  if (out.empty()) list.fail("expected at least one generator");
  return out;
}

int n_max_of(const Context& ctx, const Node& p) {
  return static_cast<int>(p.integer_or("n_max", ctx.n_max, 1, limits().max_particles));
}

Hierarchy hierarchy(const Context& ctx, const Node& p, const std::string& key = "hierarchy") {
  const auto gens = generators(ctx, p.at(key));
  return Hierarchy::from_generators(ctx.space, gens, n_max_of(ctx, p));
}

BatchSpec batch(const Node& p, std::uint64_t seed, int fallback) {
  return {p.number_or("t", 0.0), seed, static_cast<int>(p.integer_or("batch", fallback, 1, 256))};
}

std::vector<double> ladder(const Node& p, const std::string& key, std::vector<double> fallback) {
  std::vector<double> v = p.has(key) ? p.at(key).numbers() : std::move(fallback);
  if (v.size() < 2) p.fail("'" + key + "' needs at least two entries");
  for (double x : v)
    if (!(x > 0.0)) p.at(key).fail("ladder entries must be positive");
  return v;
}

SymmetryOptions sym_opts(const Context& ctx, const Node& p) {
  return {.hbar = ctx.hbar, .dt_sym = p.number_or("dt_sym", 1e-4)};
}

// -- mixed-power algebra ----------------------------------------------------

Runner product_table(const Ctx&, const Node&, std::uint64_t) {
  return [] {
    const IndexPair units[4] = {gen::E, gen::B, gen::I, gen::J};
    // row * column as (sign, unit); J*I = B follows from the product law
    const int sign[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, 1, -1, -1}, {1, 1, 1, 1}};
    const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    double worst = 0.0;
    int count = 0;
    for (int s1 : {1, -1})
      for (int s2 : {1, -1})
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) {
            const IndexPair got = pair_product(cplx(s1) * units[r], cplx(s2) * units[c]);
            const IndexPair want = cplx(s1 * s2 * sign[r][c]) * units[unit[r][c]];
            worst = std::max(worst, distance(got, want));
            ++count;
          }
    return Outcome{worst, {{"products", count}}};
  };
}

Runner sl2_brackets(const Ctx&, const Node& p, std::uint64_t seed) {
  const long count = p.integer_or("count", 200, 0, 1000000);
  return [count, seed] {
    using namespace gen;
    const double rel = std::max({distance(pair_bracket(B, I), cplx(-2) * J), distance(pair_bracket(I, J), cplx(-2) * B),
                                 distance(pair_bracket(J, B), cplx(2) * I)});
    double jacobi = 0.0;
    for (long k = 0; k < count; ++k) {
      const IndexPair x = random_pair(seed, 3 * k), y = random_pair(seed, 3 * k + 1), z = random_pair(seed, 3 * k + 2);
      const IndexPair sum = pair_bracket(x, pair_bracket(y, z)) + pair_bracket(y, pair_bracket(z, x)) +
                            pair_bracket(z, pair_bracket(x, y));
      jacobi = std::max(jacobi, distance(sum, IndexPair{}));
    }
    return Outcome{std::max(rel, jacobi), {{"relations", rel}, {"jacobi", jacobi}, {"triples", count}}};
  };
}

double mat_distance(const Mat2& x, const Mat2& y) {
  double d = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) d = std::max(d, std::abs(x(r, c) - y(r, c)));
  return d;
}

Runner matrix_homomorphism(const Ctx&, const Node& p, std::uint64_t seed) {
  const long count = p.integer_or("count", 1000, 1, 10000000);
  return [count, seed] {
    double hom = 0.0, round_trip = 0.0, action = 0.0;
    for (long k = 0; k < count; ++k) {
      const IndexPair x = random_pair(seed, 2 * k), y = random_pair(seed, 2 * k + 1);
      hom = std::max(hom, mat_distance(matrix_rep(pair_product(x, y)), matrix_rep(x) * matrix_rep(y)));
      round_trip = std::max(round_trip, distance(pair_from_matrix(matrix_rep(x)), x));
      const cplx z{uniform(seed, 7 * k + 5), uniform(seed, 7 * k + 6)};
      action = std::max(action, std::abs(matrix_rep(x).apply(z) - pair_action(x, z)));
    }
    return Outcome{std::max({hom, round_trip, action}),
                   {{"pairs", count}, {"homomorphism", hom}, {"round_trip", round_trip}, {"action", action}}};
  };
}

// -- homogeneity --------------------------------------------------------------

struct NamedOp {
  std::string name;
  NonlinearOperator op;
  IndexPair indices;
  bool power = false;
};

std::vector<NamedOp> euler_ops(const Context& ctx, const Node& p) {
  std::vector<NamedOp> ops;
  if (auto list = p.find("generators")) {
    for (const Node& n : list->items()) {
      const Generator g = generator(ctx, n).make(ctx.space);
      ops.push_back({n.string(), g.op, g.indices, false});
    }
  }
  if (auto list = p.find("mixed_power")) {
    for (const Node& n : list->items()) {
      const IndexPair idx = n.pair();
      ops.push_back({"mixed_power", mixed_power_operator(idx, ctx.space, 1), idx, true});
    }
  }
  if (ops.empty()) p.fail("expected 'generators' or 'mixed_power'");
  return ops;
}

Runner euler_closed_form(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  auto ops = euler_ops(*ctx, p);
  const BatchSpec b = batch(p, seed, 4);
  return [ctx, ops, b] {
    double worst = 0.0;
    json per = json::array();
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const auto& o = ops[i];
      double r = 0.0;
      for (const WaveFunction& phi : random_batch(o.op.particles(), ctx->space, mix_seed(b.seed, i), b.count, nowhere_zero()))
        for (cplx eta : kEtas)
          r = std::max(r, o.power ? euler_pow_residual(o.op, o.indices, b.t, phi, eta)
                                  : euler_log_residual(o.op, o.indices, b.t, phi, eta));
      worst = std::max(worst, r);
      per.push_back({{"operator", o.name}, {"indices", pair_json(o.indices)}, {"residual", r}});
    }
    return Outcome{worst, {{"operators", per}}};
  };
}

Runner euler_richardson(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  auto ops = euler_ops(*ctx, p);
  const BatchSpec b = batch(p, seed, 2);
  const auto steps = ladder(p, "steps", {1e-2, 5e-3, 2.5e-3});
  return [ctx, ops, b, steps] {
    double worst = 0.0;
    json per = json::array();
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const auto& o = ops[i];
      const int n = o.op.particles();
      const auto states = random_batch(n, ctx->space, mix_seed(b.seed, i), b.count, nowhere_zero());
      const auto dirs = random_batch(n, ctx->space, mix_seed(b.seed, 100 + i), b.count);
      std::vector<double> errors;
      for (double h : steps) {
        double e = 0.0;
        for (std::size_t k = 0; k < states.size(); ++k) {
          const WaveFunction exact = frechet(o.op, b.t, states[k], dirs[k]);
          const WaveFunction fd = frechet(o.op, b.t, states[k], dirs[k], {.fd_step = h, .force_fd = true});
          e = std::max(e, distance(exact, fd));
        }
        errors.push_back(e);
      }
      const auto r = ratios(errors);
      worst = std::max(worst, band(r, 4.0));
      per.push_back({{"operator", o.name}, {"errors", errors}, {"ratios", r}});
    }
    return Outcome{worst, {{"steps", steps}, {"operators", per}}};
  };
}

Runner log_indices(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const auto gens = generators(*ctx, p.at("generators"));
  const BatchSpec b = batch(p, seed, 4);
  return [ctx, gens, b] {
    double worst = 0.0;
    json per = json::array();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const auto states = random_batch(gens[i].threshold(), ctx->space, mix_seed(b.seed, i), b.count, nowhere_zero());
      const LogIndexEstimate est = estimate_log_indices(gens[i].op, b.t, states);
      const double dev = distance(est.indices, gens[i].indices);
      worst = std::max({worst, dev, est.residual});
      per.push_back({{"operator", gens[i].op.name()},
                     {"declared", pair_json(gens[i].indices)},
                     {"estimated", pair_json(est.indices)},
                     {"spread", est.residual}});
    }
    return Outcome{worst, {{"generators", per}}};
  };
}

// -- hierarchies --------------------------------------------------------------

Runner permutation_property(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const Hierarchy H = hierarchy(*ctx, p);
  const BatchSpec b = batch(p, seed, 4);
  return [H, b] {
    const double r = permutation_check(H, b);
    return Outcome{r, {{"n_max", H.n_max()}, {"batch", b.count}}};
  };
}

Runner tensor_derivation(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const Hierarchy H = hierarchy(*ctx, p);
  const BatchSpec b = batch(p, seed, 8);
  return [H, b] {
    const double r = derivation_check(H, b);
    return Outcome{r, {{"n_max", H.n_max()}, {"batch", b.count}}};
  };
}

Runner derivation_bracket(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const Hierarchy L = hierarchy(*ctx, p, "left");
  const Hierarchy R = hierarchy(*ctx, p, "right");
  const BatchSpec b = batch(p, seed, 16);
  return [L, R, b] {
    const double left = derivation_check(L, b), right = derivation_check(R, b);
    const double r = derivation_check(bracket(L, R), b);
    return Outcome{r, {{"left", left}, {"right", right}, {"bracket", r}, {"n_max", L.n_max()}, {"batch", b.count}}};
  };
}

Runner bracket_indices(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const Generator F = generator(*ctx, p.at("left")).make(ctx->space);
  const Generator G = generator(*ctx, p.at("right")).make(ctx->space);
  if (F.threshold() != 1) p.at("left").fail("needs a one-particle generator");
  if (G.threshold() != 1) p.at("right").fail("needs a one-particle generator");
  const BatchSpec b = batch(p, seed, 4);
  return [ctx, F, G, b] {
    const auto states = random_batch(1, ctx->space, b.seed, b.count, nowhere_zero());
    const LogIndexEstimate est = estimate_log_indices(lie_bracket(F.op, G.op), b.t, states);
    const IndexPair want = pair_bracket(F.indices, G.indices);
    const double r = std::max(distance(est.indices, want), est.residual);
    return Outcome{r, {{"estimated", pair_json(est.indices)}, {"expected", pair_json(want)}, {"spread", est.residual}}};
  };
}

Generator zero_generator(const ConfigSpace& space, int n) { return {zero_operator(space, n), IndexPair{}}; }

std::vector<Generator> distinct_thresholds(const Context& ctx, const Node& list, int n_max) {
  const auto gens = generators(ctx, list);
  std::vector<int> seen;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const int l = gens[i].threshold();
    if (l > n_max) list.items()[i].fail("threshold exceeds n_max");
    if (std::find(seen.begin(), seen.end(), l) != seen.end()) list.items()[i].fail("two generators share a threshold");
    seen.push_back(l);
  }
  return gens;
}

Generator expected_at(const std::vector<Generator>& gens, const ConfigSpace& space, int j) {
  for (const auto& g : gens)
    if (g.threshold() == j) return g;
  return zero_generator(space, j);
}

Runner canonical_decomposition(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const int N = n_max_of(*ctx, p);
  const auto gens = distinct_thresholds(*ctx, p.at("generators"), N);
  const BatchSpec b = batch(p, seed, 4);
  return [ctx, gens, N, b] {
    const Hierarchy H = Hierarchy::from_generators(ctx->space, gens, N);
    const auto d = canonical_decompose(H, {.batch = b});
    json per = json::array();
    double worst = 0.0;
    for (int j = 1; j <= N; ++j) {
      const double e = generator_distance(d[j - 1], expected_at(gens, ctx->space, j), b);
      worst = std::max(worst, e);
      per.push_back(e);
    }
    const Hierarchy rebuilt = Hierarchy::from_generators(ctx->space, d, N);
    const double rebuild = hierarchy_distance(H, rebuilt, b);
    worst = std::max(worst, rebuild);
    return Outcome{worst, {{"generator_errors", per}, {"rebuild_error", rebuild}, {"n_max", N}}};
  };
}

Runner decomposition_idempotence(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const int N = n_max_of(*ctx, p);
  const auto gens = distinct_thresholds(*ctx, p.at("generators"), N);
  const BatchSpec b = batch(p, seed, 4);
  return [ctx, gens, N, b] {
    double worst = 0.0;
    const Hierarchy H = Hierarchy::from_generators(ctx->space, gens, N);
    const auto d = canonical_decompose(H, {.batch = b});
    json per = json::array();
    for (const Generator& g : d) {
      const auto dd = canonical_decompose(component(ctx->space, g, N), {.batch = b});
      double e = 0.0;
      for (int k = 1; k <= N; ++k) {
        const Generator want = k == g.threshold() ? g : zero_generator(ctx->space, k);
        e = std::max(e, generator_distance(dd[k - 1], want, b));
      }
      worst = std::max(worst, e);
      per.push_back(e);
    }
    return Outcome{worst, {{"component_errors", per}, {"n_max", N}}};
  };
}

// -- obstructions -------------------------------------------------------------

struct ObstructionCase {
  Generator F, G;
  std::vector<int> ns;
};

std::vector<ObstructionCase> obstruction_cases(const Context& ctx, const Node& p) {
  std::vector<ObstructionCase> out;
  for (const Node& c : p.at("pairs").items()) {
    c.object({"F", "G", "n"});
    ObstructionCase oc{generator(ctx, c.at("F")).make(ctx.space), generator(ctx, c.at("G")).make(ctx.space), {}};
    const int l = oc.F.threshold(), m = oc.G.threshold();
    if (l > m) c.fail("needs threshold(F) <= threshold(G)");
    for (const Node& n : c.at("n").items()) oc.ns.push_back(static_cast<int>(n.integer(m + 1, limits().max_particles)));
    if (oc.ns.empty()) c.at("n").fail("expected at least one particle number");
    out.push_back(std::move(oc));
  }
  if (out.empty()) p.at("pairs").fail("expected at least one pair");
  return out;
}

ObstructionOptions obstruction_opts(const Node& p, std::uint64_t seed, int fallback) {
  return {.t = p.number_or("t", 0.0),
          .seed = seed,
          .batch_size = static_cast<int>(p.integer_or("batch", fallback, 1, 256)),
          .vanish_tol = p.number_or("vanish_tol", 1e-7)};
}

Runner liftdeltal_identity(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const auto cases = obstruction_cases(*ctx, p);
  const ObstructionOptions o = obstruction_opts(p, seed, 8);
  return [cases, o] {
    double worst = 0.0;
    json reports = json::array();
    for (const auto& c : cases)
      for (int n : c.ns) {
        const ObstructionReport r = obstruction_report(ObstructionKind::Theorem10, c.F, c.G, n, o);
        worst = std::max(worst, r.relative_residual);
        reports.push_back(to_json(r));
      }
    return Outcome{worst, {{"reports", reports}}};
  };
}

Runner linear_obstruction(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const auto cases = obstruction_cases(*ctx, p);
  const ObstructionOptions o = obstruction_opts(p, seed, 8);
  return [cases, o] {
    double worst = 0.0;
    json reports = json::array();
    for (const auto& c : cases)
      for (int n : c.ns) {
        const ObstructionReport r = obstruction_report(ObstructionKind::Theorem10, c.F, c.G, n, o);
        worst = std::max({worst, r.lhs_norm, r.rhs_norm});
        reports.push_back(to_json(r));
      }
    return Outcome{worst, {{"reports", reports}}};
  };
}

bool expect_vanish(const Node& p) {
  const std::string e = p.at("expect").string();
  if (e != "vanish" && e != "nonzero") p.at("expect").fail("expect must be 'vanish' or 'nonzero'");
  return e == "vanish";
}

Runner two_particle_obstruction(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const Generator F = generator(*ctx, p.at("F")).make(ctx->space);
  const Generator K = generator(*ctx, p.at("K")).make(ctx->space);
  if (F.threshold() != 1) p.at("F").fail("needs a one-particle generator");
  if (K.threshold() != 1) p.at("K").fail("needs a one-particle generator");
  const int n = static_cast<int>(p.integer_or("n", 3, 2, limits().max_particles));
  const bool vanish = expect_vanish(p);
  const double bound = p.number_or("bound", 1e-3);
  const ObstructionOptions o = obstruction_opts(p, seed, 8);
  return [F, K, n, vanish, bound, o] {
    const ObstructionReport r = obstruction_report(ObstructionKind::Corollary1, F, K, n, o);
    const double shortfall = std::max(0.0, bound - std::min(r.rhs_norm, r.lhs_norm));
    const double residual =
        vanish ? std::max({r.identity_residual, r.rhs_norm, r.lhs_norm}) : std::max(r.identity_residual, shortfall);
    return Outcome{residual, {{"expect", vanish ? "vanish" : "nonzero"}, {"bound", bound}, {"report", to_json(r)}}};
  };
}

Runner added_generator_obstruction(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const Generator K = generator(*ctx, p.at("K")).make(ctx->space);
  const Generator G = generator(*ctx, p.at("G")).make(ctx->space);
  if (K.threshold() != 1) p.at("K").fail("needs a one-particle generator");
  if (G.threshold() < 2) p.at("G").fail("needs a generator above threshold 1");
  if (G.threshold() + 1 > limits().max_particles) p.at("G").fail("threshold + 1 exceeds the particle cap");
  const ObstructionOptions o = obstruction_opts(p, seed, 8);
  return [K, G, o] {
    const ObstructionReport r = obstruction_report(ObstructionKind::Corollary2, K, G, G.threshold() + 1, o);
    return Outcome{r.relative_residual, {{"report", to_json(r)}}};
  };
}

// -- evolution ----------------------------------------------------------------

Runner separation(const Ctx& ctx, const Node& p, std::uint64_t seed, bool plateau) {
  const Hierarchy H = hierarchy(*ctx, p);
  const int n1 = static_cast<int>(p.integer_or("n1", 1, 1, limits().max_particles));
  const int n2 = static_cast<int>(p.integer_or("n2", 1, 1, limits().max_particles));
  if (n1 + n2 > H.n_max()) p.fail("n1 + n2 exceeds n_max");
  const auto dts = ladder(p, "dt", {0.1, 0.05, 0.025});
  const double t1 = p.number_or("t1", 1.0);
  const double floor = p.number_or("floor", 1e-2);
  return [ctx, H, n1, n2, dts, t1, floor, plateau, seed] {
    const WaveFunction phi1 = random_state(n1, ctx->space, seed, nowhere_zero());
    const WaveFunction phi2 = random_state(n2, ctx->space, mix_seed(seed, 1), nowhere_zero());
    std::vector<double> res;
    for (double dt : dts) res.push_back(separation_test(H, phi1, phi2, {.hbar = ctx->hbar, .dt = dt, .t1 = t1}));
    const auto r = ratios(res);
    json details{{"dt", dts}, {"residuals", res}, {"ratios", r}, {"n1", n1}, {"n2", n2}, {"t1", t1}};
    if (plateau) {
      details["floor"] = floor;
      return Outcome{std::max(0.0, floor - *std::min_element(res.begin(), res.end())), details};
    }
    return Outcome{band(r, 16.0), details};
  };
}

std::vector<cplx> coefficients(const Node& n) {
  std::vector<cplx> c;
  for (const Node& x : n.items()) c.push_back(x.complex());
  if (c.empty()) n.fail("expected at least one coefficient");
  return c;
}

ScalarFunction polynomial(std::vector<cplx> c) {
  return [c](double t) {
    cplx v{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
    return v;
  };
}

Runner scaling_indices(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const Generator g = generator(*ctx, p.at("generator")).make(ctx->space);
  if (g.threshold() != 1) p.at("generator").fail("needs a one-particle generator");
  const IndexPair pq = g.indices;
  if (std::abs(pq.a - pq.b) > 0.0 || pq.a.imag() != 0.0) {
    p.at("generator").fail("the closed form needs equal real logarithmic indices p = q");
  }
  const cplx k = p.complex_or("k", cplx(2.0, 0.0));
  const auto dts = ladder(p, "dt", {0.1, 0.05, 0.025});
  const double t1 = p.number_or("t1", 1.0);
  return [ctx, g, k, dts, t1, seed] {
    const WaveFunction phi0 = random_state(1, ctx->space, seed, nowhere_zero());
    const double pr = g.indices.a.real();
    const cplx closed = std::exp(cplx(0.0, -pr * t1 / ctx->hbar));
    std::vector<double> res, closed_err;
    for (double dt : dts) {
      const ScalingResult r = scaling_test(g.op, phi0, k, {.hbar = ctx->hbar, .dt = dt, .t1 = t1});
      res.push_back(r.residual);
      closed_err.push_back(std::max(std::abs(r.exponential.a - closed), std::abs(r.exponential.b - closed)));
    }
    const auto r1 = ratios(res), r2 = ratios(closed_err);
    return Outcome{std::max(band(r1, 16.0), band(r2, 16.0)),
                   {{"dt", dts},
                    {"residuals", res},
                    {"ratios", r1},
                    {"closed_form_errors", closed_err},
                    {"closed_form_ratios", r2},
                    {"p", pr}}};
  };
}

Runner index_extraction(const Ctx& ctx, const Node& p, std::uint64_t) {
  const auto pc = coefficients(p.at("p")), qc = coefficients(p.at("q"));
  const double t = p.number_or("t", 0.0);
  const auto dts = ladder(p, "dt", {0.02, 0.01, 0.005});
  return [ctx, pc, qc, t, dts] {
    const ScalarFunction P = polynomial(pc), Q = polynomial(qc);
    const IndexPair want{P(t), Q(t)};
    std::vector<double> errs;
    for (double dt : dts) {
      const IndexTrajectory traj = index_ode_solve(P, Q, t, t + 2.0 * dt, {.hbar = ctx->hbar, .dt = dt});
      errs.push_back(distance(extract_indices(traj, ctx->hbar), want));
    }
    const auto r = ratios(errs);
    return Outcome{band(r, 4.0), {{"dt", dts}, {"errors", errs}, {"ratios", r}, {"expected", pair_json(want)}}};
  };
}

Runner index_law(const Ctx& ctx, const Node& p, std::uint64_t) {
  const IndexPair pq = p.at("pq").pair(), cd = p.at("cd").pair();
  const double t = p.number_or("t", 0.0), dt = p.number_or("dt", 1e-3);
  return [ctx, pq, cd, t, dt] {
    const double hbar = ctx->hbar;
    const double r = index_law_residual([pq](double) { return pq; },
                                        [pq, cd, hbar](double s) { return index_flow(pq, cd, s, hbar); }, {}, t, hbar, dt);
    return Outcome{r, {{"pq", pair_json(pq)}, {"cd", pair_json(cd)}, {"t", t}, {"dt", dt}}};
  };
}

// -- symmetries ---------------------------------------------------------------

GeneratorFactory factory(const Context& ctx, const Node& name) { return generator(ctx, name).make; }

FreeliftOptions freelift_opts(const Node& p, std::uint64_t seed) {
  FreeliftOptions o;
  if (p.has("grid_sizes")) {
    o.grid_sizes.clear();
    for (const Node& n : p.at("grid_sizes").items()) o.grid_sizes.push_back(static_cast<std::size_t>(n.integer(3, 4096)));
  }
  o.t = p.number_or("t", 0.0);
  o.seed = seed;
  o.batch_size = static_cast<int>(p.integer_or("batch", o.batch_size, 1, 64));
  if (p.has("corollary2")) o.corollary2 = p.at("corollary2").boolean();
  return o;
}

Runner freelift(const Ctx& ctx, const Node& p, std::uint64_t seed, bool ladder_part) {
  const GeneratorFactory F = factory(*ctx, p.at("F"));
  if (generator(*ctx, p.at("F")).threshold != 1) p.at("F").fail("needs a one-particle generator");
  const Node point = p.at("point");
  point.object({"eta", "xi", "gamma", "delta", "tau"});
  const PointSymmetrySpec spec = parse_point(point);
  const FreeliftOptions o = freelift_opts(p, seed);
  if (ladder_part && o.grid_sizes.size() < 2) p.fail("the grid ladder needs at least two sizes");
  return [F, spec, o, ladder_part] {
    const FreeliftReport r = freelift_harness(F, spec, o);
    std::vector<double> all = r.derivative_ratios;
    all.insert(all.end(), r.corollary2_derivative_ratios.begin(), r.corollary2_derivative_ratios.end());
    const double residual = ladder_part ? band(all, 4.0) : std::max(r.phase_residual, r.multiplication_residual);
    return Outcome{residual, to_json(r)};
  };
}

Runner lattice_symmetry(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const SymSpec& s = symmetry(*ctx, p.at("symmetry"), true);
  const Hierarchy H = hierarchy(*ctx, p);
  const FiniteSymmetry V = s.make_finite(ctx->space, H.n_max());
  const BatchSpec b = batch(p, seed, 4);
  const SymmetryOptions so = sym_opts(*ctx, p);
  return [ctx, H, V, b, so] {
    double worst = 0.0;
    json per = json::array();
    for (int n = 1; n <= H.n_max(); ++n) {
      double r = 0.0;
      for (const WaveFunction& phi : random_batch(n, ctx->space, mix_seed(b.seed, n), b.count, nowhere_zero()))
        r = std::max(r, symmetry_residual(V, H, b.t, phi, so));
      per.push_back(r);
      worst = std::max(worst, r);
    }
    return Outcome{worst, {{"per_level", per}}};
  };
}

Runner symmetry_composition(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const Hierarchy H = hierarchy(*ctx, p);
  std::vector<FiniteSymmetry> V, Vinv;
  std::vector<std::string> names;
  for (const Node& n : p.at("symmetries").items()) {
    const SymSpec& s = symmetry(*ctx, n, true);
    V.push_back(s.make_finite(ctx->space, H.n_max()));
    Vinv.push_back(inverse(V.back(), s.make_inverse(ctx->space, H.n_max()).V));
    names.push_back(n.string());
  }
  if (V.empty()) p.at("symmetries").fail("expected at least one symmetry");
  const BatchSpec b = batch(p, seed, 2);
  const SymmetryOptions so = sym_opts(*ctx, p);
  return [ctx, H, V, Vinv, names, b, so] {
    double composed = 0.0, inverses = 0.0, identity = 0.0;
    for (int n = 1; n <= H.n_max(); ++n) {
      const auto states = random_batch(n, ctx->space, mix_seed(b.seed, n), b.count, nowhere_zero());
      for (const WaveFunction& phi : states) {
        for (std::size_t i = 0; i < V.size(); ++i) {
          inverses = std::max(inverses, symmetry_residual(Vinv[i], H, b.t, phi, so));
          const FiniteSymmetry round = compose(V[i], Vinv[i]);
          identity = std::max(identity, distance(apply(round, [&](double) { return phi; }, b.t), phi));
          for (std::size_t j = 0; j < V.size(); ++j)
            composed = std::max(composed, symmetry_residual(compose(V[i], V[j]), H, b.t, phi, so));
        }
      }
    }
    return Outcome{std::max({composed, inverses, identity}),
                   {{"symmetries", names}, {"composition", composed}, {"inverse", inverses}, {"round_trip", identity}}};
  };
}

Runner inf_symmetries(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const Hierarchy H = hierarchy(*ctx, p);
  std::vector<InfinitesimalSymmetry> K;
  std::vector<std::string> names;
  for (const Node& n : p.at("symmetries").items()) {
    K.push_back(symmetry(*ctx, n, false).make_infinitesimal(ctx->space, H.n_max(), ctx->hbar));
    names.push_back(n.string());
  }
  if (K.empty()) p.at("symmetries").fail("expected at least one symmetry");
  const BatchSpec b = batch(p, seed, 2);
  const SymmetryOptions so = sym_opts(*ctx, p);
  return [ctx, H, K, names, b, so] {
    double worst = 0.0;
    json per = json::object();
    for (std::size_t i = 0; i < K.size(); ++i) {
      double r = 0.0;
      for (int n = 1; n <= H.n_max(); ++n)
        for (const WaveFunction& phi : random_batch(n, ctx->space, mix_seed(b.seed, n), b.count, nowhere_zero()))
          r = std::max(r, inf_symmetry_residual(K[i], H, b.t, phi, so));
      per[names[i]] = r;
      worst = std::max(worst, r);
    }
    return Outcome{worst, {{"residuals", per}, {"t", b.t}}};
  };
}

Runner inf_bracket(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const Hierarchy H = hierarchy(*ctx, p);
  const auto K = symmetry(*ctx, p.at("K"), false).make_infinitesimal(ctx->space, H.n_max(), ctx->hbar);
  const auto L = symmetry(*ctx, p.at("L"), false).make_infinitesimal(ctx->space, H.n_max(), ctx->hbar);
  const BatchSpec b = batch(p, seed, 2);
  const SymmetryOptions so = sym_opts(*ctx, p);
  return [ctx, H, K, L, b, so] {
    const InfinitesimalSymmetry B = inf_symmetry_bracket(K, L, so);
    double r = 0.0;
    for (int n = 1; n <= H.n_max(); ++n)
      for (const WaveFunction& phi : random_batch(n, ctx->space, mix_seed(b.seed, n), b.count, nowhere_zero()))
        r = std::max(r, inf_symmetry_residual(B, H, b.t, phi, so));
    return Outcome{r, {{"tau", {{"slope", B.tau.slope}, {"offset", B.tau.offset}}}, {"t", b.t}}};
  };
}

Runner generator_symmetry_bracket(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const Hierarchy H = hierarchy(*ctx, p);
  const auto K = symmetry(*ctx, p.at("symmetry"), false).make_infinitesimal(ctx->space, H.n_max(), ctx->hbar);
  const BatchSpec b = batch(p, seed, 2);
  const SymmetryOptions so = sym_opts(*ctx, p);
  return [H, K, b, so] {
    const double r = djsymmbrak_residual(K, H, b.t, b, so);
    return Outcome{r, {{"n_max", H.n_max()}, {"t", b.t}}};
  };
}

Runner internal_dof(const Ctx& ctx, const Node& p, std::uint64_t seed) {
  const GeneratorFactory F = factory(*ctx, p.at("F"));
  const GeneratorFactory K = factory(*ctx, p.at("K"));
  InternalDofOptions o;
  if (p.has("grid_sizes")) {
    o.grid_sizes.clear();
    for (const Node& n : p.at("grid_sizes").items()) o.grid_sizes.push_back(static_cast<std::size_t>(n.integer(3, 4096)));
  }
  o.seeds.clear();
  const long seeds = p.integer_or("seeds", 3, 1, 64);
  for (long s = 0; s < seeds; ++s) o.seeds.push_back(mix_seed(seed, static_cast<std::uint64_t>(s)));
  o.batch_size = static_cast<int>(p.integer_or("batch", o.batch_size, 1, 64));
  o.t = p.number_or("t", 0.0);
  const double bound = p.number_or("bound", 1e-3);
  return [F, K, o, bound] {
    const InternalDofResult r = internal_dof_demo(F, K, o);
    double smallest = r.report.rhs_norm;
    for (double g : r.grid_norms) smallest = std::min(smallest, g);
    const double residual = std::max(r.report.identity_residual, std::max(0.0, bound - smallest));
    json details = to_json(r);
    details["bound"] = bound;
    return Outcome{residual, details};
  };
}

template <class... Keys>
std::vector<std::string> keys(Keys... k) {
  return {k...};
}

}  // namespace

const std::vector<CheckDef>& check_defs() {
  using namespace std::placeholders;
  static const std::vector<CheckDef> defs = {
      {{"product-table", "product law of the generators E, B, I, J",
        "all 64 products of {+-E, +-B, +-I, +-J} against the multiplication table"},
       1e-12, {}, product_table},
      {{"sl2-brackets", "commutator relations of sl(2,R)",
        "[B,I] = -2J, [I,J] = -2B, [J,B] = 2I and the Jacobi identity on random triples"},
       1e-12, keys("count"), sl2_brackets},
      {{"matrix-homomorphism", "isomorphism with real-linear maps of C",
        "matrix_rep(pq) = matrix_rep(p) matrix_rep(q), round trip and action on random pairs"},
       1e-12, keys("count"), matrix_homomorphism},
      {{"euler-closed-form", "Euler identities for mixed-power and mixed-log homogeneous operators",
        "DF(phi).(eta phi) against eta F(phi) + ((p,q).eta) phi with closed-form derivatives"},
       1e-10, keys("generators", "mixed_power", "batch", "t"), euler_closed_form},
      {{"euler-richardson", "Euler identities, finite-difference derivatives",
        "second-order convergence of central differences (error ratio 4 per halving)"},
       0.5, keys("generators", "mixed_power", "batch", "t", "steps"), euler_richardson},
      {{"log-indices", "first and second logarithmic index",
        "indices recovered from F(k phi) - k F(phi) agree with the declared ones"},
       1e-8, keys("generators", "batch", "t"), log_indices},
      {{"permutation-property", "permutation property of hierarchies",
        "F_n(pi phi) = pi F_n(phi) for every permutation"},
       1e-12, keys("hierarchy", "n_max", "batch", "t"), permutation_property},
      {{"tensor-derivation", "Leibniz rule of tensor derivations",
        "canonical lifts satisfy the tensor-derivation rule for every composition of n"},
       1e-10, keys("hierarchy", "n_max", "batch", "t"), tensor_derivation},
      {{"derivation-bracket", "tensor derivations form a Lie algebra",
        "the level-wise bracket of two tensor derivations is a tensor derivation"},
       1e-8, keys("left", "right", "n_max", "batch", "t"), derivation_bracket},
      {{"bracket-indices", "logarithmic indices of a bracket",
        "indices of [F,G] estimated numerically equal the pair bracket of the inputs"},
       1e-6, keys("left", "right", "batch", "t"), bracket_indices},
      {{"canonical-decomposition", "canonical decomposition theorem",
        "generators are recovered from the hierarchy they build"},
       1e-8, keys("generators", "n_max", "batch", "t"), canonical_decomposition},
      {{"decomposition-idempotence", "canonical decomposition, idempotents d_j",
        "d_k of the canonical lift of d_j F is d_j F for k = j and zero otherwise"},
       1e-8, keys("generators", "n_max", "batch", "t"), decomposition_idempotence},
      {{"liftdeltal-identity", "obstruction identity for brackets of canonical lifts",
        "[F#, G#] - [F#_m, G]# equals the sum of natural-part brackets over J not in K"},
       1e-8, keys("pairs", "batch", "t", "vanish_tol"), liftdeltal_identity},
      {{"linear-obstruction", "Lambda representation of the index algebra",
        "pairs of real-linear or pure Lambda generators have no obstruction"},
       1e-10, keys("pairs", "batch", "t", "vanish_tol"), linear_obstruction},
      {{"two-particle-obstruction", "two-particle criterion for lifting one-particle symmetries",
        "two-particle obstruction and the n-particle lift-commutation defect vanish together"},
       1e-8, keys("F", "K", "n", "expect", "bound", "batch", "t", "vanish_tol"), two_particle_obstruction},
      {{"added-generator-obstruction", "obstruction of an added generator above threshold 1",
        "the lift-commutation defect at n = l + 1 equals minus the sum over omitted slots"},
       1e-8, keys("K", "G", "batch", "t", "vanish_tol"), added_generator_obstruction},
      {{"separation-evolution", "separating hierarchies",
        "product of separately evolved factors against the evolved product; RK4 ratio 16 per halving"},
       4.0, keys("hierarchy", "n_max", "n1", "n2", "dt", "t1"),
       [](const Ctx& c, const Node& p, std::uint64_t s) { return separation(c, p, s, false); }},
      {{"separation-plateau", "separating hierarchies (non-separating counterexample)",
        "a hierarchy that is not a tensor derivation keeps a separation defect above the floor"},
       0.0, keys("hierarchy", "n_max", "n1", "n2", "dt", "t1", "floor"),
       [](const Ctx& c, const Node& p, std::uint64_t s) { return separation(c, p, s, true); }},
      {{"scaling-indices", "scaling of evolution operators and the index ODE",
        "E(k phi) = k^(a,b) E(phi) and (a,b) = exp(-i p T / hbar) for p = q; RK4 ratio 16 per halving"},
       4.0, keys("generator", "k", "dt", "t1"), scaling_indices},
      {{"index-extraction", "logarithmic indices from exponential indices",
        "(p(t), q(t)) = i hbar d/dt' (a, b) at t' = t; second-order ratio 4 per halving"},
       1.0, keys("p", "q", "t", "dt"), index_extraction},
      {{"index-law", "evolution law of Lambda symmetry indices",
        "hbar (c,d)' = [(-i p, -i q), (c,d)] along the closed-form flow"},
       1e-6, keys("pq", "cd", "t", "dt"), index_law},
      {{"freelift-exact-parts", "point space-time symmetries lift freely",
        "phase and multiplication parts of the point-symmetry obstruction vanish exactly"},
       1e-10, keys("F", "point", "grid_sizes", "batch", "t", "corollary2"),
       [](const Ctx& c, const Node& p, std::uint64_t s) { return freelift(c, p, s, false); }},
      {{"freelift-grid-ladder", "point space-time symmetries lift freely",
        "discrete-derivative part of the obstruction shrinks by 4 per grid refinement"},
       1.0, keys("F", "point", "grid_sizes", "batch", "t", "corollary2"),
       [](const Ctx& c, const Node& p, std::uint64_t s) { return freelift(c, p, s, true); }},
      {{"lattice-shift-symmetry", "criterion for finite symmetries of evolution equations",
        "exact lattice translations are symmetries of translation-invariant hierarchies"},
       1e-12, keys("symmetry", "hierarchy", "n_max", "batch", "t", "dt_sym"), lattice_symmetry},
      {{"symmetry-composition", "composition and inverses of finite symmetries",
        "compositions and inverses of symmetries are symmetries"},
       1e-12, keys("symmetries", "hierarchy", "n_max", "batch", "t", "dt_sym"), symmetry_composition},
      {{"infinitesimal-symmetry", "infinitesimal symmetry condition",
        "hbar dK/dt = [i'F, K] - d/dt(tau i'F) for each listed symmetry"},
       1e-9, keys("symmetries", "hierarchy", "n_max", "batch", "t", "dt_sym"), inf_symmetries},
      {{"infinitesimal-symmetry-bracket", "bracket of two infinitesimal symmetries",
        "[K,L] with tau_[K,L] satisfies the infinitesimal symmetry condition"},
       1e-6, keys("K", "L", "hierarchy", "n_max", "batch", "t", "dt_sym"), inf_bracket},
      {{"generator-symmetry-bracket", "symmetry condition on canonical generators",
        "d_j of both sides of the infinitesimal symmetry condition agree for every j"},
       1e-8, keys("symmetry", "hierarchy", "n_max", "batch", "t", "dt_sym"), generator_symmetry_bracket},
      {{"internal-dof-obstruction", "obstruction with internal degrees of freedom",
        "spin rotations against a spin-correlating generator keep a grid-independent obstruction"},
       1e-8, keys("F", "K", "grid_sizes", "seeds", "batch", "t", "bound"), internal_dof},
  };
  return defs;
}

}  // namespace nlsh::cli::detail
