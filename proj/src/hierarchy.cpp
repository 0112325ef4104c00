#include "nlsh/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "nlsh/errors.hpp"
#include "nlsh/operators.hpp"

namespace nlsh {

namespace {

// index[s * width + y]: flat m-particle position of local entry y in slice s.
struct SliceTable {
  std::size_t slices = 0;
  std::size_t width = 0;
  std::vector<std::size_t> index;
};

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

void validate_tuple(const IndexTuple& J, int m) {
  if (J.empty()) throw BadTuple("empty index tuple");
  if (static_cast<int>(J.size()) > m) throw BadTuple("index tuple longer than the particle number");
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (int j : J) {
    if (j < 0 || j >= m) throw BadTuple("slot " + std::to_string(j) + " outside 0.." + std::to_string(m - 1));
    if (seen[static_cast<std::size_t>(j)]) throw BadTuple("repeated slot " + std::to_string(j));
    seen[static_cast<std::size_t>(j)] = true;
  }
}

SliceTable make_slices(std::size_t d, int m, const IndexTuple& J) {
  const int l = static_cast<int>(J.size());
  std::vector<int> others;
  for (int k = 0; k < m; ++k)
    if (std::find(J.begin(), J.end(), k) == J.end()) others.push_back(k);

  std::vector<std::size_t> weight(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) weight[static_cast<std::size_t>(k)] = ipow(d, m - 1 - k);

  SliceTable table;
  table.slices = ipow(d, m - l);
  table.width = ipow(d, l);
  table.index.resize(table.slices * table.width);
  for (std::size_t s = 0; s < table.slices; ++s) {
    std::size_t base = 0, rest = s;
    for (int k = static_cast<int>(others.size()) - 1; k >= 0; --k) {
      base += (rest % d) * weight[static_cast<std::size_t>(others[static_cast<std::size_t>(k)])];
      rest /= d;
    }
    for (std::size_t y = 0; y < table.width; ++y) {
      std::size_t pos = base, r = y;
      for (int k = l - 1; k >= 0; --k) {
        pos += (r % d) * weight[static_cast<std::size_t>(J[static_cast<std::size_t>(k)])];
        r /= d;
      }
      table.index[s * table.width + y] = pos;
    }
  }
  return table;
}

WaveFunction gather(const WaveFunction& phi, const SliceTable& table, std::size_t s, int l) {
  std::vector<cplx> v(table.width);
  const std::size_t* idx = &table.index[s * table.width];
  for (std::size_t y = 0; y < table.width; ++y) v[y] = phi[idx[y]];
  return WaveFunction(phi.space(), l, std::move(v));
}

void scatter(std::vector<cplx>& out, const WaveFunction& part, const SliceTable& table, std::size_t s) {
  const std::size_t* idx = &table.index[s * table.width];
  for (std::size_t y = 0; y < table.width; ++y) out[idx[y]] = part[y];
}

std::string tuple_label(const IndexTuple& J) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < J.size(); ++k) os << (k ? "," : "") << J[k] + 1;
  os << ")";
  return os.str();
}

}  // namespace

NonlinearOperator lifting(const NonlinearOperator& F, const IndexTuple& J, int m) {
  validate_tuple(J, m);
  const int l = F.particles();
  if (static_cast<int>(J.size()) != l) {
    throw BadTuple("tuple of length " + std::to_string(J.size()) + " for a " + std::to_string(l) +
                   "-particle operator");
  }
  const ConfigSpace& space = F.space();
  (void)flat_size(space, m);
  auto table = std::make_shared<const SliceTable>(make_slices(space.size(), m, J));

  NonlinearOperator::Parts p;
  p.eval = [F, table, l](double t, const WaveFunction& phi) {
    std::vector<cplx> out(phi.size());
    for (std::size_t s = 0; s < table->slices; ++s) scatter(out, F(t, gather(phi, *table, s, l)), *table, s);
    return WaveFunction(phi.space(), phi.particles(), std::move(out));
  };
  if (F.has_derivative()) {
    p.derivative = [F, table, l](double t, const WaveFunction& phi, const WaveFunction& eta) {
      std::vector<cplx> out(phi.size());
      for (std::size_t s = 0; s < table->slices; ++s) {
        scatter(out, F.derivative(t, gather(phi, *table, s, l), gather(eta, *table, s, l)), *table, s);
      }
      return WaveFunction(phi.space(), phi.particles(), std::move(out));
    };
  }
  if (F.has_second_derivative()) {
    p.second_derivative = [F, table, l](double t, const WaveFunction& phi, const WaveFunction& e1,
                                        const WaveFunction& e2) {
      std::vector<cplx> out(phi.size());
      for (std::size_t s = 0; s < table->slices; ++s) {
        scatter(out,
                F.second_derivative(t, gather(phi, *table, s, l), gather(e1, *table, s, l),
                                    gather(e2, *table, s, l)),
                *table, s);
      }
      return WaveFunction(phi.space(), phi.particles(), std::move(out));
    };
  }
  p.indices = F.indices();
  p.time_dependent = F.time_dependent();
  p.needs_nonzero = F.needs_nonzero();
  return NonlinearOperator(F.name() + "^" + tuple_label(J), space, m, std::move(p));
}

WaveFunction lift_J(const NonlinearOperator& F, const IndexTuple& J, int m, double t, const WaveFunction& phi) {
  return lifting(F, J, m)(t, phi);
}

std::vector<IndexTuple> increasing_tuples(int l, int n) {
  std::vector<IndexTuple> out;
  if (l < 0 || l > n) return out;
  IndexTuple cur(static_cast<std::size_t>(l));
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == l) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v <= n - (l - pos); ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, v + 1);
    }
  };
  rec(0, 0);
  return out;
}

Generator make_generator(NonlinearOperator op) {
  if (op.particles() == 1) {
    const IndexPair idx = op.indices().value_or(IndexPair{});
    return Generator{std::move(op), idx};
  }
  if (op.indices() && distance(*op.indices(), IndexPair{}) > 0.0) {
    throw BadRange("generator '" + op.name() + "' above threshold 1 declares nonzero logarithmic indices");
  }
  return Generator{op.with_indices(IndexPair{}), IndexPair{}};
}

GeneratorCheck check_generator(const Generator& g, double t, std::uint64_t seed, int count, double tol) {
  GeneratorCheck c;
  const int l = g.threshold();
  const ConfigSpace& space = g.op.space();
  const auto batch = random_batch(l, space, seed, count, {.nowhere_zero = true});
  double scale = 1.0;
  for (const WaveFunction& phi : batch) scale = std::max(scale, g.op(t, phi).norm_inf());

  const LogIndexEstimate est = estimate_log_indices(g.op, t, batch);
  c.index_residual = std::max(est.residual, distance(est.indices, g.indices));
  if (l > 1) {
    for (int k = 0; k < count; ++k) {
      std::vector<WaveFunction> factors;
      for (int j = 0; j < l; ++j) {
        factors.push_back(random_state(1, space, mix_seed(seed, 7000 + 31 * static_cast<std::uint64_t>(k) + j),
                                       {.nowhere_zero = true}));
      }
      c.product_residual = std::max(c.product_residual, g.op(t, tensor(factors)).norm_inf());
    }
  }
  c.permutation_residual = check_permutation_property(g.op, t, batch);
  const double limit = tol * scale;
  c.valid = c.index_residual <= limit && c.product_residual <= limit && c.permutation_residual <= limit;
  return c;
}

void require_generator(const Generator& g, double t, std::uint64_t seed, int count, double tol) {
  const GeneratorCheck c = check_generator(g, t, seed, count, tol);
  if (!c.valid) {
    std::ostringstream os;
    os << "'" << g.op.name() << "' is not a generator at threshold " << g.threshold()
       << ": index residual " << c.index_residual << ", product residual " << c.product_residual
       << ", permutation residual " << c.permutation_residual;
    throw NotDerivation(os.str());
  }
}

NonlinearOperator lambda_op(const IndexPair& idx, const ConfigSpace& space, int n) {
  return lambda_operator(idx, space, n);
}

NonlinearOperator natural_part(const NonlinearOperator& F, const IndexPair& idx) {
  if (idx == IndexPair{}) return F.with_indices(IndexPair{});
  return (F - lambda_op(idx, F.space(), F.particles())).with_indices(IndexPair{}).renamed(F.name() + "^nat");
}

NonlinearOperator canonical_lift_1p(const Generator& g, int n) {
  if (g.threshold() != 1) throw BadRange("one-particle canonical lift of a threshold-" +
                                         std::to_string(g.threshold()) + " generator");
  if (n < 1) throw BadRange("particle number must be positive");
  std::vector<NonlinearOperator> terms;
  for (int j = 0; j < n; ++j) terms.push_back(lifting(g.op, {j}, n));
  NonlinearOperator acc = sum(terms, g.op.space(), n);
  if (n > 1 && g.indices != IndexPair{}) {
    acc = acc - cplx{static_cast<double>(n - 1)} * lambda_op(g.indices, g.op.space(), n);
  }
  return acc.with_indices(g.indices).renamed(g.op.name() + "#" + std::to_string(n));
}

NonlinearOperator canonical_lift_gen(const Generator& g, int n) {
  const int l = g.threshold();
  if (n < l) throw BadRange("canonical lift to " + std::to_string(n) + " particles below threshold " +
                            std::to_string(l));
  std::vector<NonlinearOperator> terms;
  for (const IndexTuple& J : increasing_tuples(l, n)) terms.push_back(lifting(g.op, J, n));
  return sum(terms, g.op.space(), n).with_indices(g.indices).renamed(g.op.name() + "#" + std::to_string(n));
}

NonlinearOperator canonical_lift(const Generator& g, int n) {
  if (n < g.threshold()) return zero_operator(g.op.space(), n);
  if (g.threshold() == 1) return canonical_lift_1p(g, n);
  return canonical_lift_gen(g, n);
}

Hierarchy::Hierarchy(ConfigSpace space, std::vector<NonlinearOperator> levels)
    : space_(std::move(space)), levels_(std::move(levels)) {
  if (levels_.empty()) throw BadRange("a hierarchy needs at least one level");
  if (static_cast<int>(levels_.size()) > limits().max_particles) {
    throw SizeLimit("hierarchy truncation " + std::to_string(levels_.size()) + " exceeds the particle cap " +
                    std::to_string(limits().max_particles));
  }
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (levels_[k].particles() != static_cast<int>(k) + 1 || !(levels_[k].space() == space_)) {
      throw SpaceMismatch("hierarchy level " + std::to_string(k + 1) + " holds operator '" + levels_[k].name() +
                          "' of the wrong shape");
    }
  }
}

Hierarchy Hierarchy::from_generators(const ConfigSpace& space, std::span<const Generator> gens, int n_max) {
  std::vector<NonlinearOperator> levels;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<NonlinearOperator> terms;
    for (const Generator& g : gens) {
      if (!(g.op.space() == space)) throw SpaceMismatch("generator '" + g.op.name() + "' on a different space");
      if (n >= g.threshold()) terms.push_back(canonical_lift(g, n));
    }
    levels.push_back(sum(terms, space, n));
  }
  return Hierarchy(space, std::move(levels));
}

Hierarchy Hierarchy::zero(const ConfigSpace& space, int n_max) {
  std::vector<NonlinearOperator> levels;
  for (int n = 1; n <= n_max; ++n) levels.push_back(zero_operator(space, n));
  return Hierarchy(space, std::move(levels));
}

const NonlinearOperator& Hierarchy::level(int n) const {
  if (n < 1 || n > n_max()) {
    throw BadRange("level " + std::to_string(n) + " outside 1.." + std::to_string(n_max()));
  }
  return levels_[static_cast<std::size_t>(n - 1)];
}

namespace {

template <typename Op>
Hierarchy levelwise(const Hierarchy& x, const Hierarchy& y, Op op) {
  if (!(x.space() == y.space()) || x.n_max() != y.n_max()) {
    throw SpaceMismatch("hierarchies with different spaces or truncations");
  }
  std::vector<NonlinearOperator> levels;
  for (int n = 1; n <= x.n_max(); ++n) levels.push_back(op(x.level(n), y.level(n)));
  return Hierarchy(x.space(), std::move(levels));
}

}  // namespace

Hierarchy operator+(const Hierarchy& x, const Hierarchy& y) {
  return levelwise(x, y, [](const auto& a, const auto& b) { return a + b; });
}

Hierarchy operator-(const Hierarchy& x, const Hierarchy& y) {
  return levelwise(x, y, [](const auto& a, const auto& b) { return a - b; });
}

Hierarchy operator*(cplx c, const Hierarchy& x) {
  std::vector<NonlinearOperator> levels;
  for (const NonlinearOperator& F : x.levels()) levels.push_back(c * F);
  return Hierarchy(x.space(), std::move(levels));
}

Hierarchy bracket(const Hierarchy& F, const Hierarchy& G) {
  return levelwise(F, G, [](const auto& a, const auto& b) { return lie_bracket(a, b); });
}

double tensor_derivation_residual(const Hierarchy& H, double t, std::span<const WaveFunction> factors) {
  if (factors.empty()) throw BadRange("tensor derivation residual needs at least one factor");
  int n = 0;
  for (const WaveFunction& f : factors) n += f.particles();
  if (n > H.n_max()) {
    throw BadRange("factors carry " + std::to_string(n) + " particles, beyond truncation " +
                   std::to_string(H.n_max()));
  }
  const WaveFunction product = tensor(factors);
  WaveFunction lhs = WaveFunction::zeros(H.space(), n);
  for (std::size_t j = 0; j < factors.size(); ++j) {
    std::vector<WaveFunction> parts(factors.begin(), factors.end());
    parts[j] = H.level(factors[j].particles())(t, factors[j]);
    lhs = lhs + tensor(parts);
  }
  return distance(lhs, H.level(n)(t, product));
}

namespace {

void compositions(int n, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    if (cur.size() >= 2) out.push_back(cur);
    return;
  }
  for (int k = 1; k <= n; ++k) {
    cur.push_back(k);
    compositions(n - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

double derivation_check(const Hierarchy& H, const BatchSpec& batch) {
  double worst = 0.0;
  std::uint64_t salt = 0;
  for (int n = 2; n <= H.n_max(); ++n) {
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(n, cur, comps);
    for (const auto& comp : comps) {
      for (int k = 0; k < batch.count; ++k) {
        std::vector<WaveFunction> factors;
        for (int nj : comp) {
          factors.push_back(random_state(nj, H.space(), mix_seed(batch.seed, 20000 + salt++), {.nowhere_zero = true}));
        }
        worst = std::max(worst, tensor_derivation_residual(H, batch.t, factors));
      }
    }
  }
  return worst;
}

double permutation_check(const Hierarchy& H, const BatchSpec& batch) {
  double worst = 0.0;
  for (int n = 2; n <= H.n_max(); ++n) {
    const auto states = random_batch(n, H.space(), mix_seed(batch.seed, 300 + static_cast<std::uint64_t>(n)),
                                     batch.count, {.nowhere_zero = true});
    worst = std::max(worst, check_permutation_property(H.level(n), batch.t, states));
  }
  return worst;
}

double hierarchy_distance(const Hierarchy& F, const Hierarchy& G, const BatchSpec& batch) {
  if (F.n_max() != G.n_max()) throw SpaceMismatch("hierarchies with different truncations");
  double worst = 0.0;
  for (int n = 1; n <= F.n_max(); ++n) {
    const auto states = random_batch(n, F.space(), mix_seed(batch.seed, 400 + static_cast<std::uint64_t>(n)),
                                     batch.count, {.nowhere_zero = true});
    for (const WaveFunction& phi : states) {
      worst = std::max(worst, distance(F.level(n)(batch.t, phi), G.level(n)(batch.t, phi)));
    }
  }
  return worst;
}

double level_norm(const Hierarchy& F, int n, const BatchSpec& batch) {
  const auto states = random_batch(n, F.space(), mix_seed(batch.seed, 400 + static_cast<std::uint64_t>(n)),
                                   batch.count, {.nowhere_zero = true});
  double worst = 0.0;
  for (const WaveFunction& phi : states) worst = std::max(worst, F.level(n)(batch.t, phi).norm_inf());
  return worst;
}

int threshold(const Hierarchy& F, const BatchSpec& batch, double tol) {
  for (int n = 1; n <= F.n_max(); ++n)
    if (level_norm(F, n, batch) > tol) return n;
  return F.n_max() + 1;
}

double generator_distance(const Generator& g, const Generator& h, const BatchSpec& batch) {
  if (g.threshold() != h.threshold()) throw SpaceMismatch("generators at different thresholds");
  const auto states = random_batch(g.threshold(), g.op.space(), mix_seed(batch.seed, 500), batch.count,
                                   {.nowhere_zero = true});
  double worst = distance(g.indices, h.indices);
  for (const WaveFunction& phi : states) worst = std::max(worst, distance(g.op(batch.t, phi), h.op(batch.t, phi)));
  return worst;
}

Hierarchy component(const ConfigSpace& space, const Generator& g, int n_max) {
  return Hierarchy::from_generators(space, std::span<const Generator>(&g, 1), n_max);
}

std::vector<Generator> canonical_decompose(const Hierarchy& H, const DecomposeOptions& opts) {
  double scale = 1.0;
  for (int n = 1; n <= H.n_max(); ++n) scale = std::max(scale, level_norm(H, n, opts.batch));
  const double defect = derivation_check(H, opts.batch);
  if (defect > opts.tol * scale) {
    std::ostringstream os;
    os << "hierarchy fails the tensor-derivation check: residual " << defect << " > " << opts.tol * scale;
    throw NotDerivation(os.str());
  }

  std::vector<Generator> gens;
  Hierarchy rest = H;
  for (int j = 1; j <= H.n_max(); ++j) {
    NonlinearOperator op = rest.level(j);
    IndexPair idx{};
    if (j == 1) {
      if (op.indices()) {
        idx = *op.indices();
      } else {
        const auto states = random_batch(1, H.space(), mix_seed(opts.batch.seed, 600), opts.batch.count,
                                         {.nowhere_zero = true});
        idx = estimate_log_indices(op, opts.batch.t, states).indices;
      }
    }
    Generator g{op.with_indices(idx).renamed("d" + std::to_string(j)), idx};
    rest = rest - component(H.space(), g, H.n_max());
    gens.push_back(std::move(g));
  }
  return gens;
}

}  // namespace nlsh
