#include "nlsh/obstruction.hpp"

#include <algorithm>

#include "nlsh/errors.hpp"

namespace nlsh {

namespace {

constexpr std::uint64_t kCheckSeed = 0x5eedULL;
constexpr int kCheckCount = 4;

void require_range(const Generator& F, const Generator& G, int n) {
  const int l = F.threshold(), m = G.threshold();
  if (l < 1 || l > m) {
    throw BadRange("obstruction needs 1 <= l <= m, got l=" + std::to_string(l) + ", m=" + std::to_string(m));
  }
  if (n <= m) throw BadRange("obstruction needs n > m, got n=" + std::to_string(n) + ", m=" + std::to_string(m));
  if (n > limits().max_particles) {
    throw SizeLimit("n=" + std::to_string(n) + " exceeds the particle cap " + std::to_string(limits().max_particles));
  }
  if (!(F.op.space() == G.op.space())) throw SpaceMismatch("generators on different spaces");
}

bool subset(const IndexTuple& J, const IndexTuple& K) {
  return std::all_of(J.begin(), J.end(), [&](int j) { return std::find(K.begin(), K.end(), j) != K.end(); });
}

// [A, B] phi given the images A phi and B phi.
WaveFunction bracket_value(const NonlinearOperator& A, const NonlinearOperator& B, double t, const WaveFunction& phi,
                           const WaveFunction& a, const WaveFunction& b) {
  return frechet(A, t, phi, b) - frechet(B, t, phi, a);
}

WaveFunction lhs_with(const Generator& F, const Generator& G, const Generator& bracket_gen, int n, double t,
                      const WaveFunction& phi) {
  const NonlinearOperator Fn = canonical_lift(F, n);
  const NonlinearOperator Gn = canonical_lift(G, n);
  return lie_bracket(Fn, Gn)(t, phi) - canonical_lift(bracket_gen, n)(t, phi);
}

}  // namespace

NonlinearOperator natural_generator(const Generator& g) {
  if (g.threshold() > 1) return g.op;
  return natural_part(g.op, g.indices);
}

WaveFunction obstruction_rhs(const Generator& F, const Generator& G, int n, double t, const WaveFunction& phi) {
  require_range(F, G, n);
  require_nonzero(phi, "obstruction");
  const NonlinearOperator Fn = natural_generator(F);
  const NonlinearOperator Gn = natural_generator(G);

  const auto Js = increasing_tuples(F.threshold(), n);
  const auto Ks = increasing_tuples(G.threshold(), n);
  std::vector<NonlinearOperator> A, B;
  std::vector<WaveFunction> a, b;
  for (const IndexTuple& J : Js) {
    A.push_back(lifting(Fn, J, n));
    a.push_back(A.back()(t, phi));
  }
  for (const IndexTuple& K : Ks) {
    B.push_back(lifting(Gn, K, n));
    b.push_back(B.back()(t, phi));
  }
  WaveFunction total = WaveFunction::zeros(phi.space(), n);
  for (std::size_t k = 0; k < Ks.size(); ++k)
    for (std::size_t j = 0; j < Js.size(); ++j)
      if (!subset(Js[j], Ks[k])) total = total + bracket_value(A[j], B[k], t, phi, a[j], b[k]);
  return total;
}

Generator bracket_generator(const Generator& F, const Generator& G, double t, std::uint64_t seed) {
  const int m = G.threshold();
  Generator bg = m == 1 ? Generator{lie_bracket(F.op, G.op).with_indices(pair_bracket(F.indices, G.indices)),
                                    pair_bracket(F.indices, G.indices)}
                        : Generator{lie_bracket(canonical_lift(F, m), G.op).with_indices(IndexPair{}), IndexPair{}};
  require_generator(bg, t, seed, kCheckCount, 1e-6);
  return bg;
}

WaveFunction obstruction_lhs(const Generator& F, const Generator& G, int n, double t, const WaveFunction& phi) {
  require_range(F, G, n);
  require_nonzero(phi, "obstruction");
  return lhs_with(F, G, bracket_generator(F, G, t, kCheckSeed), n, t, phi);
}

WaveFunction corollary1_obstruction(const Generator& F, const Generator& K, double t, const WaveFunction& phi) {
  if (F.threshold() != 1 || K.threshold() != 1) throw BadRange("corollary 1 takes one-particle generators");
  if (phi.particles() != 2) throw SpaceMismatch("corollary 1 acts on two-particle states");
  require_nonzero(phi, "corollary 1 obstruction");
  const NonlinearOperator Fn = natural_generator(F);
  const NonlinearOperator Kn = natural_generator(K);
  WaveFunction total = WaveFunction::zeros(phi.space(), 2);
  for (int j = 0; j < 2; ++j) {
    const NonlinearOperator A = lifting(Fn, {j}, 2);
    const NonlinearOperator B = lifting(Kn, {1 - j}, 2);
    total = total + bracket_value(A, B, t, phi, A(t, phi), B(t, phi));
  }
  return total;
}

WaveFunction corollary2_obstruction(const Generator& G, const Generator& K, double t, const WaveFunction& phi) {
  const int l = G.threshold();
  if (l < 2 || K.threshold() != 1) throw BadRange("corollary 2 takes a generator above threshold 1 and a one-particle K");
  const int n = l + 1;
  if (phi.particles() != n) throw SpaceMismatch("corollary 2 acts on " + std::to_string(n) + "-particle states");
  require_nonzero(phi, "corollary 2 obstruction");
  const NonlinearOperator Kn = natural_generator(K);
  WaveFunction total = WaveFunction::zeros(phi.space(), n);
  for (int j = 0; j < n; ++j) {
    IndexTuple hat;
    for (int k = 0; k < n; ++k)
      if (k != j) hat.push_back(k);
    const NonlinearOperator A = lifting(G.op, hat, n);
    const NonlinearOperator B = lifting(Kn, {j}, n);
    total = total + bracket_value(A, B, t, phi, A(t, phi), B(t, phi));
  }
  return total;
}

std::string to_string(ObstructionKind kind) {
  switch (kind) {
    case ObstructionKind::Theorem10: return "theorem10";
    case ObstructionKind::Corollary1: return "corollary1";
    case ObstructionKind::Corollary2: return "corollary2";
  }
  return "unknown";
}

ObstructionReport obstruction_report(ObstructionKind kind, const Generator& F, const Generator& G, int n,
                                     const ObstructionOptions& opts) {
  if (opts.batch_size < 1) throw BadRange("obstruction batch must be non-empty");
  ObstructionReport r;
  r.kind = kind;
  r.ell = F.threshold();
  r.m = G.threshold();
  r.n = n;
  r.seed = opts.seed;
  r.batch_size = opts.batch_size;
  r.vanish_tol = opts.vanish_tol;
  if (!F.op.has_derivative() || !G.op.has_derivative()) {
    r.warnings.push_back("finite-difference fallback inside obstruction brackets");
  }
  const ConfigSpace& space = F.op.space();
  const StateOptions nz{.nowhere_zero = true};

  switch (kind) {
    case ObstructionKind::Theorem10: {
      require_range(F, G, n);
      const Generator bg = bracket_generator(F, G, opts.t, kCheckSeed);
      for (const WaveFunction& phi : random_batch(n, space, opts.seed, opts.batch_size, nz)) {
        const WaveFunction lhs = lhs_with(F, G, bg, n, opts.t, phi);
        const WaveFunction rhs = obstruction_rhs(F, G, n, opts.t, phi);
        r.lhs_norm = std::max(r.lhs_norm, lhs.norm_inf());
        r.rhs_norm = std::max(r.rhs_norm, rhs.norm_inf());
        r.identity_residual = std::max(r.identity_residual, distance(lhs, rhs));
        r.state_norms.push_back(phi.norm_inf());
      }
      break;
    }
    case ObstructionKind::Corollary1: {
      if (r.ell != 1 || r.m != 1) throw BadRange("corollary 1 takes one-particle generators");
      require_range(F, G, n);
      const Generator bg = bracket_generator(F, G, opts.t, kCheckSeed);
      for (const WaveFunction& phi : random_batch(2, space, opts.seed, opts.batch_size, nz)) {
        const WaveFunction rhs = corollary1_obstruction(F, G, opts.t, phi);
        const WaveFunction lhs2 = lhs_with(F, G, bg, 2, opts.t, phi);
        r.rhs_norm = std::max(r.rhs_norm, rhs.norm_inf());
        r.identity_residual = std::max(r.identity_residual, distance(lhs2, rhs));
        r.state_norms.push_back(phi.norm_inf());
      }
      for (const WaveFunction& phi : random_batch(n, space, mix_seed(opts.seed, 77), opts.batch_size, nz)) {
        r.lhs_norm = std::max(r.lhs_norm, lhs_with(F, G, bg, n, opts.t, phi).norm_inf());
      }
      break;
    }
    case ObstructionKind::Corollary2: {
      if (r.ell != 1 || r.m < 2) throw BadRange("corollary 2 takes a one-particle K and a generator above threshold 1");
      if (n != r.m + 1) throw BadRange("corollary 2 lives at n = l + 1 = " + std::to_string(r.m + 1));
      require_range(F, G, n);
      const Generator bg = bracket_generator(F, G, opts.t, kCheckSeed);
      for (const WaveFunction& phi : random_batch(n, space, opts.seed, opts.batch_size, nz)) {
        const WaveFunction rhs = corollary2_obstruction(G, F, opts.t, phi);
        const WaveFunction lhs = lhs_with(F, G, bg, n, opts.t, phi);
        r.lhs_norm = std::max(r.lhs_norm, lhs.norm_inf());
        r.rhs_norm = std::max(r.rhs_norm, rhs.norm_inf());
        r.identity_residual = std::max(r.identity_residual, (lhs + rhs).norm_inf());
        r.state_norms.push_back(phi.norm_inf());
      }
      break;
    }
  }
  for (double s : r.state_norms) r.scale = std::max(r.scale, s);
  r.relative_residual = r.identity_residual / std::max({1.0, r.lhs_norm, r.rhs_norm});
  r.vanishes = r.rhs_norm <= r.vanish_tol * std::max(1.0, r.scale);
  return r;
}

nlohmann::json to_json(const ObstructionReport& r) {
  return nlohmann::json{{"kind", to_string(r.kind)},
                        {"ell", r.ell},
                        {"m", r.m},
                        {"n", r.n},
                        {"lhs_norm", r.lhs_norm},
                        {"rhs_norm", r.rhs_norm},
                        {"identity_residual", r.identity_residual},
                        {"relative_residual", r.relative_residual},
                        {"vanishes", r.vanishes},
                        {"vanish_tol", r.vanish_tol},
                        {"scale", r.scale},
                        {"seed", r.seed},
                        {"batch_size", r.batch_size},
                        {"state_norms", r.state_norms},
                        {"warnings", r.warnings}};
}

}  // namespace nlsh
