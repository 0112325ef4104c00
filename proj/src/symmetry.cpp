#include "nlsh/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "nlsh/errors.hpp"
#include "nlsh/operators.hpp"

namespace nlsh {

namespace {

const cplx kIbar{0.0, -1.0};

std::vector<NonlinearOperator> levels_of(int n_max, const std::function<NonlinearOperator(int)>& make) {
  std::vector<NonlinearOperator> out;
  for (int n = 1; n <= n_max; ++n) out.push_back(make(n));
  return out;
}

WaveFunction zeros_like(const WaveFunction& phi) { return WaveFunction::zeros(phi.space(), phi.particles()); }

// phi -> dK/dt(t0) phi, frozen at t0.
NonlinearOperator frozen_time_derivative(const NonlinearOperator& K, double t0, double dt) {
  NonlinearOperator::Parts p;
  p.eval = [K, t0, dt](double, const WaveFunction& phi) { return time_derivative(K, t0, phi, dt); };
  if (K.has_derivative()) {
    p.derivative = [K, t0, dt](double, const WaveFunction& phi, const WaveFunction& eta) {
      if (!K.time_dependent()) return zeros_like(phi);
      return cplx{1.0 / (2.0 * dt)} * (K.derivative(t0 + dt, phi, eta) - K.derivative(t0 - dt, phi, eta));
    };
  }
  p.needs_nonzero = K.needs_nonzero();
  return NonlinearOperator("d/dt " + K.name(), K.space(), K.particles(), std::move(p));
}

// Lambda(idx(t)) with closed-form derivatives.
NonlinearOperator lambda_time_operator(std::function<IndexPair(double)> idx, bool time_dependent,
                                       const ConfigSpace& space, int n) {
  NonlinearOperator::Parts p;
  p.eval = [idx](double t, const WaveFunction& phi) {
    require_nonzero(phi, "Lambda");
    const IndexPair a = idx(t);
    std::vector<cplx> out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = pair_action(a, principal_log(phi[x])) * phi[x];
    return WaveFunction(phi.space(), phi.particles(), std::move(out));
  };
  p.derivative = [idx](double t, const WaveFunction& phi, const WaveFunction& eta) {
    require_nonzero(phi, "Lambda");
    const IndexPair a = idx(t);
    std::vector<cplx> out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
      out[x] = pair_action(a, eta[x] / phi[x]) * phi[x] + pair_action(a, principal_log(phi[x])) * eta[x];
    }
    return WaveFunction(phi.space(), phi.particles(), std::move(out));
  };
  p.second_derivative = [idx](double t, const WaveFunction& phi, const WaveFunction& e1, const WaveFunction& e2) {
    require_nonzero(phi, "Lambda");
    const IndexPair a = idx(t);
    std::vector<cplx> out(phi.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
      const cplx z = phi[x];
      out[x] = pair_action(a, e2[x] / z) * e1[x] + pair_action(a, e1[x] / z) * e2[x] +
               pair_action(a, -e1[x] * e2[x] / (z * z)) * z;
    }
    return WaveFunction(phi.space(), phi.particles(), std::move(out));
  };
  if (!time_dependent) p.indices = idx(0.0);
  p.time_dependent = time_dependent;
  p.needs_nonzero = true;
  return NonlinearOperator("Lambda(i gamma, i delta)", space, n, std::move(p));
}

double spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
}

std::vector<double> ratios(const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) out.push_back(v[k + 1] > 0.0 ? v[k] / v[k + 1] : 0.0);
  return out;
}

Mat2 scaled(double s, const Mat2& m) {
  Mat2 out = m;
  for (auto& row : out.m)
    for (double& v : row) v *= s;
  return out;
}

}  // namespace

Affine Affine::inverse() const {
  if (slope == 0.0) throw DomainError("constant time map has no inverse");
  return {1.0 / slope, -offset / slope};
}

Affine compose(const Affine& f, const Affine& g) { return {f.slope * g.slope, f.slope * g.offset + f.offset}; }

FiniteSymmetry compose(const FiniteSymmetry& V, const FiniteSymmetry& W) {
  if (V.V.n_max() != W.V.n_max() || !(V.V.space() == W.V.space())) {
    throw SpaceMismatch("composition of symmetries on different hierarchies");
  }
  const Affine Tv = V.T;
  auto levels = levels_of(V.V.n_max(), [&](int n) {
    const NonlinearOperator Vn = V.V.level(n), Wn = W.V.level(n);
    NonlinearOperator::Parts p;
    p.eval = [Vn, Wn, Tv](double t, const WaveFunction& phi) { return Vn(t, Wn(Tv(t), phi)); };
    if (Vn.has_derivative() && Wn.has_derivative()) {
      p.derivative = [Vn, Wn, Tv](double t, const WaveFunction& phi, const WaveFunction& eta) {
        return Vn.derivative(t, Wn(Tv(t), phi), Wn.derivative(Tv(t), phi, eta));
      };
    }
    p.time_dependent = Vn.time_dependent() || Wn.time_dependent();
    p.needs_nonzero = Vn.needs_nonzero() || Wn.needs_nonzero();
    return NonlinearOperator(Vn.name() + " o " + Wn.name(), Vn.space(), n, std::move(p));
  });
  return {Hierarchy(V.V.space(), std::move(levels)), compose(W.T, V.T)};
}

FiniteSymmetry inverse(const FiniteSymmetry& V, const Hierarchy& pointwise_inverse) {
  const Affine Tinv = V.T.inverse();
  auto levels = levels_of(V.V.n_max(), [&](int n) {
    const NonlinearOperator U = pointwise_inverse.level(n);
    NonlinearOperator::Parts p;
    p.eval = [U, Tinv](double t, const WaveFunction& phi) { return U(Tinv(t), phi); };
    if (U.has_derivative()) {
      p.derivative = [U, Tinv](double t, const WaveFunction& phi, const WaveFunction& eta) {
        return U.derivative(Tinv(t), phi, eta);
      };
    }
    p.time_dependent = U.time_dependent();
    p.needs_nonzero = U.needs_nonzero();
    return NonlinearOperator(U.name(), U.space(), n, std::move(p));
  });
  return {Hierarchy(V.V.space(), std::move(levels)), Tinv};
}

WaveFunction apply(const FiniteSymmetry& V, const std::function<WaveFunction(double)>& psi, double t) {
  const WaveFunction state = psi(V.T(t));
  return V.V.level(state.particles())(t, state);
}

WaveFunction time_derivative(const NonlinearOperator& K, double t, const WaveFunction& phi, double dt) {
  if (!K.time_dependent()) return zeros_like(phi);
  if (!(dt > 0.0)) throw BadRange("time differencing step must be positive");
  return cplx{1.0 / (2.0 * dt)} * (K(t + dt, phi) - K(t - dt, phi));
}

NonlinearOperator frozen(const NonlinearOperator& K, double t0) {
  NonlinearOperator::Parts p;
  p.eval = [K, t0](double, const WaveFunction& phi) { return K(t0, phi); };
  if (K.has_derivative()) {
    p.derivative = [K, t0](double, const WaveFunction& phi, const WaveFunction& eta) {
      return K.derivative(t0, phi, eta);
    };
  }
  if (K.has_second_derivative()) {
    p.second_derivative = [K, t0](double, const WaveFunction& phi, const WaveFunction& e1, const WaveFunction& e2) {
      return K.second_derivative(t0, phi, e1, e2);
    };
  }
  p.indices = K.indices();
  p.needs_nonzero = K.needs_nonzero();
  return NonlinearOperator(K.name(), K.space(), K.particles(), std::move(p));
}

double symmetry_residual(const FiniteSymmetry& V, const Hierarchy& F, double t, const WaveFunction& phi,
                         const SymmetryOptions& opts) {
  const int n = phi.particles();
  const NonlinearOperator& Vn = V.V.level(n);
  const NonlinearOperator& Fn = F.level(n);
  const WaveFunction dV = cplx{opts.hbar} * time_derivative(Vn, t, phi, opts.dt_sym);
  const WaveFunction flow = kIbar * Fn(t, Vn(t, phi));
  const WaveFunction pulled = cplx{V.T.slope} * frechet(Vn, t, phi, kIbar * Fn(V.T(t), phi));
  return (dV - flow + pulled).norm_inf();
}

double inf_symmetry_residual(const InfinitesimalSymmetry& K, const Hierarchy& F, double t, const WaveFunction& phi,
                             const SymmetryOptions& opts) {
  const int n = phi.particles();
  const NonlinearOperator& Kn = K.K.level(n);
  const NonlinearOperator iF = kIbar * F.level(n);
  const WaveFunction dK = cplx{opts.hbar} * time_derivative(Kn, t, phi, opts.dt_sym);
  const WaveFunction br = lie_bracket(iF, Kn)(t, phi);
  WaveFunction dtau = cplx{K.tau.slope} * iF(t, phi);
  if (iF.time_dependent()) dtau = dtau + cplx{K.tau(t)} * time_derivative(iF, t, phi, opts.dt_sym);
  return (dK - br + dtau).norm_inf();
}

InfinitesimalSymmetry inf_symmetry_bracket(const InfinitesimalSymmetry& K, const InfinitesimalSymmetry& L,
                                           const SymmetryOptions& opts) {
  if (K.K.n_max() != L.K.n_max() || !(K.K.space() == L.K.space())) {
    throw SpaceMismatch("bracket of symmetries on different hierarchies");
  }
  const Affine tk = K.tau, tl = L.tau;
  const double h = opts.dt_sym;
  auto levels = levels_of(K.K.n_max(), [&](int n) {
    const NonlinearOperator Kn = K.K.level(n), Ln = L.K.level(n);
    const NonlinearOperator B = lie_bracket(Kn, Ln);
    NonlinearOperator::Parts p;
    p.eval = [B, Kn, Ln, tk, tl, h](double t, const WaveFunction& phi) {
      WaveFunction out = B(t, phi);
      if (Ln.time_dependent()) out = out + cplx{tk(t)} * time_derivative(Ln, t, phi, h);
      if (Kn.time_dependent()) out = out - cplx{tl(t)} * time_derivative(Kn, t, phi, h);
      return out;
    };
    if (B.has_derivative()) {
      p.derivative = [B, Kn, Ln, tk, tl, h](double t, const WaveFunction& phi, const WaveFunction& eta) {
        WaveFunction out = B.derivative(t, phi, eta);
        if (Ln.time_dependent()) {
          out = out + cplx{tk(t) / (2.0 * h)} * (Ln.derivative(t + h, phi, eta) - Ln.derivative(t - h, phi, eta));
        }
        if (Kn.time_dependent()) {
          out = out - cplx{tl(t) / (2.0 * h)} * (Kn.derivative(t + h, phi, eta) - Kn.derivative(t - h, phi, eta));
        }
        return out;
      };
    }
    p.time_dependent = Kn.time_dependent() || Ln.time_dependent();
    if (!p.time_dependent) p.indices = B.indices();
    p.needs_nonzero = B.needs_nonzero();
    return NonlinearOperator("[" + Kn.name() + ", " + Ln.name() + "]~", Kn.space(), n, std::move(p));
  });
  return {Hierarchy(K.K.space(), std::move(levels)), Affine{0.0, tk.offset * tl.slope - tl.offset * tk.slope}};
}

double Profile::operator()(double t, double theta) const {
  switch (kind) {
    case Kind::Constant: return amplitude;
    case Kind::Linear: return amplitude + slope * t;
    case Kind::Sine: return amplitude * std::sin(wavenumber * theta + phase) + slope * t;
  }
  return 0.0;
}

NonlinearOperator point_linear_part(const PointSymmetrySpec& spec, const ConfigSpace& space, PointPart part) {
  if (!space.grid()) throw ConfigError("point symmetries need a grid space");
  const bool phase = part == PointPart::All || part == PointPart::Phase;
  const bool mult = part == PointPart::All || part == PointPart::Multiplication;
  const bool deriv = part == PointPart::All || part == PointPart::Derivative;
  const Profile eta = spec.eta, xi = spec.xi;

  auto apply_at = [=](double t, const WaveFunction& v) {
    const std::size_t L = space.grid_size();
    const double h = space.spacing();
    std::vector<cplx> out(v.size());
    for (std::size_t x = 0; x < v.size(); ++x) {
      const std::size_t g = x % L, base = x - g;
      const std::size_t xp = base + (g + 1) % L, xm = base + (g + L - 1) % L;
      cplx acc{};
      if (phase) acc += cplx{0.0, eta(t, space.grid_angle(x))} * v[x];
      if (mult) acc += 0.5 * (xi(t, space.grid_angle(xp)) - xi(t, space.grid_angle(xm))) / (2.0 * h) * v[x];
      if (deriv) acc += xi(t, space.grid_angle(x)) * (v[xp] - v[xm]) / (2.0 * h);
      out[x] = acc;
    }
    return WaveFunction(v.space(), v.particles(), std::move(out));
  };

  NonlinearOperator::Parts p;
  p.eval = [apply_at](double t, const WaveFunction& phi) { return apply_at(t, phi); };
  p.derivative = [apply_at](double t, const WaveFunction&, const WaveFunction& eta_dir) {
    return apply_at(t, eta_dir);
  };
  p.second_derivative = [](double, const WaveFunction& phi, const WaveFunction&, const WaveFunction&) {
    return zeros_like(phi);
  };
  p.indices = IndexPair{};
  p.time_dependent = (phase && eta.time_dependent()) || ((mult || deriv) && xi.time_dependent());
  const char* label = part == PointPart::Phase ? "phase"
                      : part == PointPart::Multiplication ? "mult"
                      : part == PointPart::Derivative ? "grad"
                                                       : "point";
  return NonlinearOperator(std::string("K_") + label, space, 1, std::move(p));
}

NonlinearOperator point_symmetry_generator(const PointSymmetrySpec& spec, const ConfigSpace& space, int n) {
  const NonlinearOperator one = point_linear_part(spec, space, PointPart::All);
  std::vector<NonlinearOperator> terms;
  for (int j = 0; j < n; ++j) terms.push_back(lifting(one, {j}, n));
  NonlinearOperator K = sum(terms, space, n);
  const Profile gamma = spec.gamma, delta = spec.delta;
  const bool has_lambda = gamma.amplitude != 0.0 || gamma.slope != 0.0 || delta.amplitude != 0.0 ||
                          delta.slope != 0.0;
  if (has_lambda) {
    const bool td = gamma.time_dependent() || delta.time_dependent();
    K = K + lambda_time_operator(
                [gamma, delta](double t) {
                  return IndexPair{cplx{0.0, gamma(t, 0.0)}, cplx{0.0, delta(t, 0.0)}};
                },
                td, space, n);
  } else {
    K = K.with_indices(IndexPair{});
  }
  return K.renamed("K_point#" + std::to_string(n));
}

InfinitesimalSymmetry point_symmetry(const PointSymmetrySpec& spec, const ConfigSpace& space, int n_max) {
  auto levels = levels_of(n_max, [&](int n) { return point_symmetry_generator(spec, space, n); });
  return {Hierarchy(space, std::move(levels)), spec.tau};
}

NonlinearOperator site_map_operator(std::string name, const ConfigSpace& space, int n,
                                    std::vector<std::size_t> site_map) {
  const std::size_t d = space.size();
  if (site_map.size() != d) throw SpaceMismatch("site map length differs from |X|");
  for (std::size_t s : site_map)
    if (s >= d) throw BadRange("site map points outside X");
  const std::size_t total = flat_size(space, n);
  auto source = std::make_shared<std::vector<std::size_t>>(total);
  for (std::size_t y = 0; y < total; ++y) {
    std::size_t rest = y, src = 0, weight = 1;
    for (int k = 0; k < n; ++k) {
      src += site_map[rest % d] * weight;
      rest /= d;
      weight *= d;
    }
    (*source)[y] = src;
  }
  auto gather = [source](const WaveFunction& v) {
    std::vector<cplx> out(v.size());
    for (std::size_t y = 0; y < out.size(); ++y) out[y] = v[(*source)[y]];
    return WaveFunction(v.space(), v.particles(), std::move(out));
  };
  NonlinearOperator::Parts p;
  p.eval = [gather](double, const WaveFunction& phi) { return gather(phi); };
  p.derivative = [gather](double, const WaveFunction&, const WaveFunction& eta) { return gather(eta); };
  p.second_derivative = [](double, const WaveFunction& phi, const WaveFunction&, const WaveFunction&) {
    return zeros_like(phi);
  };
  p.indices = IndexPair{};
  return NonlinearOperator(std::move(name), space, n, std::move(p));
}

FiniteSymmetry lattice_shift(const ConfigSpace& space, long steps, int n_max) {
  if (!space.grid()) throw ConfigError("lattice shifts need a grid space");
  const long L = static_cast<long>(space.grid_size());
  std::vector<std::size_t> map(space.size());
  for (std::size_t x = 0; x < map.size(); ++x) {
    const long g = static_cast<long>(x) % L;
    map[x] = x - static_cast<std::size_t>(g) + static_cast<std::size_t>(((g - steps) % L + L) % L);
  }
  auto levels = levels_of(n_max, [&](int n) {
    return site_map_operator("shift(" + std::to_string(steps) + ")", space, n, map);
  });
  return {Hierarchy(space, std::move(levels)), Affine::identity()};
}

FiniteSymmetry phase_map(const ConfigSpace& space, double omega, double phase, int n_max) {
  auto levels = levels_of(n_max, [&](int n) {
    NonlinearOperator::Parts p;
    p.eval = [omega, phase](double t, const WaveFunction& phi) { return std::polar(1.0, omega * t + phase) * phi; };
    p.derivative = [omega, phase](double t, const WaveFunction&, const WaveFunction& eta) {
      return std::polar(1.0, omega * t + phase) * eta;
    };
    p.second_derivative = [](double, const WaveFunction& phi, const WaveFunction&, const WaveFunction&) {
      return zeros_like(phi);
    };
    p.indices = IndexPair{};
    p.time_dependent = omega != 0.0;
    return NonlinearOperator("phase", space, n, std::move(p));
  });
  return {Hierarchy(space, std::move(levels)), Affine::identity()};
}

FreeliftReport freelift_harness(const GeneratorFactory& F, const PointSymmetrySpec& spec,
                                const FreeliftOptions& opts) {
  FreeliftReport r;
  r.grid_sizes = opts.grid_sizes;
  for (std::size_t L : opts.grid_sizes) {
    const ConfigSpace space(L, true);
    const Generator f = F(space);
    const Generator cross = make_generator(cross_ratio_operator(space, {.coupling = {0.5, 0.3}, .reference = 0}));
    const Generator phase{point_linear_part(spec, space, PointPart::Phase), IndexPair{}};
    const Generator mult{point_linear_part(spec, space, PointPart::Multiplication), IndexPair{}};
    const Generator grad{point_linear_part(spec, space, PointPart::Derivative), IndexPair{}};

    double deriv = 0.0, deriv2 = 0.0;
    for (int k = 0; k < opts.batch_size; ++k) {
      const std::uint64_t s = mix_seed(opts.seed, static_cast<std::uint64_t>(k));
      const WaveFunction phi2 = random_state(2, space, s, {.smooth = true});
      r.phase_residual = std::max(r.phase_residual, corollary1_obstruction(f, phase, opts.t, phi2).norm_inf());
      r.multiplication_residual =
          std::max(r.multiplication_residual, corollary1_obstruction(f, mult, opts.t, phi2).norm_inf());
      deriv = std::max(deriv, corollary1_obstruction(f, grad, opts.t, phi2).norm_inf());
      if (opts.corollary2) {
        const WaveFunction phi3 = random_state(3, space, s, {.smooth = true});
        r.phase_residual = std::max(r.phase_residual, corollary2_obstruction(cross, phase, opts.t, phi3).norm_inf());
        r.multiplication_residual =
            std::max(r.multiplication_residual, corollary2_obstruction(cross, mult, opts.t, phi3).norm_inf());
        deriv2 = std::max(deriv2, corollary2_obstruction(cross, grad, opts.t, phi3).norm_inf());
      }
    }
    r.derivative_residuals.push_back(deriv);
    if (opts.corollary2) r.corollary2_derivative_residuals.push_back(deriv2);
  }
  r.derivative_ratios = ratios(r.derivative_residuals);
  r.corollary2_derivative_ratios = ratios(r.corollary2_derivative_residuals);
  return r;
}

nlohmann::json to_json(const FreeliftReport& r) {
  return nlohmann::json{{"grid_sizes", r.grid_sizes},
                        {"phase_residual", r.phase_residual},
                        {"multiplication_residual", r.multiplication_residual},
                        {"derivative_residuals", r.derivative_residuals},
                        {"derivative_ratios", r.derivative_ratios},
                        {"corollary2_derivative_residuals", r.corollary2_derivative_residuals},
                        {"corollary2_derivative_ratios", r.corollary2_derivative_ratios}};
}

InternalDofResult internal_dof_demo(const GeneratorFactory& F, const GeneratorFactory& K,
                                    const InternalDofOptions& opts) {
  if (opts.grid_sizes.empty() || opts.seeds.empty()) throw BadRange("internal-dof demo needs grids and seeds");
  InternalDofResult r;
  const ConfigSpace base({2, opts.grid_sizes.front()}, true);
  const Generator f0 = F(base), k0 = K(base);
  for (std::size_t s = 0; s < opts.seeds.size(); ++s) {
    const ObstructionReport rep = obstruction_report(
        ObstructionKind::Corollary1, f0, k0, opts.n,
        {.t = opts.t, .seed = opts.seeds[s], .batch_size = opts.batch_size, .vanish_tol = 1e-7});
    if (s == 0) r.report = rep;
    r.seed_norms.push_back(rep.rhs_norm);
  }
  for (std::size_t L : opts.grid_sizes) {
    const ConfigSpace space({2, L}, true);
    const WaveFunction phi = random_state(2, space, opts.seeds.front(), {.smooth = true});
    r.grid_norms.push_back(corollary1_obstruction(F(space), K(space), opts.t, phi).norm_inf());
  }
  r.grid_spread = spread(r.grid_norms);
  r.seed_spread = spread(r.seed_norms);
  return r;
}

nlohmann::json to_json(const InternalDofResult& r) {
  return nlohmann::json{{"report", to_json(r.report)},
                        {"grid_norms", r.grid_norms},
                        {"seed_norms", r.seed_norms},
                        {"grid_spread", r.grid_spread},
                        {"seed_spread", r.seed_spread}};
}

IndexPair index_flow(const IndexPair& pq, const IndexPair& cd0, double t, double hbar) {
  const Mat2 X = matrix_rep(kIbar * pq);
  const Mat2 forward = exp(scaled(t / hbar, X));
  const Mat2 backward = exp(scaled(-t / hbar, X));
  return pair_from_matrix(forward * matrix_rep(cd0) * backward);
}

double index_law_residual(const std::function<IndexPair(double)>& pq, const std::function<IndexPair(double)>& cd,
                          const Affine& tau, double t, double hbar, double dt) {
  const IndexPair dcd = cplx{1.0 / (2.0 * dt)} * (cd(t + dt) - cd(t - dt));
  const IndexPair dtau =
      cplx{1.0 / (2.0 * dt)} * (cplx{tau(t + dt)} * (kIbar * pq(t + dt)) - cplx{tau(t - dt)} * (kIbar * pq(t - dt)));
  const IndexPair r = cplx{hbar} * dcd - pair_bracket(kIbar * pq(t), cd(t)) + dtau;
  return distance(r, IndexPair{});
}

double djsymmbrak_residual(const InfinitesimalSymmetry& K, const Hierarchy& F, double t, const BatchSpec& batch,
                           const SymmetryOptions& opts) {
  const int N = K.K.n_max();
  std::vector<NonlinearOperator> lhs, rhs;
  for (int n = 1; n <= N; ++n) {
    const NonlinearOperator Kn = frozen(K.K.level(n), t);
    const NonlinearOperator iF = kIbar * F.level(n);
    lhs.push_back(cplx{opts.hbar} * frozen_time_derivative(K.K.level(n), t, opts.dt_sym));
    NonlinearOperator r = lie_bracket(frozen(iF, t), Kn) - cplx{K.tau.slope} * frozen(iF, t);
    if (iF.time_dependent()) r = r - cplx{K.tau(t)} * frozen_time_derivative(iF, t, opts.dt_sym);
    rhs.push_back(r);
  }
  const DecomposeOptions dopts{.batch = batch, .tol = 1e-5};
  const auto dl = canonical_decompose(Hierarchy(K.K.space(), lhs), dopts);
  const auto dr = canonical_decompose(Hierarchy(K.K.space(), rhs), dopts);
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    worst = std::max(worst, generator_distance(dl[static_cast<std::size_t>(j)], dr[static_cast<std::size_t>(j)],
                                               batch));
  }
  return worst;
}

}  // namespace nlsh
