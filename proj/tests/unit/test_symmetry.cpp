#include <doctest.h>

#include "nlsh/errors.hpp"
#include "nlsh/symmetry.hpp"
#include "oracles.hpp"

using namespace nlsh;

namespace {

WaveFunction smooth(int n, const ConfigSpace& X, std::uint64_t seed) {
  return random_state(n, X, seed, {.smooth = true});
}

// -laplacian + phi ln|phi| on a periodic grid
Hierarchy free_field(const ConfigSpace& X, int n_max, double kappa = 0.0) {
  const std::vector<Generator> gens = {
      make_generator(linear_operator("-lap", X, 1, cplx(-1.0) * grid_laplacian(X))),
      make_generator(log_modulus_operator(X, {.p = 1.0, .kappa = kappa}))};
  return Hierarchy::from_generators(X, gens, n_max);
}

Hierarchy linear_hierarchy(const ConfigSpace& X, const DenseMatrix& A, int n_max) {
  return Hierarchy::from_generators(X, std::vector<Generator>{make_generator(linear_operator("A", X, 1, A))}, n_max);
}

// K_n(t) = n (1 - i p t / hbar) I
InfinitesimalSymmetry dilation(const ConfigSpace& X, double p, double hbar, int n_max) {
  std::vector<NonlinearOperator> levels;
  for (int n = 1; n <= n_max; ++n) {
    const auto c = [n, p, hbar](double t) { return double(n) * cplx(1.0, -p * t / hbar); };
    NonlinearOperator::Parts parts;
    parts.eval = [c](double t, const WaveFunction& phi) { return c(t) * phi; };
    parts.derivative = [c](double t, const WaveFunction&, const WaveFunction& eta) { return c(t) * eta; };
    parts.second_derivative = [](double, const WaveFunction& phi, const WaveFunction&, const WaveFunction&) {
      return WaveFunction::zeros(phi.space(), phi.particles());
    };
    parts.indices = IndexPair{};
    parts.time_dependent = p != 0.0;
    levels.push_back(NonlinearOperator("dilation", X, n, std::move(parts)));
  }
  return {Hierarchy(X, std::move(levels)), {}};
}

}  // namespace

TEST_SUITE("symmetry") {
  TEST_CASE("affine time maps") {
    const Affine f{2.0, 1.0}, g{-0.5, 3.0};
    CHECK(compose(f, g)(0.7) == doctest::Approx(f(g(0.7))));
    CHECK(compose(f, f.inverse())(1.3) == doctest::Approx(1.3));
    CHECK(Affine::identity()(4.0) == 4.0);
    CHECK_THROWS_AS(Affine::constant(2.0).inverse(), DomainError);
  }

  TEST_CASE("the identity is a symmetry of everything") {
    const ConfigSpace X(8, true);
    const auto F = free_field(X, 2, 0.5);
    const auto id = phase_map(X, 0.0, 0.0, 2);
    for (int n = 1; n <= 2; ++n) CHECK(symmetry_residual(id, F, 0.3, smooth(n, X, 1)) < 1e-13);
  }

  TEST_CASE("constant phases and lattice shifts") {
    const ConfigSpace X(8, true);
    const auto F = free_field(X, 3, 0.5);
    const auto shift = lattice_shift(X, 3, 3);
    const auto phase = phase_map(X, 0.0, 0.8, 3);
    for (int n = 1; n <= 3; ++n) {
      CHECK(symmetry_residual(shift, F, 0.0, smooth(n, X, 2)) < 1e-12);
      CHECK(symmetry_residual(phase, F, 0.0, smooth(n, X, 3)) < 1e-12);
    }
    const auto phi = smooth(1, X, 4);
    const auto shifted = shift.V.level(1)(0.0, phi);
    for (std::size_t x = 0; x < 8; ++x) CHECK(shifted[x] == phi[(x + 8 - 3) % 8]);
    // a time-dependent phase is not a symmetry of a U(1)-invariant flow
    CHECK(symmetry_residual(phase_map(X, 0.5, 0.0, 3), F, 0.0, smooth(1, X, 5)) > 0.1);
    CHECK_THROWS_AS(lattice_shift(ConfigSpace(8), 1, 2), ConfigError);
  }

  TEST_CASE("conjugating a linear flow by a commuting unitary") {
    const ConfigSpace X(6, true);
    const auto H = linear_hierarchy(X, cplx(-1.0) * grid_laplacian(X), 2);
    const auto U = lattice_shift(X, 2, 2);
    for (int n = 1; n <= 2; ++n) CHECK(symmetry_residual(U, H, 0.0, smooth(n, X, 6)) < 1e-12);
    // any fixed W conjugated by the free flow, V(t) = U(t) W U(t)^-1 with U(t) = exp(-i t H / hbar)
    const double hbar = 0.8;
    const Eigen::MatrixXcd Hd = oracle::dense(H.level(1), 1);
    const Eigen::MatrixXcd W = Eigen::MatrixXcd::Random(6, 6);
    auto flow = [Hd, W, hbar](double t, const WaveFunction& phi) {
      const Eigen::MatrixXcd U = (cplx(0, -t / hbar) * Hd).exp();
      const Eigen::VectorXcd v = U * W * U.inverse() * oracle::vec(phi);
      return WaveFunction(phi.space(), 1, std::vector<cplx>(v.data(), v.data() + v.size()));
    };
    NonlinearOperator::Parts p;
    p.eval = flow;
    p.derivative = [flow](double t, const WaveFunction&, const WaveFunction& eta) { return flow(t, eta); };
    p.time_dependent = true;
    const FiniteSymmetry V{Hierarchy(X, {NonlinearOperator("V(t)", X, 1, p)}), Affine::identity()};
    const Hierarchy H1(X, {H.level(1)});
    const double r = symmetry_residual(V, H1, 0.4, smooth(1, X, 7), {.hbar = hbar, .dt_sym = 1e-4});
    CHECK(r < 1e-6);
  }

  TEST_CASE("composition and inverses of finite symmetries") {
    const ConfigSpace X(8, true);
    const auto F = free_field(X, 2, 0.3);
    const auto a = lattice_shift(X, 3, 2), b = lattice_shift(X, -3, 2);
    const auto ab = compose(a, b);
    const auto phi = smooth(2, X, 8);
    CHECK(distance(ab.V.level(2)(0.0, phi), phi) == 0.0);
    CHECK(symmetry_residual(compose(a, phase_map(X, 0.0, 1.1, 2)), F, 0.0, phi) < 1e-12);
    const auto inv = inverse(a, b.V);
    CHECK(distance(compose(a, inv).V.level(2)(0.0, phi), phi) == 0.0);
    CHECK(inverse(FiniteSymmetry{a.V, Affine{2.0, 1.0}}, b.V).T == Affine{0.5, -0.5});
    CHECK(compose(FiniteSymmetry{a.V, Affine{2.0, 1.0}}, FiniteSymmetry{b.V, Affine{3.0, 0.0}}).T ==
          Affine{6.0, 3.0});
    const auto psi = [&](double t) { return std::polar(1.0, t) * phi; };
    CHECK(distance(apply(FiniteSymmetry{phase_map(X, 0.0, 0.0, 2).V, Affine{2.0, 1.0}}, psi, 0.5), psi(2.0)) < 1e-15);
  }

  TEST_CASE("infinitesimal symmetries") {
    const ConfigSpace X(8, true);
    const double hbar = 1.2;
    const SymmetryOptions opts{.hbar = hbar};
    SUBCASE("a commuting linear generator") {
      const auto F = linear_hierarchy(X, cplx(-1.0) * grid_laplacian(X), 3);
      const InfinitesimalSymmetry K{linear_hierarchy(X, grid_gradient(X), 3), {}};
      for (int n = 1; n <= 3; ++n) CHECK(inf_symmetry_residual(K, F, 0.0, smooth(n, X, 9), opts) < 1e-10);
    }
    SUBCASE("the generator itself and time translation") {
      const auto F = free_field(X, 3, 0.5);
      const InfinitesimalSymmetry self{cplx(0, -1) * F, {}};
      const InfinitesimalSymmetry time{Hierarchy::zero(X, 3), Affine::constant(1.0)};
      for (int n = 1; n <= 3; ++n) {
        CHECK(inf_symmetry_residual(self, F, 0.0, smooth(n, X, 10), opts) < 1e-10);
        CHECK(inf_symmetry_residual(time, F, 0.7, smooth(n, X, 11), opts) == 0.0);
      }
      const InfinitesimalSymmetry stretched{Hierarchy::zero(X, 3), Affine{1.0, 0.0}};
      CHECK(inf_symmetry_residual(stretched, F, 0.0, smooth(1, X, 12), opts) > 0.1);
    }
    SUBCASE("dilations of phi ln|phi|") {
      const double p = 0.7;
      const std::vector<Generator> gens = {make_generator(log_modulus_operator(X, {.p = p}))};
      const auto F = Hierarchy::from_generators(X, gens, 3);
      const auto K = dilation(X, p, hbar, 3);
      for (int n = 1; n <= 3; ++n) CHECK(inf_symmetry_residual(K, F, 0.4, smooth(n, X, 13), opts) < 1e-9);
      CHECK(inf_symmetry_residual(dilation(X, 0.0, hbar, 3), F, 0.4, smooth(1, X, 13), opts) > 0.1);
    }
  }

  TEST_CASE("point translations are symmetries up to second order in the grid spacing") {
    PointSymmetrySpec spec;
    spec.xi = {.kind = Profile::Kind::Constant, .amplitude = 1.0};
    std::vector<double> res;
    for (std::size_t L : {16, 32, 64}) {
      const ConfigSpace X(L, true);
      const auto K = point_symmetry(spec, X, 1);
      const auto F = free_field(X, 1, 0.4);
      res.push_back(inf_symmetry_residual(K, F, 0.0, smooth(1, X, 14)));
    }
    CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.15));
    CHECK(res[1] / res[2] == doctest::Approx(4.0).epsilon(0.15));
  }

  TEST_CASE("point generators") {
    const ConfigSpace X(8, true);
    const auto phi = smooth(2, X, 15);
    PointSymmetrySpec phase;
    phase.eta = {.kind = Profile::Kind::Constant, .amplitude = 0.6};
    CHECK(distance(point_symmetry_generator(phase, X, 2)(0.0, phi), cplx(0, 1.2) * phi) < 1e-14);

    PointSymmetrySpec trans;
    trans.xi = {.kind = Profile::Kind::Constant, .amplitude = 1.0};
    const auto grad = linear_operator("grad", X, 1, grid_gradient(X));
    const auto one = smooth(1, X, 16);
    CHECK(distance(point_symmetry_generator(trans, X, 1)(0.0, one), grad(0.0, one)) < 1e-14);
    CHECK(point_linear_part(trans, X, PointPart::Multiplication)(0.0, one).norm_inf() == 0.0);

    PointSymmetrySpec lam;
    lam.gamma = {.kind = Profile::Kind::Linear, .amplitude = 0.2, .slope = 0.5};
    const auto K = point_symmetry_generator(lam, X, 1);
    CHECK(K.time_dependent());
    CHECK(distance(K(1.0, one), lambda_operator({cplx(0, 0.7), 0.0}, X, 1)(0.0, one)) < 1e-14);
    CHECK_THROWS_AS(point_linear_part(trans, ConfigSpace(8), PointPart::All), ConfigError);

    Profile sine{.kind = Profile::Kind::Sine, .amplitude = 2.0, .slope = 0.5, .wavenumber = 2.0, .phase = 0.1};
    CHECK(sine(1.0, 0.3) == doctest::Approx(2.0 * std::sin(0.7) + 0.5));
  }

  TEST_CASE("brackets of infinitesimal symmetries") {
    const ConfigSpace X(8, true);
    const auto F = linear_hierarchy(X, cplx(-1.0) * grid_laplacian(X), 2);
    const InfinitesimalSymmetry K{linear_hierarchy(X, grid_gradient(X), 2), Affine::constant(1.0)};
    const InfinitesimalSymmetry L{linear_hierarchy(X, cplx(0, 1) * DenseMatrix::identity(8), 2), Affine{1.0, 0.0}};
    const auto KK = inf_symmetry_bracket(K, K);
    CHECK(KK.K.level(2)(0.0, smooth(2, X, 17)).norm_inf() < 1e-14);
    CHECK(KK.tau == Affine{0.0, 0.0});
    const auto KL = inf_symmetry_bracket(K, L);
    CHECK(KL.tau == Affine{0.0, 1.0});
    const auto T = InfinitesimalSymmetry{Hierarchy::zero(X, 2), Affine::constant(1.0)};
    const auto G = InfinitesimalSymmetry{linear_hierarchy(X, grid_gradient(X), 2), {}};
    for (int n = 1; n <= 2; ++n) {
      CHECK(inf_symmetry_residual(G, F, 0.0, smooth(n, X, 18)) < 1e-10);
      CHECK(inf_symmetry_residual(inf_symmetry_bracket(G, T), F, 0.0, smooth(n, X, 19)) < 1e-10);
    }
  }

  TEST_CASE("free lifts split into phase, multiplication and derivative parts") {
    PointSymmetrySpec spec;
    spec.xi = {.kind = Profile::Kind::Sine, .amplitude = 0.5, .wavenumber = 1.0};
    spec.eta = {.kind = Profile::Kind::Constant, .amplitude = 0.3};
    const auto F = [](const ConfigSpace& X) { return make_generator(log_modulus_operator(X, {.p = 1.0, .kappa = 0.4})); };
    const auto r = freelift_harness(F, spec, {.grid_sizes = {8, 16, 32}, .seed = 3});
    CHECK(r.phase_residual < 1e-12);
    CHECK(r.multiplication_residual < 1e-12);
    REQUIRE(r.derivative_ratios.size() == 2);
    for (double q : r.derivative_ratios) CHECK(q > 3.0);
    for (double q : r.corollary2_derivative_ratios) CHECK(q > 3.0);
    CHECK(r.derivative_residuals.back() < r.derivative_residuals.front());
    const auto j = to_json(r);
    CHECK(j["derivative_ratios"].size() == 2);
  }

  TEST_CASE("internal degrees of freedom") {
    const auto spin = [](const ConfigSpace& X) {
      return make_generator(linear_operator("spin", X, 1, spin_rotation_generator(X, 'y')));
    };
    const InternalDofOptions opts{.grid_sizes = {8, 16}, .seeds = {1, 2}, .batch_size = 2};
    SUBCASE("linear hopping commutes") {
      const auto hop = [](const ConfigSpace& X) {
        return make_generator(linear_operator("lap", X, 1, grid_laplacian(X)));
      };
      const auto r = internal_dof_demo(hop, spin, opts);
      CHECK(r.report.rhs_norm < 1e-12);
      for (double v : r.grid_norms) CHECK(v < 1e-12);
    }
    SUBCASE("an rms over the spin axis does not") {
      const auto F = [](const ConfigSpace& X) {
        return make_generator(log_modulus_operator(X, {.p = 0.0, .kappa = 1.0, .rms_axis = 0}));
      };
      const auto r = internal_dof_demo(F, spin, opts);
      CHECK(r.report.rhs_norm > 1e-3);
      for (double v : r.grid_norms) CHECK(v > 1e-3);
      CHECK(r.grid_spread < 0.25);
      CHECK(r.seed_norms.size() == 2);
    }
    SUBCASE("an rms over the grid axis commutes with spin rotations") {
      const auto F = [](const ConfigSpace& X) {
        return make_generator(log_modulus_operator(X, {.p = 0.0, .kappa = 1.0, .rms_axis = 1}));
      };
      const auto r = internal_dof_demo(F, spin, opts);
      CHECK(r.report.rhs_norm > 1e-3);
    }
    CHECK_THROWS_AS(internal_dof_demo(spin, spin, {.grid_sizes = {}}), BadRange);
  }

  TEST_CASE("index law") {
    const IndexPair pq{cplx(0.6, -0.1), cplx(-0.3, 0.4)}, cd0{cplx(0.2, 0.5), cplx(1.0, -0.7)};
    const double hbar = 0.9;
    const auto cd = [&](double t) { return index_flow(pq, cd0, t, hbar); };
    const auto p = [&](double) { return pq; };
    CHECK(distance(cd(0.0), cd0) < 1e-14);
    const double r1 = index_law_residual(p, cd, {}, 0.5, hbar, 1e-2);
    const double r2 = index_law_residual(p, cd, {}, 0.5, hbar, 5e-3);
    CHECK(r1 < 1e-3);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
    // a time-translation coefficient adds d/dt(tau i' pq)
    const auto zero = [](double) { return IndexPair{}; };
    CHECK(index_law_residual(p, zero, Affine{1.0, 0.0}, 0.5, hbar, 1e-3) ==
          doctest::Approx(distance(cplx(0, -1) * pq, {})).epsilon(1e-9));
    // E commutes with everything
    CHECK(distance(index_flow(pq, gen::E, 1.3, hbar), gen::E) < 1e-13);
  }

  TEST_CASE("generator-level symmetry equation") {
    const ConfigSpace X(6, true);
    const auto F = free_field(X, 2, 0.3);
    const InfinitesimalSymmetry self{cplx(0, -1) * F, {}};
    CHECK(djsymmbrak_residual(self, F, 0.0, {.seed = 20, .count = 2}) < 1e-8);
    const auto K = dilation(X, 1.0, 1.0, 2);
    const std::vector<Generator> gens = {make_generator(log_modulus_operator(X, {.p = 1.0}))};
    CHECK(djsymmbrak_residual(K, Hierarchy::from_generators(X, gens, 2), 0.3, {.seed = 21, .count = 2}) < 1e-8);
  }
}
