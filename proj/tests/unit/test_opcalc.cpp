#include <doctest.h>

#include "nlsh/errors.hpp"
#include "nlsh/hierarchy.hpp"
#include "oracles.hpp"

using namespace nlsh;

namespace {

const ConfigSpace X3(3);

WaveFunction nz(int n, std::uint64_t seed, const ConfigSpace& X = X3) {
  return random_state(n, X, seed, {.nowhere_zero = true});
}

DenseMatrix random_matrix(std::size_t dim, std::uint64_t seed) {
  DenseMatrix A(dim);
  const auto v = random_state(1, ConfigSpace(dim * dim), seed);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) A(r, c) = v[r * dim + c];
  return A;
}

// F(phi) = phi ln|phi| on one particle, by direct evaluation
WaveFunction log_modulus_oracle(const WaveFunction& phi) {
  std::vector<cplx> out;
  for (cplx v : phi.data()) out.push_back(v * std::log(std::abs(v)));
  return WaveFunction(phi.space(), phi.particles(), out);
}

}  // namespace

TEST_SUITE("opcalc") {
  TEST_CASE("derivative of a linear operator is the operator") {
    const auto A = linear_operator("A", X3, 1, random_matrix(3, 1));
    const auto phi = nz(1, 2), eta = nz(1, 3);
    CHECK(distance(frechet(A, 0.0, phi, eta), A(0.0, eta)) < 1e-14);
    CHECK(distance(frechet(A, 0.0, phi, eta, {.force_fd = true}), A(0.0, eta)) < 1e-9);
  }

  TEST_CASE("Lambda derivative matches the hand formula") {
    const IndexPair ab{cplx(0.4, 0.3), cplx(-1.1, 0.2)};
    const auto L = lambda_operator(ab, X3, 1);
    const auto phi = nz(1, 4), eta = nz(1, 5);
    std::vector<cplx> want;
    for (std::size_t i = 0; i < 3; ++i) {
      const cplx w = eta[i] / phi[i];
      want.push_back(pair_action(ab, w) * phi[i] + pair_action(ab, std::log(phi[i])) * eta[i]);
    }
    CHECK(distance(L.derivative(0.0, phi, eta), oracle::state(X3, 1, want)) < 1e-13);
    CHECK(distance(L(0.0, phi), oracle::state(X3, 1, [&] {
                     std::vector<cplx> v;
                     for (cplx z : phi.data()) v.push_back(pair_action(ab, std::log(z)) * z);
                     return v;
                   }())) < 1e-14);
  }

  TEST_CASE("log-modulus operator values") {
    const auto F = log_modulus_operator(X3, {});
    const auto phi = nz(1, 6);
    CHECK(distance(F(0.0, phi), log_modulus_oracle(phi)) < 1e-15);
    CHECK(F.needs_nonzero());
  }

  TEST_CASE("closed-form derivatives agree with finite differences") {
    const ConfigSpace Y({2, 3}, false);
    std::vector<NonlinearOperator> ops = {
        log_modulus_operator(X3, {.p = cplx(1.0, 0.2), .kappa = cplx(0.7, -0.3)}),
        log_modulus_operator(Y, {.p = 0.5, .kappa = 1.0, .rms_axis = 0}),
        log_modulus_operator(Y, {.p = 0.0, .kappa = cplx(0, 1), .rms_axis = 1}),
        cross_ratio_operator(X3, {}),
        cross_ratio_operator(X3, {.coupling = cplx(0.5, 1.0), .reference = 1}),
        mixed_power_operator({cplx(1.3, 0.2), cplx(0.7, -0.4)}, X3, 2),
        lambda_operator({cplx(0.2, -0.5), 1.5}, X3, 2),
    };
    std::uint64_t seed = 100;
    for (const auto& F : ops) {
      CAPTURE(F.name());
      const int n = F.particles();
      const auto phi = nz(n, ++seed, F.space()), e1 = nz(n, ++seed, F.space()), e2 = nz(n, ++seed, F.space());
      const auto fd1 = oracle::central_difference(F, 0.0, phi, e1, 1e-5);
      CHECK(distance(F.derivative(0.0, phi, e1), fd1) < 1e-7);
      REQUIRE(F.has_second_derivative());
      const double h = 1e-4;
      const auto fd2 = cplx(1.0 / (2 * h)) *
                       (F.derivative(0.0, phi + cplx(h) * e2, e1) - F.derivative(0.0, phi - cplx(h) * e2, e1));
      CHECK(distance(F.second_derivative(0.0, phi, e1, e2), fd2) < 1e-6);
      CHECK(distance(F.second_derivative(0.0, phi, e1, e2), F.second_derivative(0.0, phi, e2, e1)) < 1e-12);
    }
  }

  TEST_CASE("derivatives are real-linear but not complex-linear") {
    const auto F = log_modulus_operator(X3, {});
    const auto phi = nz(1, 7), eta = nz(1, 8), zeta = nz(1, 9);
    const auto d = [&](const WaveFunction& e) { return F.derivative(0.0, phi, e); };
    CHECK(distance(d(cplx(2.5) * eta + zeta), cplx(2.5) * d(eta) + d(zeta)) < 1e-13);
    CHECK(distance(d(cplx(0, 1) * eta), cplx(0, 1) * d(eta)) > 1e-3);
  }

  TEST_CASE("Euler identity with eta = 1 for homogeneous operators") {
    // F(k phi) = k F(phi) + k (p ln|k| + i q arg k) phi differentiated at k = 1
    const cplx p{1.0, 0.2};
    const auto F = log_modulus_operator(X3, {.p = p, .kappa = 0.3});
    const auto phi = nz(1, 10);
    const auto lhs = F.derivative(0.0, phi, phi);
    CHECK(distance(lhs, F(0.0, phi) + p * phi) < 1e-13);
    for (cplx eta : {cplx(1.0), cplx(0.7, -0.4), cplx(0, 1)})
      CHECK(euler_log_residual(F, {p, 0.0}, 0.0, phi, eta) < 1e-12);
    const auto A = linear_operator("A", X3, 1, random_matrix(3, 2));
    CHECK(euler_log_residual(A, {}, 0.0, phi, cplx(0.3, 0.9)) < 1e-13);
    const IndexPair ab{cplx(1.2, 0.1), cplx(0.8, -0.3)};
    CHECK(euler_pow_residual(mixed_power_operator(ab, X3, 1), ab, 0.0, phi, cplx(-1.1, 0.3)) < 1e-12);
  }

  TEST_CASE("finite differences converge at second order") {
    const auto F = cross_ratio_operator(X3, {});
    const auto phi = nz(2, 11), eta = nz(2, 12);
    const auto exact = F.derivative(0.0, phi, eta);
    const double e1 = distance(oracle::central_difference(F, 0.0, phi, eta, 1e-2), exact);
    const double e2 = distance(oracle::central_difference(F, 0.0, phi, eta, 5e-3), exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  }

  TEST_CASE("Lie brackets") {
    const auto F = log_modulus_operator(X3, {.p = 1.0, .kappa = 0.5});
    const auto phi = nz(1, 13);
    CHECK(lie_bracket(F, F)(0.0, phi).norm_inf() < 1e-14);

    const auto A = random_matrix(3, 14), B = random_matrix(3, 15);
    const auto LA = linear_operator("A", X3, 1, A), LB = linear_operator("B", X3, 1, B);
    const auto want = linear_operator("c", X3, 1, A * B - B * A);
    CHECK(distance(lie_bracket(LA, LB)(0.0, phi), want(0.0, phi)) < 1e-13);

    const IndexPair p{cplx(0.3, 0.1), cplx(0.9, -0.2)}, q{cplx(-0.5, 0.4), cplx(0.2, 0.6)};
    const auto br = lie_bracket(lambda_operator(p, X3, 1), lambda_operator(q, X3, 1));
    const auto expected = lambda_operator(pair_bracket(p, q), X3, 1);
    CHECK(distance(br(0.0, phi), expected(0.0, phi)) < 1e-12);
    REQUIRE(br.indices().has_value());
    CHECK(distance(*br.indices(), pair_bracket(p, q)) < 1e-15);
  }

  TEST_CASE("Jacobi identity for operator brackets") {
    const auto F = log_modulus_operator(X3, {.p = 1.0, .kappa = 0.5});
    const auto G = linear_operator("A", X3, 1, random_matrix(3, 16));
    const auto H = lambda_operator({cplx(0.2, 0.1), cplx(-0.4, 0.3)}, X3, 1);
    const auto jac = lie_bracket(F, lie_bracket(G, H)) + lie_bracket(G, lie_bracket(H, F)) +
                     lie_bracket(H, lie_bracket(F, G));
    CHECK(jac(0.0, nz(1, 17)).norm_inf() <= 1e-8);
  }

  TEST_CASE("logarithmic index estimates") {
    const auto batch = random_batch(1, X3, 18, 4, {.nowhere_zero = true});
    const auto lin = estimate_log_indices(linear_operator("A", X3, 1, random_matrix(3, 19)), 0.0, batch);
    CHECK(distance(lin.indices, {}) < 1e-12);
    const IndexPair pq{cplx(0.6, -0.2), cplx(1.4, 0.5)};
    const auto lam = estimate_log_indices(lambda_operator(pq, X3, 1), 0.0, batch);
    CHECK(distance(lam.indices, pq) < 1e-12);
    CHECK(lam.declared_deviation < 1e-12);
    const auto lm = estimate_log_indices(log_modulus_operator(X3, {.p = cplx(1, 0.5), .kappa = 2.0}), 0.0, batch);
    CHECK(distance(lm.indices, {cplx(1, 0.5), 0.0}) < 1e-12);
    CHECK(lm.residual < 1e-12);
  }

  TEST_CASE("permutation property") {
    const auto batch2 = random_batch(2, X3, 20, 3, {.nowhere_zero = true});
    CHECK(check_permutation_property(log_modulus_operator(X3, {}), 0.0, random_batch(1, X3, 21, 3)) == 0.0);
    CHECK(check_permutation_property(cross_ratio_operator(X3, {}), 0.0, batch2) < 1e-13);
    std::vector<cplx> sym(9), asym(9);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        sym[3 * a + b] = std::cos(double(a) - double(b));
        asym[3 * a + b] = double(a) + 2.0 * double(b);
      }
    CHECK(check_permutation_property(potential_operator("V", X3, 2, sym), 0.0, batch2) < 1e-15);
    CHECK(check_permutation_property(potential_operator("W", X3, 2, asym), 0.0, batch2) > 0.1);
  }

  TEST_CASE("bracket of declared indices") {
    const IndexPair p{0.5, cplx(0, 1)}, q{cplx(0, 1), 2.0};
    const auto F = log_modulus_operator(X3, {.p = 0.5}).with_indices(p);
    const auto G = lambda_operator(q, X3, 1);
    const auto br = lie_bracket(F, G);
    REQUIRE(br.indices().has_value());
    CHECK(distance(*br.indices(), pair_bracket(p, q)) < 1e-15);
  }

  TEST_CASE("vanishing amplitudes are refused") {
    const auto F = log_modulus_operator(X3, {});
    const auto phi = oracle::state(X3, 1, {1.0, 0.0, 2.0});
    CHECK_THROWS_AS(F(0.0, phi), ZeroAmplitude);
    CHECK_THROWS_AS(require_nonzero(phi, "test"), ZeroAmplitude);
    const auto sumop = F + linear_operator("A", X3, 1, DenseMatrix::identity(3));
    CHECK(sumop.needs_nonzero());
    CHECK_THROWS_AS(sumop(0.0, phi), ZeroAmplitude);
    CHECK_NOTHROW(linear_operator("A", X3, 1, DenseMatrix::identity(3))(0.0, phi));
  }

  TEST_CASE("operator sums, scaling and composition") {
    const auto A = linear_operator("A", X3, 1, random_matrix(3, 22));
    const auto F = log_modulus_operator(X3, {});
    const auto phi = nz(1, 23);
    CHECK(distance((A + cplx(2.0) * F)(0.0, phi), A(0.0, phi) + cplx(2.0) * F(0.0, phi)) < 1e-14);
    CHECK(distance(compose(A, F)(0.0, phi), A(0.0, F(0.0, phi))) < 1e-14);
    CHECK_THROWS_AS(A + cross_ratio_operator(X3, {}), SpaceMismatch);
  }
}
