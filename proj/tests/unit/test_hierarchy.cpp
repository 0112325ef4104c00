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

DenseMatrix hopping(std::size_t L) {
  DenseMatrix A(L);
  for (std::size_t i = 0; i < L; ++i) {
    A(i, (i + 1) % L) += 1.0;
    A((i + 1) % L, i) += 1.0;
  }
  return A;
}

Generator logmod(double kappa = 0.7, cplx p = 1.0) {
  return make_generator(log_modulus_operator(X3, {.p = p, .kappa = kappa}));
}

Generator cross() { return make_generator(cross_ratio_operator(X3, {})); }

}  // namespace

TEST_SUITE("hierarchy") {
  TEST_CASE("lifting acts on the chosen slots") {
    const auto F = log_modulus_operator(X3, {});
    const auto phi = nz(3, 1);
    const auto lifted = lift_J(F, {1}, 3, 0.0, phi);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t c = 0; c < 3; ++c) {
        std::vector<cplx> slice;
        for (std::size_t b = 0; b < 3; ++b) {
          const std::size_t s[] = {a, b, c};
          slice.push_back(phi.at(s));
        }
        const auto img = F(0.0, oracle::state(X3, 1, slice));
        for (std::size_t b = 0; b < 3; ++b) {
          const std::size_t s[] = {a, b, c};
          CHECK(std::abs(lifted.at(s) - img[b]) < 1e-15);
        }
      }
  }

  TEST_CASE("two-slot lifting follows the tuple order") {
    const auto G = cross_ratio_operator(X3, {.coupling = 1.0, .reference = 0});
    const auto phi = nz(3, 2);
    // swapping the tuple entries is conjugation by the slot swap
    const auto a = lift_J(G, {0, 2}, 3, 0.0, phi);
    const auto b = lift_J(G, {2, 0}, 3, 0.0, phi);
    const Permutation swap02{2, 1, 0};
    CHECK(distance(permute(lift_J(G, {0, 2}, 3, 0.0, permute(phi, swap02)), swap02), b) < 1e-14);
    CHECK(distance(a, b) < 1e-14);  // G is permutation symmetric
    CHECK(distance(lift_J(G, {0, 1}, 2, 0.0, nz(2, 3)), G(0.0, nz(2, 3))) == 0.0);
  }

  TEST_CASE("bad tuples") {
    const auto G = cross_ratio_operator(X3, {});
    CHECK_THROWS_AS(lifting(G, {0, 0}, 3), BadTuple);
    CHECK_THROWS_AS(lifting(G, {0, 3}, 3), BadTuple);
    CHECK_THROWS_AS(lifting(G, {0}, 3), BadTuple);
    CHECK_THROWS_AS(lifting(G, {0, 1, 2}, 2), BadTuple);
    CHECK(increasing_tuples(2, 4).size() == 6);
    CHECK(increasing_tuples(2, 4).front() == IndexTuple{0, 1});
    CHECK(increasing_tuples(2, 4).back() == IndexTuple{2, 3});
  }

  TEST_CASE("lift of a linear one-particle operator is the Kronecker sum") {
    const auto A = hopping(3);
    const auto g = make_generator(linear_operator("hop", X3, 1, A));
    const auto lift = canonical_lift(g, 2);
    const auto I = DenseMatrix::identity(3);
    const auto want = linear_operator("sum", X3, 2, kron(A, I) + kron(I, A));
    const auto phi = nz(2, 4);
    CHECK(distance(lift(0.0, phi), want(0.0, phi)) < 1e-14);
  }

  TEST_CASE("lift of Lambda is Lambda") {
    const IndexPair pq{cplx(0.4, -0.2), cplx(1.1, 0.3)};
    const auto g = make_generator(lambda_op(pq, X3, 1));
    for (int n = 1; n <= 3; ++n) {
      const auto phi = nz(n, 10 + n);
      CHECK(distance(canonical_lift(g, n)(0.0, phi), lambda_op(pq, X3, n)(0.0, phi)) < 1e-13);
    }
  }

  TEST_CASE("phi ln|phi| lifts by the product rule") {
    const auto g = logmod(0.0);
    const auto f1 = nz(1, 20), f2 = nz(1, 21);
    const auto lhs = canonical_lift(g, 2)(0.0, tensor(f1, f2));
    const auto F = log_modulus_operator(X3, {});
    const auto rhs = tensor(F(0.0, f1), f2) + tensor(f1, F(0.0, f2));
    CHECK(distance(lhs, rhs) < 1e-14);
    // on a product state the lift is phi ln|phi| itself
    const auto prod = tensor(f1, f2);
    std::vector<cplx> want;
    for (cplx v : prod.data()) want.push_back(v * std::log(std::abs(v)));
    CHECK(distance(lhs, oracle::state(X3, 2, want)) < 1e-14);
  }

  TEST_CASE("lift of a two-particle generator by brute force") {
    const auto g = cross();
    const auto phi = nz(3, 30);
    auto want = WaveFunction::zeros(X3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) want = want + lift_J(g.op, {i, j}, 3, 0.0, phi);
    CHECK(distance(canonical_lift(g, 3)(0.0, phi), want) < 1e-14);
    const WaveFunction parts[] = {nz(1, 31), nz(1, 32), nz(1, 33)};
    CHECK(canonical_lift(g, 3)(0.0, tensor(parts)).norm_inf() < 1e-13);
    CHECK(canonical_lift(g, 1)(0.0, nz(1, 34)).norm_inf() == 0.0);
  }

  TEST_CASE("Lambda and natural parts") {
    const auto F = log_modulus_operator(X3, {.p = cplx(1.0, 0.3), .kappa = 0.5});
    const IndexPair pq{cplx(1.0, 0.3), 0.0};
    const auto phi = nz(1, 40);
    const auto nat = natural_part(F, pq);
    CHECK(distance(nat(0.0, phi) + lambda_op(pq, X3, 1)(0.0, phi), F(0.0, phi)) < 1e-14);
    const auto est = estimate_log_indices(nat, 0.0, random_batch(1, X3, 41, 3, {.nowhere_zero = true}));
    CHECK(distance(est.indices, {}) < 1e-12);
    CHECK(distance(lambda_op({}, X3, 2)(0.0, nz(2, 42)), WaveFunction::zeros(X3, 2)) == 0.0);
  }

  TEST_CASE("generator lift with zero indices reduces to the plain sum") {
    const auto F = log_modulus_operator(X3, {.p = 0.0, .kappa = 0.8});
    const auto g = make_generator(F);
    CHECK(distance(g.indices, {}) < 1e-15);
    const auto phi = nz(3, 43);
    CHECK(distance(canonical_lift_1p(g, 3)(0.0, phi), canonical_lift_gen(g, 3)(0.0, phi)) < 1e-14);
  }

  TEST_CASE("make_generator validates indices") {
    CHECK_THROWS_AS(make_generator(cross_ratio_operator(X3, {}).with_indices(IndexPair{1.0, 0.0})), BadRange);
    const auto g = logmod(0.7, cplx(1.0, 0.5));
    CHECK(distance(g.indices, {cplx(1.0, 0.5), 0.0}) < 1e-15);
    CHECK(check_generator(g, 0.0, 7, 4, 1e-10).valid);
    CHECK(check_generator(cross(), 0.0, 7, 4, 1e-10).valid);
    const auto bad = Generator{potential_operator("W", X3, 2, std::vector<cplx>(9, 1.0)), {}};
    CHECK_FALSE(check_generator(bad, 0.0, 7, 4, 1e-10).valid);
    CHECK_THROWS_AS(require_generator(bad, 0.0, 7, 4, 1e-10), NotDerivation);
  }

  TEST_CASE("tensor-derivation residual") {
    const std::vector<Generator> gens = {logmod(), cross()};
    const auto H = Hierarchy::from_generators(X3, gens, 3);
    const WaveFunction one_factor[] = {nz(3, 50)};
    CHECK(tensor_derivation_residual(H, 0.0, one_factor) == 0.0);
    CHECK(derivation_check(H, {.seed = 51, .count = 4}) < 1e-10);
    CHECK(permutation_check(H, {.seed = 52, .count = 2}) < 1e-12);

    std::vector<NonlinearOperator> levels = H.levels();
    levels[1] = levels[1] + cplx(0.05) * potential_operator("V", X3, 2, std::vector<cplx>(9, 1.0));
    const Hierarchy perturbed(X3, levels);
    CHECK(derivation_check(perturbed, {.seed = 51, .count = 4}) > 0.01);
  }

  TEST_CASE("derivation brackets are derivations") {
    const std::vector<Generator> f = {logmod(), make_generator(linear_operator("hop", X3, 1, hopping(3)))};
    const std::vector<Generator> g = {cross(), make_generator(lambda_op({0.3, cplx(0, 1)}, X3, 1))};
    const auto F = Hierarchy::from_generators(X3, f, 3), G = Hierarchy::from_generators(X3, g, 3);
    CHECK(derivation_check(bracket(F, G), {.seed = 53, .count = 4}) < 1e-8);
  }

  TEST_CASE("canonical decomposition") {
    const auto F1 = logmod(0.5, cplx(1.0, 0.2));
    const auto G = cross();
    const std::vector<Generator> gens = {F1, G};
    const auto H = Hierarchy::from_generators(X3, gens, 3);
    const auto d = canonical_decompose(H, {.batch = {.seed = 60, .count = 4}});
    REQUIRE(d.size() == 3);
    const BatchSpec batch{.seed = 61, .count = 4};
    CHECK(generator_distance(d[0], F1, batch) < 1e-10);
    CHECK(distance(d[0].indices, F1.indices) < 1e-10);
    CHECK(generator_distance(d[1], G, batch) < 1e-10);
    CHECK(level_norm(component(X3, d[2], 3), 3, batch) < 1e-10);

    auto sum = Hierarchy::zero(X3, 3);
    for (const auto& g : d) sum = sum + component(X3, g, 3);
    CHECK(hierarchy_distance(sum, H, batch) < 1e-10);

    // the decomposition of a component is itself
    const auto again = canonical_decompose(component(X3, d[1], 3), {.batch = {.seed = 62, .count = 4}});
    CHECK(generator_distance(again[1], d[1], batch) < 1e-10);
    for (int n = 1; n <= 3; ++n) CHECK(level_norm(component(X3, again[0], 3), n, batch) < 1e-10);
  }

  TEST_CASE("decomposition rejects non-derivations") {
    std::vector<NonlinearOperator> levels = {zero_operator(X3, 1),
                                             potential_operator("V", X3, 2, std::vector<cplx>(9, 1.0))};
    levels.push_back(zero_operator(X3, 3));
    CHECK_THROWS_AS(canonical_decompose(Hierarchy(X3, levels)), NotDerivation);
  }

  TEST_CASE("thresholds") {
    const auto H = Hierarchy::from_generators(X3, std::vector<Generator>{cross()}, 3);
    const BatchSpec batch{.seed = 70, .count = 2};
    CHECK(threshold(H, batch, 1e-10) == 2);
    CHECK(threshold(Hierarchy::zero(X3, 3), batch, 1e-10) == 4);
    const auto Hb = bracket(H, Hierarchy::from_generators(X3, std::vector<Generator>{logmod()}, 3));
    CHECK(threshold(Hb, batch, 1e-10) >= 2);
  }
}
