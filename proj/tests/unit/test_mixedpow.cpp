#include <doctest.h>

#include "nlsh/errors.hpp"
#include "nlsh/space.hpp"
#include "oracles.hpp"

using namespace nlsh;

namespace {

IndexPair random_pair(std::uint64_t seed, std::uint64_t k) {
  auto u = [&](std::uint64_t j) { return static_cast<double>(mix_seed(seed, 4 * k + j) >> 11) * 0x1p-53 * 2.0 - 1.0; };
  return {{u(0), u(1)}, {u(2), u(3)}};
}

cplx random_z(std::uint64_t seed, std::uint64_t k, double max_arg) {
  const double r = 0.3 + static_cast<double>(mix_seed(seed, 2 * k) >> 11) * 0x1p-53 * 2.0;
  const double th = (static_cast<double>(mix_seed(seed, 2 * k + 1) >> 11) * 0x1p-53 * 2.0 - 1.0) * max_arg;
  return std::polar(r, th);
}

double mat_dist(const Mat2& m, const Eigen::Matrix2d& e) {
  double d = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) d = std::max(d, std::abs(m(r, c) - e(r, c)));
  return d;
}

Eigen::Matrix2d eig(const Mat2& m) {
  Eigen::Matrix2d e;
  e << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
  return e;
}

}  // namespace

TEST_SUITE("mixedpow") {
  TEST_CASE("mixed powers of simple bases") {
    CHECK(std::abs(mixed_power(1.0, {cplx(2.5, -1.0), cplx(0.3, 4.0)}) - 1.0) < 1e-15);
    CHECK(std::abs(mixed_power(cplx(0, 1), gen::B) - cplx(0, -1)) < 1e-15);
    CHECK(std::abs(mixed_power(std::exp(1.0), gen::I) - std::exp(cplx(0, 1))) < 1e-14);
    CHECK(std::abs(mixed_power(std::exp(1.0), gen::I) - cplx(0.5403023058681398, 0.8414709848078965)) < 1e-12);
  }

  TEST_CASE("mixed power matches r^a e^{i b theta}") {
    for (std::uint64_t k = 0; k < 50; ++k) {
      const cplx z = random_z(11, k, 3.0);
      const IndexPair p = random_pair(12, k);
      const double r = std::abs(z), th = std::arg(z);
      const cplx want = std::exp(p.a * std::log(r)) * std::exp(cplx(0, 1) * p.b * th);
      CHECK(std::abs(mixed_power(z, p) - want) < 1e-12 * std::max(1.0, std::abs(want)));
    }
  }

  TEST_CASE("zero base is rejected") {
    CHECK_THROWS_AS(mixed_power(0.0, gen::E), ZeroBase);
    CHECK_THROWS_AS(mixed_power(cplx(1e-301, 0.0), gen::E), ZeroBase);
    CHECK_THROWS_AS(mixed_power_derivative(0.0, gen::E, 1.0, {}), ZeroBase);
  }

  TEST_CASE("principal branch on the negative real axis") {
    CHECK(principal_arg(cplx(-2.0, 0.0)) == doctest::Approx(std::numbers::pi));
    CHECK(principal_arg(cplx(-2.0, -0.0)) == doctest::Approx(std::numbers::pi));
  }

  TEST_CASE("product law examples") {
    const IndexPair cd{cplx(0.3, -1.2), cplx(2.0, 0.7)};
    CHECK(distance(pair_product(gen::E, cd), cd) == 0.0);
    CHECK(distance(pair_product(gen::B, gen::I), IndexPair{cplx(0, -1), cplx(0, 1)}) < 1e-15);
    CHECK(distance(pair_product(gen::I, gen::I), IndexPair{-1.0, -1.0}) < 1e-15);
  }

  TEST_CASE("multiplication table of +-E, +-B, +-I, +-J") {
    using namespace gen;
    const IndexPair u[4] = {E, B, I, J};
    // row times column; the J*I cell is fixed by the brackets [I,J] = -2B
    const IndexPair table[4][4] = {{E, B, I, J},
                                   {B, E, cplx(-1) * J, cplx(-1) * I},
                                   {I, J, cplx(-1) * E, cplx(-1) * B},
                                   {J, I, B, E}};
    for (int s1 : {1, -1})
      for (int s2 : {1, -1})
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c)
            CHECK(distance(pair_product(cplx(s1) * u[r], cplx(s2) * u[c]), cplx(s1 * s2) * table[r][c]) <= 1e-12);
  }

  TEST_CASE("sl(2,R) brackets and Jacobi identity") {
    using namespace gen;
    CHECK(distance(pair_bracket(B, I), cplx(-2) * J) < 1e-15);
    CHECK(distance(pair_bracket(I, J), cplx(-2) * B) < 1e-15);
    CHECK(distance(pair_bracket(J, B), cplx(2) * I) < 1e-15);
    for (std::uint64_t k = 0; k < 100; ++k) {
      const IndexPair x = random_pair(1, 3 * k), y = random_pair(1, 3 * k + 1), z = random_pair(1, 3 * k + 2);
      CHECK(distance(pair_bracket(x, x), {}) == 0.0);
      const IndexPair jac =
          pair_bracket(x, pair_bracket(y, z)) + pair_bracket(y, pair_bracket(z, x)) + pair_bracket(z, pair_bracket(x, y));
      CHECK(distance(jac, {}) <= 1e-12);
    }
  }

  TEST_CASE("E commutes with everything") {
    for (std::uint64_t k = 0; k < 10; ++k) CHECK(distance(pair_bracket(gen::E, random_pair(3, k)), {}) < 1e-15);
  }

  TEST_CASE("action on C") {
    const cplx z{0.4, -1.7};
    CHECK(pair_action(gen::E, z) == z);
    CHECK(pair_action(gen::B, z) == std::conj(z));
    CHECK(pair_action({2.0, 3.0}, cplx(1, 1)) == cplx(2, 3));
  }

  TEST_CASE("matrix representation") {
    const Mat2 e = matrix_rep(gen::E), b = matrix_rep(gen::B), j = matrix_rep(gen::J);
    CHECK(mat_dist(e, Eigen::Matrix2d::Identity()) == 0.0);
    CHECK(mat_dist(b, Eigen::Vector2d(1, -1).asDiagonal().toDenseMatrix()) == 0.0);
    Eigen::Matrix2d swap;
    swap << 0, 1, 1, 0;
    CHECK(mat_dist(j, swap) == 0.0);
    for (std::uint64_t k = 0; k < 1000; ++k) {
      const IndexPair p = random_pair(5, 2 * k), q = random_pair(5, 2 * k + 1);
      CHECK(mat_dist(matrix_rep(p), oracle::real_matrix(p)) <= 1e-15);
      CHECK(mat_dist(matrix_rep(pair_product(p, q)), eig(matrix_rep(p)) * eig(matrix_rep(q))) <= 1e-12);
      CHECK(distance(pair_from_matrix(matrix_rep(p)), p) <= 1e-15);
      CHECK(matrix_rep(p).det() == doctest::Approx((p.a * std::conj(p.b)).real()).epsilon(1e-12));
    }
  }

  TEST_CASE("rank of the matrix representation") {
    CHECK(matrix_rep({}).rank() == 0);
    CHECK(matrix_rep({1.0, 0.0}).rank() == 1);                 // Re(a conj b) = 0
    CHECK(matrix_rep({cplx(0, 1), 1.0}).rank() == 1);
    CHECK(matrix_rep({cplx(1, 2), cplx(3, -1)}).rank() == 2);
  }

  TEST_CASE("2x2 exponential agrees with a dense matrix exponential") {
    for (std::uint64_t k = 0; k < 50; ++k) {
      const Mat2 m = matrix_rep(cplx(2.0) * random_pair(17, k));
      const Eigen::Matrix2d want = eig(m).exp();
      CHECK(mat_dist(nlsh::exp(m), want) <= 1e-12 * std::max(1.0, want.cwiseAbs().maxCoeff()));
    }
  }

  TEST_CASE("derivative of mixed powers") {
    const cplx w{0.3, -0.8};
    CHECK(std::abs(mixed_power_derivative(1.0, gen::E, w, {}) - w) < 1e-15);
    CHECK(std::abs(mixed_power_derivative(1.0, random_pair(2, 0), 0.0, random_pair(2, 1))) < 1e-15);
    for (std::uint64_t k = 0; k < 20; ++k) {
      const cplx z = random_z(21, k, 2.0);
      const IndexPair idx = random_pair(22, k), didx = random_pair(23, k);
      const cplx dz = random_z(24, k, 3.0);
      const double h = 1e-5;
      auto f = [&](double s) { return mixed_power(z + s * dz, idx + cplx(s) * didx); };
      const cplx fd = (f(h) - f(-h)) / (2.0 * h);
      CHECK(std::abs(mixed_power_derivative(z, idx, dz, didx) - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
    }
  }

  TEST_CASE("composition, sum and logarithm identities on the safe region") {
    for (std::uint64_t k = 0; k < 200; ++k) {
      const cplx z = random_z(31, k, std::numbers::pi / 4);
      const IndexPair p = cplx(0.5) * random_pair(32, k), q = cplx(0.5) * random_pair(33, k);
      const cplx inner = mixed_power(z, q);
      const cplx lhs = mixed_power(inner, p), rhs = mixed_power(z, pair_product(p, q));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      const cplx prod = mixed_power(z, p) * mixed_power(z, q);
      CHECK(std::abs(prod - mixed_power(z, p + q)) <= 1e-12 * std::max(1.0, std::abs(prod)));
      CHECK(std::abs(principal_log(mixed_power(z, p)) - pair_action(p, principal_log(z))) <= 1e-12);
    }
  }
}
