#include "nlsh/mixedpow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlsh/errors.hpp"

namespace nlsh {

double distance(const IndexPair& p, const IndexPair& q) {
  const IndexPair d = p - q;
  return std::max({std::abs(d.a.real()), std::abs(d.a.imag()), std::abs(d.b.real()), std::abs(d.b.imag())});
}

bool is_finite(const IndexPair& p) {
  return std::isfinite(p.a.real()) && std::isfinite(p.a.imag()) && std::isfinite(p.b.real()) &&
         std::isfinite(p.b.imag());
}

double principal_arg(cplx z) {
  const double theta = std::atan2(z.imag(), z.real());
  return theta == -std::numbers::pi ? std::numbers::pi : theta;
}

cplx principal_log(cplx z) { return {std::log(std::abs(z)), principal_arg(z)}; }

cplx mixed_power(cplx z, const IndexPair& idx) {
  if (!(std::abs(z) >= kZeroTolerance)) {
    throw ZeroBase("mixed power of a zero base");
  }
  const cplx w = principal_log(z);
  return std::exp(idx.a * w.real() + cplx{0, 1} * idx.b * w.imag());
}

IndexPair pair_product(const IndexPair& p, const IndexPair& q) {
  const cplx i{0, 1};
  return {p.a * q.a.real() + i * p.b * q.a.imag(), p.b * q.b.real() + i * p.a * q.b.imag()};
}

IndexPair pair_bracket(const IndexPair& p, const IndexPair& q) { return pair_product(p, q) - pair_product(q, p); }

cplx pair_action(const IndexPair& idx, cplx z) { return idx.a * z.real() + cplx{0, 1} * idx.b * z.imag(); }

int Mat2::rank(double tol) const {
  if (std::abs(det()) > tol) return 2;
  for (const auto& row : m)
    for (double v : row)
      if (std::abs(v) > tol) return 1;
  return 0;
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
  Mat2 out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.m[r][c] = x.m[r][0] * y.m[0][c] + x.m[r][1] * y.m[1][c];
  return out;
}

Mat2 matrix_rep(const IndexPair& idx) {
  Mat2 out;
  out.m = {{{idx.a.real(), -idx.b.imag()}, {idx.a.imag(), idx.b.real()}}};
  return out;
}

Mat2 exp(const Mat2& a) {
  // a = s I + N with N traceless, so N^2 = -det(N) I.
  const double s = 0.5 * (a.m[0][0] + a.m[1][1]);
  Mat2 n = a;
  n.m[0][0] -= s;
  n.m[1][1] -= s;
  const double delta = -n.det();
  double c, f;
  if (std::abs(delta) < 1e-300) {
    c = 1.0;
    f = 1.0;
  } else if (delta > 0) {
    const double r = std::sqrt(delta);
    c = std::cosh(r);
    f = std::sinh(r) / r;
  } else {
    const double r = std::sqrt(-delta);
    c = std::cos(r);
    f = std::sin(r) / r;
  }
  const double e = std::exp(s);
  Mat2 out;
  for (int r = 0; r < 2; ++r)
    for (int col = 0; col < 2; ++col) out.m[r][col] = e * ((r == col ? c : 0.0) + f * n.m[r][col]);
  return out;
}

IndexPair pair_from_matrix(const Mat2& mat) {
  return {cplx{mat.m[0][0], mat.m[1][0]}, cplx{mat.m[1][1], -mat.m[0][1]}};
}

cplx mixed_power_derivative(cplx z, const IndexPair& idx, cplx dz, const IndexPair& didx) {
  const cplx value = mixed_power(z, idx);
  return value * (pair_action(didx, principal_log(z)) + pair_action(idx, dz / z));
}

}  // namespace nlsh
