#pragma once

// Mixed powers z^(a,b) = e^{a ln|z| + i b arg z} and the algebra of their
// index pairs.  An index pair (a,b) acts on C as the real-linear map
// z -> a Re z + i b Im z; products of pairs are compositions of these maps.

#include <array>
#include <complex>

namespace nlsh {

using cplx = std::complex<double>;

inline constexpr double kZeroTolerance = 1e-300;

struct IndexPair {
  cplx a{};
  cplx b{};

  friend constexpr bool operator==(const IndexPair&, const IndexPair&) = default;
};

constexpr IndexPair operator+(const IndexPair& p, const IndexPair& q) { return {p.a + q.a, p.b + q.b}; }
constexpr IndexPair operator-(const IndexPair& p, const IndexPair& q) { return {p.a - q.a, p.b - q.b}; }
constexpr IndexPair operator-(const IndexPair& p) { return {-p.a, -p.b}; }
constexpr IndexPair operator*(cplx s, const IndexPair& p) { return {s * p.a, s * p.b}; }

/// Largest absolute difference over the four real components.
double distance(const IndexPair& p, const IndexPair& q);
bool is_finite(const IndexPair& p);

namespace gen {
inline constexpr IndexPair E{cplx{1, 0}, cplx{1, 0}};
inline constexpr IndexPair B{cplx{1, 0}, cplx{-1, 0}};
inline constexpr IndexPair I{cplx{0, 1}, cplx{0, 1}};
inline constexpr IndexPair J{cplx{0, 1}, cplx{0, -1}};
}  // namespace gen

/// arg z in (-pi, pi]; the negative real axis maps to +pi regardless of the
/// sign of a zero imaginary part.
double principal_arg(cplx z);

/// ln|z| + i arg z on the principal branch.
cplx principal_log(cplx z);

/// z^(a,b).  Throws ZeroBase when |z| < kZeroTolerance.
cplx mixed_power(cplx z, const IndexPair& idx);

/// (a,b)(c,d) = (a Re c + i b Im c, b Re d + i a Im d).
IndexPair pair_product(const IndexPair& p, const IndexPair& q);

IndexPair pair_bracket(const IndexPair& p, const IndexPair& q);

/// (a,b).z = a Re z + i b Im z
cplx pair_action(const IndexPair& idx, cplx z);

/// Real 2x2 matrix in the ordered basis (1, i) of C.
struct Mat2 {
  std::array<std::array<double, 2>, 2> m{};

  double operator()(int r, int c) const { return m[r][c]; }
  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  int rank(double tol = 1e-14) const;
  cplx apply(cplx z) const {
    return {m[0][0] * z.real() + m[0][1] * z.imag(), m[1][0] * z.real() + m[1][1] * z.imag()};
  }
  friend Mat2 operator*(const Mat2& x, const Mat2& y);
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 matrix_rep(const IndexPair& idx);

/// Matrix exponential, closed form for 2x2.
Mat2 exp(const Mat2& a);

/// Inverse of matrix_rep: every real 2x2 matrix is the matrix of exactly one pair.
IndexPair pair_from_matrix(const Mat2& mat);

/// Real-linear derivative of (z, a, b) -> z^(a,b) in direction (dz, alpha, beta).
cplx mixed_power_derivative(cplx z, const IndexPair& idx, cplx dz, const IndexPair& didx);

}  // namespace nlsh
